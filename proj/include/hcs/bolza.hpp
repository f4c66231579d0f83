#pragma once

// Bolza surface as the quotient of the unit disk by the group generated by the
// side pairings of the regular octagon with angles pi/4.

#include <array>
#include <string>
#include <vector>

#include "hcs/common.hpp"

namespace hcs {

struct Mobius {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    cplx operator()(cplx z) const { return (a * z + b) / (c * z + d); }
    cplx deriv(cplx z) const {
        const cplx den = c * z + d;
        return (a * d - b * c) / (den * den);
    }
    cplx deriv2(cplx z) const {
        const cplx den = c * z + d;
        return -2.0 * c * (a * d - b * c) / (den * den * den);
    }
    Mobius operator*(const Mobius& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mobius inverse() const {
        const cplx det = a * d - b * c;
        return {d / det, -b / det, -c / det, a / det};
    }
    cplx trace() const { return a + d; }
    Eigen::Matrix2cd matrix() const {
        Eigen::Matrix2cd m;
        m << a, b, c, d;
        return m;
    }
};

// Disk automorphism moving x to 0: T_x(z) = (z - x) / (1 - conj(x) z).
Mobius recentre(cplx x);
double hyp_dist(cplx u, cplx v);
// Point at hyperbolic distance fraction t along the geodesic from u to v.
cplx geodesic_point(cplx u, cplx v, double t);

struct BolzaConstants {
    double t;     // tanh of the side-pairing translation length's half
    double r_mid; // Euclidean radius of the side midpoints
    double r_vtx; // Euclidean radius of the corners
    double d_vtx; // hyperbolic distance from 0 to a corner
};
const BolzaConstants& bolza_constants();

struct FuchsianGroup {
    // side[j] for j<4 maps side j+4 onto side j; side[j+4] is its inverse.
    std::array<Mobius, 8> side;
    // A1, B1, A2, B2 as words in the side pairings.
    std::array<Mobius, 4> gen;
    std::array<std::string, 4> gen_names{"A1", "B1", "A2", "B2"};
    std::array<std::string, 4> gen_words;

    // 0..3: A1,B1,A2,B2; 4..7: their inverses.
    Mobius generator(int i) const { return i < 4 ? gen[i] : gen[i - 4].inverse(); }
    // ||[A1,B1][A2,B2] - Id|| in the operator norm, sign-normalised in PSL(2).
    double relation_defect() const;
    // Same for the octagon side-pairing relation.
    double side_relation_defect() const;
};

FuchsianGroup bolza_group();

// Rotation of the disk by m*pi/4; conjugation by it permutes the side pairings.
Mobius rotation(int m);

}  // namespace hcs
