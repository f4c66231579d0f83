#pragma once

// Petersson-orthogonal splitting of k-Beltrami differentials into a harmonic
// part and a dbar-exact part, plus the fibrewise pairing of holomorphic
// differentials.

#include "hcs/surface.hpp"

namespace hcs {

struct HodgeSplit {
    int k = 0;
    TensorField harmonic;   // (1-k, 1)
    TensorField potential;  // (1-k, 0)
    double reconstruction = 0.0;  // |mu - harmonic - dbar w| / |mu|, Petersson norm
    double orthogonality = 0.0;   // |<harmonic, dbar w>| / |mu|^2
};

// Harmonic k-Beltrami differentials conj(q)/lambda^{k-1} for the discrete
// holomorphic basis, orthonormalised under the Petersson pairing.
std::vector<CVec> harmonic_frame(const BolzaSurface& S, int k);

TensorField harmonic_projection(const BolzaSurface& S, const TensorField& mu, int k);
TensorField solve_dbar_potential(const BolzaSurface& S, const TensorField& r, int k, double tol = 1e-8);
HodgeSplit hodge_decompose(const BolzaSurface& S, const TensorField& mu, int k, double tol = 1e-8);

// int q1 conj(q2) / g^{k-1}; zero by contract when the degrees differ.
cplx pressure_restriction_pairing(const BolzaSurface& S, const TensorField& q1, const TensorField& q2);

double petersson_norm(const BolzaSurface& S, const CVec& mu, int k);

}  // namespace hcs
