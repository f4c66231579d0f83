#include "hcs/bolza.hpp"

#include <cmath>

namespace hcs {

Mobius recentre(cplx x) { return {1.0, -x, -std::conj(x), 1.0}; }

double hyp_dist(cplx u, cplx v) {
    const double r = std::abs((v - u) / (1.0 - std::conj(u) * v));
    return 2.0 * std::atanh(std::min(r, 1.0 - 1e-16));
}

cplx geodesic_point(cplx u, cplx v, double t) {
    const Mobius T = recentre(u);
    const cplx w = T(v);
    const double r = std::abs(w);
    if (r < 1e-300) return u;
    const double d = 2.0 * std::atanh(r);
    return T.inverse()(w / r * std::tanh(t * d / 2.0));
}

const BolzaConstants& bolza_constants() {
    static const BolzaConstants c = [] {
        const double s2 = std::sqrt(2.0);
        const double dm = std::acosh(1.0 + s2);
        const double dv = std::acosh((1.0 + s2) * (1.0 + s2));
        return BolzaConstants{std::tanh(dm), std::tanh(dm / 2.0), std::tanh(dv / 2.0), dv};
    }();
    return c;
}

Mobius rotation(int m) {
    const cplx e = std::polar(1.0, m * M_PI / 8.0);
    return {e, 0.0, 0.0, std::conj(e)};
}

namespace {

double psl_defect(const Mobius& m) {
    const cplx det = m.a * m.d - m.b * m.c;
    const cplx s = std::sqrt(det);
    Eigen::Matrix2cd M = m.matrix() / s;
    const double e1 = (M - Eigen::Matrix2cd::Identity()).operatorNorm();
    const double e2 = (M + Eigen::Matrix2cd::Identity()).operatorNorm();
    return std::min(e1, e2);
}

Mobius comm(const Mobius& x, const Mobius& y) { return x * y * x.inverse() * y.inverse(); }

}  // namespace

double FuchsianGroup::relation_defect() const {
    return psl_defect(comm(gen[0], gen[1]) * comm(gen[2], gen[3]));
}

double FuchsianGroup::side_relation_defect() const {
    // a0 a1^-1 a2 a3^-1 a0^-1 a1 a2^-1 a3 = 1
    const auto& a = side;
    return psl_defect(a[0] * a[5] * a[2] * a[7] * a[4] * a[1] * a[6] * a[3]);
}

FuchsianGroup bolza_group() {
    const double t = bolza_constants().t;
    const double s = 1.0 / std::sqrt(1.0 - t * t);
    const Mobius T{s, t * s, t * s, s};
    FuchsianGroup G;
    for (int j = 0; j < 4; ++j) {
        G.side[j] = rotation(j) * T * rotation(-j);
        G.side[j + 4] = G.side[j].inverse();
    }
    const auto& a = G.side;
    G.gen[0] = a[0];
    G.gen[1] = a[5] * a[2] * a[7];
    G.gen[2] = a[5] * a[2];
    G.gen[3] = a[7] * a[1];
    G.gen_words = {"a0", "a1^-1 a2 a3^-1", "a1^-1 a2", "a3^-1 a1"};
    return G;
}

}  // namespace hcs
