#include "hcs/hodge.hpp"

#include <cmath>

namespace hcs {

namespace {

void require_type(const TensorField& t, int a, int b, const char* what) {
    if (t.a != a || t.b != b)
        throw Error("hodge.type", std::string(what) + " has the wrong tensor type",
                    json{{"expected", {a, b}}, {"got", {t.a, t.b}}});
}

}  // namespace

double petersson_norm(const BolzaSurface& S, const CVec& mu, int k) { return std::sqrt(std::max(0.0, S.petersson(mu, mu, k).real())); }

std::vector<CVec> harmonic_frame(const BolzaSurface& S, int k) {
    if (k < 2) throw Error("hodge.degree", "harmonic projection needs k >= 2", json{{"k", k}});
    const HoloBasis& B = S.holomorphic_basis(k);
    const RVec& lam = S.lambda();
    std::vector<CVec> e;
    for (const CVec& q : B.q) {
        CVec h = q.conjugate();
        for (Eigen::Index i = 0; i < h.size(); ++i) h[i] /= std::pow(lam[i], k - 1);
        e.push_back(h);
    }
    // Gram-Schmidt twice for stability.
    for (int pass = 0; pass < 2; ++pass)
        for (size_t i = 0; i < e.size(); ++i) {
            for (size_t j = 0; j < i; ++j) e[i] -= S.petersson(e[i], e[j], k) * e[j];
            e[i] /= petersson_norm(S, e[i], k);
        }
    return e;
}

TensorField harmonic_projection(const BolzaSurface& S, const TensorField& mu, int k) {
    require_type(mu, 1 - k, 1, "projection input");
    TensorField r{1 - k, 1, CVec::Zero(mu.v.size())};
    for (const CVec& e : harmonic_frame(S, k)) r.v += S.petersson(mu.v, e, k) * e;
    return r;
}

TensorField solve_dbar_potential(const BolzaSurface& S, const TensorField& r, int k, double tol) {
    require_type(r, 1 - k, 1, "potential right-hand side");
    TensorField w{1 - k, 0, S.solve_dbar(r.v, 1 - k)};
    const double rn = max_abs(r.v);
    if (rn == 0.0) return w;
    const double res = max_abs(S.dbar(w.v, 1 - k, 0) - r.v) / rn;
    if (!(res < tol))
        throw Error("hodge.residual", "dbar potential residual above tolerance", json{{"residual", res}, {"tol", tol}, {"k", k}});
    return w;
}

HodgeSplit hodge_decompose(const BolzaSurface& S, const TensorField& mu, int k, double tol) {
    HodgeSplit h;
    h.k = k;
    h.harmonic = harmonic_projection(S, mu, k);
    TensorField rest{1 - k, 1, mu.v - h.harmonic.v};
    h.potential = solve_dbar_potential(S, rest, k, tol);
    const CVec ex = S.dbar(h.potential.v, 1 - k, 0);
    const double n2 = S.petersson(mu.v, mu.v, k).real();
    if (n2 > 0.0) {
        h.reconstruction = petersson_norm(S, mu.v - h.harmonic.v - ex, k) / std::sqrt(n2);
        h.orthogonality = std::abs(S.petersson(h.harmonic.v, ex, k)) / n2;
    }
    if (!(h.reconstruction < tol))
        throw Error("hodge.reconstruction", "Hodge reconstruction above tolerance", json{{"residual", h.reconstruction}, {"tol", tol}});
    return h;
}

cplx pressure_restriction_pairing(const BolzaSurface& S, const TensorField& q1, const TensorField& q2) {
    if (q1.b != 0 || q2.b != 0) throw Error("hodge.type", "pairing expects holomorphic (k,0) inputs");
    if (q1.a != q2.a) return 0.0;
    const int k = q1.a;
    const RVec& lam = S.lambda();
    CVec dens(q1.v.size());
    // q1 conj(q2) g^{-(k-1)} has coefficient type (1,1).
    for (Eigen::Index i = 0; i < dens.size(); ++i) dens[i] = q1.v[i] * std::conj(q2.v[i]) * std::pow(lam[i], 1 - k);
    return S.integrate_density(dens);
}

}  // namespace hcs
