#include "hcs/chart_action.hpp"

#include <cmath>

namespace hcs {

namespace {

// Polynomials in p alone, p-degree 0..D.
using PSeries = std::vector<cplx>;

PSeries pmul(const PSeries& x, const PSeries& y, int D) {
    PSeries r(D + 1, 0.0);
    for (int i = 0; i <= D; ++i) {
        if (x[i] == 0.0) continue;
        for (int j = 0; i + j <= D; ++j) r[i + j] += x[i] * y[j];
    }
    return r;
}

}  // namespace

std::vector<cplx> act_on_generator(const std::vector<cplx>& mu, cplx fz, cplx fzb, Normalization norm) {
    const int n = static_cast<int>(mu.size()) + 1;
    const int D = n - 1;
    const double jac = std::norm(fz) - std::norm(fzb);
    if (!(jac > 0.0)) throw Error("action.orientation", "chart map is not orientation preserving", json{{"jacobian", jac}});

    // Fibre coordinates at f(z) in terms of (p, pbar) at z.
    const cplx fbar_z = std::conj(fzb), fbar_zb = std::conj(fz);
    JetPoly P(D), Pb(D);
    P.set(1, 0, fbar_zb / jac);
    P.set(0, 1, -fbar_z / jac);
    Pb.set(1, 0, -fzb / jac);
    Pb.set(0, 1, fz / jac);

    JetPoly g = jet_scale(Pb, pbar_sign(norm));
    JetPoly Pk = P;  // P^{k-1}
    for (int k = 2; k <= n; ++k) {
        g = jet_add(g, jet_scale(Pk, mu[k - 2]));
        if (k < n) Pk = jet_mul(Pk, P);
    }

    // Solve g(p, pbar) = 0 for pbar = phi(p) by fixed-point substitution; each
    // sweep fixes one more degree.
    const cplx c = g.get(0, 1);
    if (std::abs(c) < 1e-300) throw Error("action.degenerate", "generator has no pbar term");
    PSeries phi(D + 1, 0.0);
    for (int it = 0; it < D; ++it) {
        std::vector<PSeries> pw{PSeries(D + 1, 0.0)};
        pw[0][0] = 1.0;
        for (int b = 1; b <= D; ++b) pw.push_back(pmul(pw.back(), phi, D));
        PSeries rest(D + 1, 0.0);
        for (int i = 0; i < jet_count(D); ++i) {
            auto [a, b] = jet_monomial(i);
            if (a == 0 && b == 1) continue;
            const cplx coeff = g.coeffs()[i];
            if (coeff == 0.0) continue;
            for (int j = a; j <= D; ++j) rest[j] += coeff * pw[b][j - a];
        }
        for (int j = 0; j <= D; ++j) phi[j] = -rest[j] / c;
    }

    // Positive: -pbar + sum mu_k p^{k-1}; negative: pbar + sum mu_k p^{k-1}.
    const double s = -pbar_sign(norm);
    std::vector<cplx> out(n - 1);
    for (int k = 2; k <= n; ++k) out[k - 2] = s * phi[k - 1];
    if (!(std::abs(out[0]) < 1.0))
        throw Error("action.mu2", "|mu_2| >= 1 after action", json{{"abs_mu2", std::abs(out[0])}});
    return out;
}

StructureFn act_by_chart_diffeo(const StructureFn& I, const DiffeoFn& f, Normalization norm) {
    return [I, f, norm](cplx z) {
        const DiffeoSample s = f(z);
        return act_on_generator(I(s.f), s.fz, s.fzb, norm);
    };
}

HigherStructure act_by_chart_diffeo(const HigherStructure& I, const DiffeoFn& f) {
    auto chart = std::dynamic_pointer_cast<const DiskChart>(I.base);
    if (!chart) throw Error("action.base", "chart action needs a disk-chart structure");
    check_structure(I);
    HigherStructure r = I;
    const CVec& z = chart->points();
    std::vector<cplx> m(I.n - 1);
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const DiffeoSample s = f(z[i]);
        for (int k = 2; k <= I.n; ++k) m[k - 2] = chart->interpolate(I.mu_k(k), s.f);
        auto out = act_on_generator(m, s.fz, s.fzb, I.norm);
        for (int k = 2; k <= I.n; ++k) r.mu_k(k)[i] = out[k - 2];
    }
    return r;
}

cplx pullback_beltrami(cplx mu, cplx fz, cplx fzb) {
    if (!(std::norm(fz) - std::norm(fzb) > 0.0)) throw Error("pullback.orientation", "map is not orientation preserving");
    if (!(std::abs(mu) < 1.0)) throw Error("pullback.mu", "Beltrami coefficient must satisfy |mu| < 1");
    const cplx den = fz + mu * std::conj(fzb);
    if (std::abs(den) < 1e-14) throw Error("pullback.degenerate", "degenerate denominator");
    return (fzb + mu * std::conj(fz)) / den;
}

CVec pullback_beltrami(const std::vector<DiffeoSample>& f, const CVec& mu_at_f) {
    if (static_cast<Eigen::Index>(f.size()) != mu_at_f.size()) throw Error("pullback.shape", "sample count mismatch");
    CVec r(mu_at_f.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = pullback_beltrami(mu_at_f[i], f[i].fz, f[i].fzb);
    return r;
}

DiffeoSample compose_samples(const DiffeoSample& g, const DiffeoSample& f) {
    // d(g o f) = g_w f_z + g_wbar conj(f_zbar); dbar(g o f) = g_w f_zbar + g_wbar conj(f_z).
    return {g.f, g.fz * f.fz + g.fzb * std::conj(f.fzb), g.fz * f.fzb + g.fzb * std::conj(f.fz)};
}

}  // namespace hcs
