#include <gtest/gtest.h>

#include <random>

#include "hcs/chart_action.hpp"

using namespace hcs;

namespace {

// Cubic polynomial coefficients in (z, zbar), so the grid interpolation
// reproduces them exactly.
StructureFn poly_structure(int n) {
    return [n](cplx z) {
        std::vector<cplx> mu(n - 1);
        const cplx zb = std::conj(z);
        for (int k = 2; k <= n; ++k)
            mu[k - 2] = (0.1 / k) * cplx(1.0, 0.3 * k) + 0.08 * z - cplx(0.0, 0.05) * zb * zb + 0.02 * z * z * zb / double(k);
        return mu;
    };
}

// f(z) = s e^{i theta} z + t zbar + c + e z^2, orientation preserving near 0.
DiffeoFn quad_map(double s, double theta, cplx t, cplx c, cplx e) {
    return [=](cplx z) {
        const cplx a = s * std::exp(I_unit * theta);
        return DiffeoSample{a * z + t * std::conj(z) + c + e * z * z, a + 2.0 * e * z, t};
    };
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST(ChartAction, IdentityLeavesStructure) {
    const std::vector<cplx> mu{cplx(0.2, -0.1), cplx(0.5, 0.4), cplx(-0.3, 0.0)};
    for (Normalization nm : {Normalization::negative, Normalization::positive})
        EXPECT_LT(max_diff(act_on_generator(mu, 1.0, 0.0, nm), mu), 1e-15);
    EXPECT_EQ(pullback_beltrami(cplx(0.3, 0.2), 1.0, 0.0), cplx(0.3, 0.2));
}

TEST(ChartAction, RotationOfConstantBeltrami) {
    const cplx mu2(0.3, -0.2);
    for (double th : {0.3, 1.1, -2.0}) {
        const cplx fz = std::exp(I_unit * th);
        const cplx expect = mu2 * std::exp(-2.0 * I_unit * th);
        EXPECT_LT(std::abs(pullback_beltrami(mu2, fz, 0.0) - expect), 1e-15);
        for (Normalization nm : {Normalization::negative, Normalization::positive})
            EXPECT_LT(std::abs(act_on_generator({mu2}, fz, 0.0, nm)[0] - expect), 1e-15);
    }
}

TEST(ChartAction, HolomorphicMapFixesStandardStructure) {
    const std::vector<cplx> zero(3, 0.0);
    const auto out = act_on_generator(zero, cplx(0.7, 0.4), 0.0, Normalization::negative);
    EXPECT_EQ(max_diff(out, zero), 0.0);
    EXPECT_EQ(pullback_beltrami(0.0, cplx(0.7, 0.4), 0.0), cplx(0.0));
}

TEST(ChartAction, DegreeTwoMatchesClassicalPullback) {
    // The positive normalization ideal <pbar - mu p> is the classical one;
    // the negative one carries -mu.
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (int t = 0; t < 20; ++t) {
        const cplx mu(u(rng), u(rng)), fz(1.0 + u(rng), u(rng)), fzb(u(rng), u(rng));
        const cplx classical = pullback_beltrami(mu, fz, fzb);
        EXPECT_LT(std::abs(act_on_generator({mu}, fz, fzb, Normalization::positive)[0] - classical), 1e-14);
        const cplx neg = -pullback_beltrami(-mu, fz, fzb);
        EXPECT_LT(std::abs(act_on_generator({mu}, fz, fzb, Normalization::negative)[0] - neg), 1e-14);
    }
}

TEST(ChartAction, ActionIsARightAction) {
    // I.(g o f) = (I.g).f, checked pointwise with exact derivatives.
    const StructureFn I = poly_structure(4);
    const DiffeoFn f = quad_map(0.9, 0.4, cplx(0.1, 0.05), cplx(0.02, -0.01), cplx(0.05, 0.02));
    const DiffeoFn g = quad_map(1.1, -0.7, cplx(-0.08, 0.1), cplx(-0.03, 0.04), cplx(-0.04, 0.03));
    const DiffeoFn gf = [&](cplx z) {
        const DiffeoSample fs = f(z);
        return compose_samples(g(fs.f), fs);
    };
    for (Normalization nm : {Normalization::negative, Normalization::positive}) {
        const StructureFn lhs = act_by_chart_diffeo(I, gf, nm);
        const StructureFn rhs = act_by_chart_diffeo(act_by_chart_diffeo(I, g, nm), f, nm);
        for (cplx z : {cplx(0.0), cplx(0.1, 0.2), cplx(-0.25, 0.05), cplx(0.3, -0.3)})
            EXPECT_LT(max_diff(lhs(z), rhs(z)), 1e-14);
    }
}

TEST(ChartAction, GridActionMatchesPointwise) {
    auto D = std::make_shared<const DiskChart>(41, 0.6);
    const int n = 4;
    const StructureFn I = poly_structure(n);
    HigherStructure G = make_structure(D, n);
    for (Eigen::Index i = 0; i < D->size(); ++i) {
        const auto mu = I(D->points()[i]);
        for (int k = 2; k <= n; ++k) G.mu_k(k)[i] = mu[k - 2];
    }
    // Maps the chart into itself so interpolation never extrapolates.
    const DiffeoFn f = quad_map(0.5, 0.3, cplx(0.05, 0.02), cplx(0.01, 0.0), cplx(0.03, 0.0));
    const HigherStructure A = act_by_chart_diffeo(G, f);
    const StructureFn P = act_by_chart_diffeo(I, f, G.norm);
    double err = 0.0;
    for (Eigen::Index i = 0; i < D->size(); ++i) {
        const auto mu = P(D->points()[i]);
        for (int k = 2; k <= n; ++k) err = std::max(err, std::abs(A.mu_k(k)[i] - mu[k - 2]));
    }
    EXPECT_LT(err, 1e-12);

    const HigherStructure same = act_by_chart_diffeo(G, [](cplx z) { return DiffeoSample{z, 1.0, 0.0}; });
    for (int k = 2; k <= n; ++k) EXPECT_LT(max_abs(same.mu_k(k) - G.mu_k(k)), 1e-14);
}

TEST(ChartAction, Errors) {
    EXPECT_THROW(act_on_generator({0.1}, 0.5, 1.0, Normalization::negative), Error);
    EXPECT_THROW(pullback_beltrami(1.2, 1.0, 0.0), Error);
    try {
        act_on_generator({0.1}, 0.5, 1.0, Normalization::negative);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "action.orientation");
    }
}
