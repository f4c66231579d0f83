#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "hcs/harmonicize.hpp"
#include "hcs/hodge.hpp"

using namespace hcs;
using namespace hcs::test;

namespace {

CVec harmonic_combination(const std::vector<CVec>& frame, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CVec h = CVec::Zero(frame.front().size());
    for (const CVec& e : frame) h += cplx(g(rng), g(rng)) * e;
    return h;
}

}  // namespace

TEST(Hodge, HarmonicFrameIsOrthonormal) {
    const auto S = coarse_surface();
    for (int k = 2; k <= 4; ++k) {
        const auto e = harmonic_frame(*S, k);
        ASSERT_EQ(static_cast<int>(e.size()), 2 * k - 1);
        for (size_t i = 0; i < e.size(); ++i)
            for (size_t j = 0; j < e.size(); ++j)
                EXPECT_LT(std::abs(S->petersson(e[i], e[j], k) - (i == j ? 1.0 : 0.0)), 1e-8);
    }
}

TEST(Hodge, ProjectionFixesHarmonicAndIsIdempotent) {
    const auto S = coarse_surface();
    std::mt19937_64 rng(1);
    RandomFields rf(S, 1);
    const int k = 3;
    const TensorField h{1 - k, 1, harmonic_combination(harmonic_frame(*S, k), rng)};
    EXPECT_LT(max_abs(harmonic_projection(*S, h, k).v - h.v), 1e-10 * max_abs(h.v));

    const TensorField mu{1 - k, 1, rf.field(1 - k, 1)};
    const TensorField p = harmonic_projection(*S, mu, k);
    EXPECT_LT(max_abs(harmonic_projection(*S, p, k).v - p.v), 1e-10 * max_abs(p.v));
}

TEST(Hodge, ExactFieldsHaveSmallHarmonicPart) {
    // <dbar w, conj(q)/g^{k-1}> integrates by parts against dbar q = 0; on the
    // mesh it is zero up to the discretization error.
    const auto S = coarse_surface();
    RandomFields rf(S, 2);
    for (int k = 3; k <= 4; ++k) {
        const CVec w = rf.field(1 - k, 0);
        const TensorField ex{1 - k, 1, S->dbar(w, 1 - k, 0)};
        const double ratio = petersson_norm(*S, harmonic_projection(*S, ex, k).v, k) / petersson_norm(*S, ex.v, k);
        EXPECT_LT(ratio, 1e-2) << "k = " << k;
    }
}

TEST(Hodge, PotentialSolve) {
    const auto S = coarse_surface();
    RandomFields rf(S, 3);
    const int k = 3;
    EXPECT_EQ(max_abs(solve_dbar_potential(*S, TensorField{1 - k, 1, CVec::Zero(S->size())}, k).v), 0.0);

    const CVec w0 = rf.field(1 - k, 0);
    const TensorField r{1 - k, 1, S->dbar(w0, 1 - k, 0)};
    const TensorField w = solve_dbar_potential(*S, r, k);
    EXPECT_EQ(w.a, 1 - k);
    EXPECT_EQ(w.b, 0);
    EXPECT_LT(max_abs(w.v - w0), 1e-8 * max_abs(w0));

    const TensorField r2{1 - k, 1, S->dbar(rf.field(1 - k, 0), 1 - k, 0)};
    const TensorField sum{1 - k, 1, r.v - 2.0 * r2.v};
    const CVec lin = solve_dbar_potential(*S, sum, k).v - w.v + 2.0 * solve_dbar_potential(*S, r2, k).v;
    EXPECT_LT(max_abs(lin), 1e-10 * max_abs(w0));
}

TEST(Hodge, DecomposeRoundTrips) {
    const auto S = coarse_surface();
    std::mt19937_64 rng(4);
    RandomFields rf(S, 4);
    const int k = 3;
    const CVec h = harmonic_combination(harmonic_frame(*S, k), rng);
    const HodgeSplit a = hodge_decompose(*S, TensorField{1 - k, 1, h}, k);
    EXPECT_LT(max_abs(a.harmonic.v - h), 1e-10 * max_abs(h));
    EXPECT_LT(max_abs(a.potential.v), 1e-8 * max_abs(h));

    // Exact input: almost all of it lands in the exact part. The potential
    // itself is not compared with w0, since removing the small harmonic
    // leakage changes it through the poorly conditioned low modes of dbar.
    const CVec ex = S->dbar(rf.field(1 - k, 0), 1 - k, 0);
    const HodgeSplit b = hodge_decompose(*S, TensorField{1 - k, 1, ex}, k);
    EXPECT_LT(b.reconstruction, 1e-8);
    EXPECT_LT(petersson_norm(*S, b.harmonic.v, k), 1e-2 * petersson_norm(*S, ex, k));

    const HodgeSplit c = hodge_decompose(*S, TensorField{1 - k, 1, rf.field(1 - k, 1)}, k);
    EXPECT_LT(c.reconstruction, 1e-8);
    EXPECT_LT(c.orthogonality, 1e-8);
}

TEST(Hodge, WrongTypeIsRejected) {
    const auto S = coarse_surface();
    try {
        harmonic_projection(*S, TensorField{-1, 1, CVec::Zero(S->size())}, 3);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "hodge.type");
    }
}

TEST(Hodge, PressurePairing) {
    const auto S = coarse_surface();
    const TensorField q2{2, 0, S->holomorphic_basis(2).q[0]};
    const TensorField q3{3, 0, S->holomorphic_basis(3).q[1]};
    const cplx self = pressure_restriction_pairing(*S, q3, q3);
    EXPECT_GT(self.real(), 0.0);
    EXPECT_LT(std::abs(self.imag()), 1e-14 * self.real());
    EXPECT_EQ(pressure_restriction_pairing(*S, q2, q3), cplx(0.0));
    const TensorField twice{3, 0, 2.0 * q3.v};
    EXPECT_LT(std::abs(pressure_restriction_pairing(*S, twice, q3) - 2.0 * self), 1e-14 * self.real());
}
