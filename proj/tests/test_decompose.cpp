#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "hcs/decompose.hpp"

using namespace hcs;
using namespace hcs::test;

namespace {

std::vector<HigherStructure> test_structures(const std::shared_ptr<const FlatTorus>& T, std::mt19937_64& rng, int n,
                                             int count) {
    std::vector<HigherStructure> v;
    for (int i = 0; i < count; ++i) v.push_back(torus_structure(T, rng, n, 0.2));
    return v;
}

// Constant-coefficient jets in p alone Poisson-commute.
JetField constant_p_power(const std::shared_ptr<const FlatTorus>& T, int cap, int k, cplx c) {
    JetField H(T, cap);
    H.at(k, 0).setConstant(c);
    H.at(0, k).setConstant(std::conj(c));
    return H;
}

}  // namespace

TEST(Decompose, BchBasicIdentities) {
    std::mt19937_64 rng(1);
    auto T = torus(12);
    const JetField X = torus_jet(T, rng, 4, 2, true, 0.2), Y = torus_jet(T, rng, 4, 2, true, 0.2);
    EXPECT_EQ(max_diff(bch(X, JetField(T, 4)), X), 0.0);
    const JetField Z = bch(X, Y);
    const JetField W = jet_scale(bch(jet_scale(Y, -1.0), jet_scale(X, -1.0)), -1.0);
    EXPECT_LT(max_diff(Z, W), 1e-13 * jet_max_abs(Z));
    // Inverse flow: bch(-X, X) = 0.
    EXPECT_LT(jet_max_abs(bch(jet_scale(X, -1.0), X)), 1e-15);
}

TEST(Decompose, BchIsAssociativeOnTruncatedJets) {
    // With every piece of degree >= 2 the fourth-order series is exact below
    // degree 6, so the group law is associative.
    std::mt19937_64 rng(2);
    auto T = torus(12);
    const JetField X = torus_jet(T, rng, 5, 2, true, 0.3), Y = torus_jet(T, rng, 5, 2, true, 0.3),
                   Z = torus_jet(T, rng, 5, 2, true, 0.3);
    const JetField a = bch(bch(X, Y), Z), b = bch(X, bch(Y, Z));
    EXPECT_LT(max_diff(a, b), 1e-12 * jet_max_abs(a));
}

TEST(Decompose, SequentialExponentOrdering) {
    std::mt19937_64 rng(3);
    auto T = torus(12);
    const JetField A = torus_jet(T, rng, 3, 2, true, 0.2), B = torus_jet(T, rng, 3, 2, true, 0.2);
    HamiltonianJet H;
    H.pieces.emplace_back(0.5, A);
    H.pieces.emplace_back(0.25, B);
    const JetField Z = sequential_exponent(H);
    EXPECT_EQ(max_diff(Z, bch(jet_scale(B, 0.25), jet_scale(A, 0.5))), 0.0);
    EXPECT_EQ(max_diff(sequential_exponent(HamiltonianJet::autonomous(A, 0.5)), jet_scale(A, 0.5)), 0.0);

    // The series is exact at cap 3, so the time-one flow of the exponent acts
    // like the two-piece flow. A 12-point grid aliases the products and would
    // leave a mismatch near 1e-7; 24 points resolve them.
    auto F = torus(24);
    const JetField Af = torus_jet(F, rng, 3, 2, true, 0.2), Bf = torus_jet(F, rng, 3, 2, true, 0.2);
    HamiltonianJet G;
    G.pieces.emplace_back(0.5, Af);
    G.pieces.emplace_back(0.25, Bf);
    const auto tests = test_structures(F, rng, 4, 3);
    EXPECT_LT(compare_actions(G, HamiltonianJet::autonomous(sequential_exponent(G)), tests).max_error, 1e-12);
    HamiltonianJet swapped;
    swapped.pieces.emplace_back(1.0, bch(jet_scale(Af, 0.5), jet_scale(Bf, 0.25)));
    EXPECT_GT(compare_actions(G, swapped, tests).max_error, 1e-4);
}

TEST(Decompose, HomogeneousInputIsItsOwnDecomposition) {
    std::mt19937_64 rng(4);
    auto T = torus(12);
    for (int k = 2; k <= 4; ++k) {
        const JetField G = jet_degree_part(torus_jet(T, rng, 4, 2, true, 0.2), k);
        const Decomposition D = decompose_inductive(HamiltonianJet::autonomous(G), {});
        for (int j = 2; j <= 4; ++j) EXPECT_EQ(max_diff(D.parts[j], j == k ? G : JetField(T, 4)), 0.0);
    }
}

TEST(Decompose, VanishingAverageQuadraticPart) {
    // Pieces whose degree-2 parts cancel over the flow time give H^2 = 0.
    std::mt19937_64 rng(5);
    auto T = torus(12);
    const JetField Q = jet_degree_part(torus_jet(T, rng, 3, 2, true, 0.2), 2);
    const JetField A = jet_add(Q, jet_degree_part(torus_jet(T, rng, 3, 3, true, 0.2), 3));
    const JetField B = jet_add(jet_scale(Q, -1.0), jet_degree_part(torus_jet(T, rng, 3, 3, true, 0.2), 3));
    HamiltonianJet H;
    H.pieces.emplace_back(0.5, A);
    H.pieces.emplace_back(0.5, B);
    const Decomposition D = decompose_inductive(H, {});
    EXPECT_EQ(jet_max_abs(D.parts[2]), 0.0);
    EXPECT_GT(jet_max_abs(D.parts[3]), 0.0);
}

TEST(Decompose, RecomposedFlowActsLikeTheOriginal) {
    std::mt19937_64 rng(6);
    auto T = torus(24);
    const int n = 5;
    const auto tests = test_structures(T, rng, n, 3);
    HamiltonianJet H;
    for (double d : {0.5, 0.3, 0.6}) H.pieces.emplace_back(d, torus_jet(T, rng, n - 1, 2, true, 0.1));
    const Decomposition D = decompose_inductive(H, tests);
    EXPECT_LT(D.check.max_error, 1e-12);
    EXPECT_EQ(D.check.per_structure.size(), tests.size());
    for (int k = 2; k <= n - 1; ++k)
        for (int d = 1; d <= n - 1; ++d)
            if (d != k) EXPECT_EQ(jet_max_abs(jet_degree_part(D.parts[k], d)), 0.0);
}

TEST(Decompose, ExponentialCoordinates) {
    std::mt19937_64 rng(7);
    auto T = torus(24);
    const int n = 5;
    const auto tests = test_structures(T, rng, n, 3);

    const JetField P3 = jet_degree_part(torus_jet(T, rng, n - 1, 2, true, 0.2), 3);
    const ExponentialResult single = exponential_hamiltonian({JetField(T, n - 1), P3}, tests);
    EXPECT_LT(max_diff(single.G, P3), 1e-15);

    const JetField C2 = constant_p_power(T, 3, 2, cplx(0.1, 0.2)), C3 = constant_p_power(T, 3, 3, cplx(-0.3, 0.1));
    const ExponentialResult sum = exponential_hamiltonian({C2, C3}, {});
    EXPECT_LT(max_diff(sum.G, jet_add(C2, C3)), 1e-14);

    // Brackets of degrees 2 and 3 land in degree 4, so at cap 4 the parts do
    // not commute and G differs from their sum.
    const JetField A = jet_degree_part(torus_jet(T, rng, n - 1, 2, true, 0.2), 2);
    const ExponentialResult mixed = exponential_hamiltonian({A, P3}, tests);
    EXPECT_LT(mixed.check.max_error, 1e-12);
    EXPECT_GT(max_diff(mixed.G, jet_add(A, P3)), 1e-6);
}

TEST(Decompose, RejectsLinearParts) {
    std::mt19937_64 rng(8);
    auto T = torus(8);
    try {
        decompose_inductive(HamiltonianJet::autonomous(torus_jet(T, rng, 3, 1, true, 0.1)), {});
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "decompose.stationarity");
    }
    EXPECT_THROW(decompose_inductive(HamiltonianJet{}, {}), Error);
}
