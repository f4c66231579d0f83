#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "hcs/disk_chart.hpp"
#include "hcs/jets.hpp"

using namespace hcs;
using namespace hcs::test;

TEST(Jets, MonomialIndexing) {
    EXPECT_EQ(jet_count(1), 2);
    EXPECT_EQ(jet_count(3), 9);
    const std::pair<int, int> order[] = {{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}};
    for (int i = 0; i < 6; ++i) {
        EXPECT_EQ(jet_index(order[i].first, order[i].second), i);
        EXPECT_EQ(jet_monomial(i), order[i]);
    }
    for (int i = 0; i < jet_count(6); ++i) {
        auto [a, b] = jet_monomial(i);
        EXPECT_EQ(jet_index(a, b), i);
    }
}

TEST(Jets, PolyProductAndTruncation) {
    const JetPoly p = JetPoly::monomial(2, 1, 0), pb = JetPoly::monomial(2, 0, 1);
    const JetPoly ppb = jet_mul(p, pb);
    EXPECT_EQ(ppb.get(1, 1), cplx(1.0));
    for (int i = 0; i < jet_count(2); ++i)
        if (i != jet_index(1, 1)) EXPECT_EQ(ppb.coeffs()[i], cplx(0.0));

    const JetPoly p2 = JetPoly::monomial(2, 2, 0);
    EXPECT_EQ(jet_order(jet_mul(p2, p)), 3);  // zero jet at cap 2
}

TEST(Jets, PolyProductCommutes) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    JetPoly f(4), h(4);
    for (auto& c : f.coeffs()) c = cplx(g(rng), g(rng));
    for (auto& c : h.coeffs()) c = cplx(g(rng), g(rng));
    const JetPoly a = jet_mul(f, h), b = jet_mul(h, f);
    for (int i = 0; i < jet_count(4); ++i) EXPECT_NEAR(std::abs(a.coeffs()[i] - b.coeffs()[i]), 0.0, 1e-14);
}

TEST(Jets, Conjugation) {
    const JetPoly p = JetPoly::monomial(3, 1, 0);
    EXPECT_EQ(jet_conj(p).get(0, 1), cplx(1.0));
    const JetPoly ip2 = JetPoly::monomial(3, 2, 0, I_unit);
    EXPECT_EQ(jet_conj(ip2).get(0, 2), -I_unit);
    EXPECT_EQ(jet_conj(ip2).get(2, 0), cplx(0.0));

    std::mt19937_64 rng(4);
    auto T = torus(8);
    const JetField F = torus_jet(T, rng, 3, 1, false, 1.0);
    EXPECT_EQ(max_diff(jet_conj(jet_conj(F)), F), 0.0);
}

TEST(Jets, BracketOfConstantMonomialsVanishes) {
    auto T = torus(8);
    JetField P(T, 2), Pb(T, 2);
    P.at(1, 0).setOnes();
    Pb.at(0, 1).setOnes();
    EXPECT_LT(jet_max_abs(jet_poisson(P, Pb)), 1e-14);
}

TEST(Jets, BracketOfLinearJets) {
    // {w p, a p} = (a dw - w da) p. The fourth-order differences are exact on
    // these polynomials, so the only error is roundoff.
    auto D = std::make_shared<const DiskChart>(21, 0.5);
    const CVec& z = D->points();
    const CVec w = z.array().square();
    const CVec a = z.array().cube();
    JetField W(D, 2), A(D, 2);
    W.at(1, 0) = w;
    A.at(1, 0) = a;
    const JetField B = jet_poisson(W, A);
    const CVec expect = -z.array().pow(4);
    EXPECT_LT(max_diff(B.get(1, 0), expect), 1e-12);
    for (int i = 0; i < jet_count(2); ++i)
        if (i != jet_index(1, 0)) EXPECT_LT(max_abs(B.slices()[i]), 1e-12);
}

TEST(Jets, BracketAxiomsOnTorus) {
    std::mt19937_64 rng(6);
    auto T = torus(16);
    for (int t = 0; t < 3; ++t) {
        const JetField A = torus_jet(T, rng, 4, 1, false, 1.0), B = torus_jet(T, rng, 4, 1, false, 1.0),
                       C = torus_jet(T, rng, 4, 1, false, 1.0);
        const JetField AB = jet_poisson(A, B);
        EXPECT_LT(jet_max_abs(jet_add(AB, jet_poisson(B, A))), 1e-12 * jet_max_abs(AB));
        const JetField j = jet_add(jet_add(jet_poisson(A, jet_poisson(B, C)), jet_poisson(B, jet_poisson(C, A))),
                                   jet_poisson(C, AB));
        EXPECT_LT(jet_max_abs(j), 1e-10 * jet_max_abs(jet_poisson(A, jet_poisson(B, C))));
    }
}

TEST(Jets, BracketRaisesVanishingOrder) {
    std::mt19937_64 rng(8);
    auto T = torus(8);
    const JetField A = torus_jet(T, rng, 5, 2, false, 1.0), B = torus_jet(T, rng, 5, 3, false, 1.0);
    const JetField C = jet_poisson(A, B);
    for (int d = 1; d < 4; ++d) EXPECT_EQ(jet_max_abs(jet_degree_part(C, d)), 0.0) << d;
}

TEST(Jets, ReduceLaplacianExample) {
    // I = <pbar + mu2 p>, H = 4 eta p pbar reduces to -4 eta mu2 p^2.
    std::mt19937_64 rng(10);
    auto T = torus(8);
    HigherStructure I = make_structure(T, 3);
    I.mu_k(2) = torus_field(*T, rng, 1, 0.3);
    const CVec eta = torus_field(*T, rng, 1, 1.0).real().cast<cplx>();
    JetField H(T, 2);
    H.at(1, 1) = 4.0 * eta;
    const auto w = ideal_reduce(H, I);
    EXPECT_EQ(max_abs(w[1]), 0.0);
    EXPECT_LT(max_diff(w[2], (-4.0 * eta.array() * I.mu_k(2).array()).matrix()), 1e-15);
}

TEST(Jets, ReduceIsIdentityOnNormalizedJets) {
    std::mt19937_64 rng(12);
    auto T = torus(8);
    const HigherStructure I = make_structure(T, 4);
    for (int k = 1; k <= 3; ++k) {
        JetField H(T, 3);
        H.at(k, 0) = torus_field(*T, rng, 1, 1.0);
        const auto w = ideal_reduce(H, I);
        for (int j = 1; j <= 3; ++j) EXPECT_EQ(max_diff(w[j], j == k ? H.get(k, 0) : CVec::Zero(T->size())), 0.0);
    }
}

TEST(Jets, ReductionVanishesOnTheIdeal) {
    // Evaluate H - N at pbar = P(p) with P the ideal's graph: the difference
    // must be O(p^n), so halving p divides it by 2^n.
    std::mt19937_64 rng(14);
    auto T = torus(8);
    for (Normalization nm : {Normalization::negative, Normalization::positive}) {
        HigherStructure I = torus_structure(T, rng, 4, 0.4);
        I.norm = nm;
        const JetField H = torus_jet(T, rng, 3, 1, false, 1.0);
        const JetField N = normalized_jet(H, I);
        const JetField R = jet_add(H, jet_scale(N, -1.0));
        const Eigen::Index i = 5;
        const double s = -pbar_sign(nm);
        auto eval = [&](cplx p) {
            cplx pb = 0.0;
            for (int k = 2; k <= 4; ++k) pb += s * I.mu_k(k)[i] * std::pow(p, k - 1);
            cplx v = 0.0;
            for (int idx = 0; idx < jet_count(3); ++idx) {
                auto [a, b] = jet_monomial(idx);
                v += R.slices()[idx][i] * std::pow(p, a) * std::pow(pb, b);
            }
            return std::abs(v);
        };
        const cplx p0(0.004, 0.003);
        const double ratio = eval(p0) / eval(0.5 * p0);
        EXPECT_NEAR(std::log2(ratio), 4.0, 0.1);
    }
}

TEST(Jets, Projection) {
    std::mt19937_64 rng(16);
    auto T = torus(8);
    const HigherStructure I = torus_structure(T, rng, 5, 0.3);
    const HigherStructure same = project_structure(I, 5);
    EXPECT_EQ(same.mu, I.mu);
    const HigherStructure p3 = project_structure(I, 3);
    EXPECT_EQ(p3.n, 3);
    ASSERT_EQ(p3.mu.size(), 2u);
    EXPECT_EQ(p3.mu_k(3), I.mu_k(3));
    EXPECT_EQ(p3.norm, I.norm);
    EXPECT_EQ(p3.base, I.base);
    for (int j = 2; j <= 4; ++j) EXPECT_EQ(project_structure(project_structure(I, 4), j).mu, project_structure(I, j).mu);
    EXPECT_THROW(project_structure(I, 6), Error);
}

TEST(Jets, NormalizationConversionNegates) {
    std::mt19937_64 rng(18);
    auto T = torus(8);
    const HigherStructure I = torus_structure(T, rng, 3, 0.3);
    const HigherStructure P = convert_normalization(I, Normalization::positive);
    EXPECT_EQ(P.norm, Normalization::positive);
    EXPECT_EQ(P.mu_k(3), -I.mu_k(3));
    EXPECT_EQ(convert_normalization(P, Normalization::negative).mu, I.mu);
    EXPECT_EQ(normalization_from_string(to_string(Normalization::positive)), Normalization::positive);
}

TEST(Jets, StructureChecks) {
    auto T = torus(8);
    HigherStructure I = make_structure(T, 3);
    I.mu_k(2).setConstant(1.5);
    EXPECT_THROW(check_structure(I), Error);
    EXPECT_THROW(make_structure(T, 1), Error);
    JetField H(torus(10), 2);
    EXPECT_THROW(ideal_reduce(H, make_structure(T, 3)), Error);
}
