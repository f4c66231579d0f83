#include <gtest/gtest.h>

#include <random>

#include "hcs/modeljet.hpp"

using namespace hcs;

namespace {

ModelJet random_jet(int n, std::mt19937_64& rng, int lowest = 2) {
    std::uniform_int_distribution<int> num(-7, 7), den(1, 5);
    ModelJet f = mj_identity(n);
    for (int k = lowest; k <= n; ++k) f.coef[k] = Rational(num(rng), den(rng));
    return f;
}

ModelVec random_vec(int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-7, 7), den(1, 5);
    std::vector<Rational> v;
    for (int k = 2; k <= n; ++k) v.push_back(Rational(num(rng), den(rng)));
    return mv_make(n, v);
}

}  // namespace

TEST(ModelJet, ComposeByHand) {
    // (x + x^2) o (x + x^2) = x + x^2 + (x + x^2)^2 = x + 2x^2 mod x^3.
    const ModelJet f = mj_make(2, {Rational(1)});
    EXPECT_EQ(mj_compose(f, f), mj_make(2, {Rational(2)}));

    // Same pair at n = 3 keeps the 2x^3 from the square.
    const ModelJet g = mj_make(3, {Rational(1), Rational(0)});
    EXPECT_EQ(mj_compose(g, g), mj_make(3, {Rational(2), Rational(2)}));
}

TEST(ModelJet, IdentityIsNeutral) {
    std::mt19937_64 rng(3);
    for (int n = 2; n <= 6; ++n) {
        const ModelJet f = random_jet(n, rng), e = mj_identity(n);
        EXPECT_EQ(mj_compose(e, f), f);
        EXPECT_EQ(mj_compose(f, e), f);
    }
}

TEST(ModelJet, Associativity) {
    std::mt19937_64 rng(5);
    for (int n = 2; n <= 6; ++n)
        for (int t = 0; t < 10; ++t) {
            const ModelJet f = random_jet(n, rng), g = random_jet(n, rng), h = random_jet(n, rng);
            EXPECT_EQ(mj_compose(mj_compose(f, g), h), mj_compose(f, mj_compose(g, h)));
        }
}

TEST(ModelJet, InverseByHand) {
    const Rational a(3, 7);
    EXPECT_EQ(mj_invert(mj_make(2, {a})), mj_make(2, {-a}));
    // Series reversion of x + a x^2: x - a x^2 + 2a^2 x^3 - 5a^3 x^4.
    EXPECT_EQ(mj_invert(mj_make(4, {a, Rational(0), Rational(0)})), mj_make(4, {-a, 2 * a * a, -5 * a * a * a}));
    EXPECT_EQ(mj_invert(mj_identity(5)), mj_identity(5));
}

TEST(ModelJet, DoubleInverse) {
    std::mt19937_64 rng(7);
    for (int n = 2; n <= 6; ++n) {
        const ModelJet f = random_jet(n, rng);
        EXPECT_EQ(mj_invert(mj_invert(f)), f);
        EXPECT_EQ(mj_compose(f, mj_invert(f)), mj_identity(n));
    }
}

TEST(ModelJet, CommutatorLeadingTerm) {
    // f = x + a x^2, g = x + b x^3: f o g - g o f = -ab x^4 + O(x^5).
    const ModelJet f = mj_make(4, {Rational(2), Rational(0), Rational(0)});
    const ModelJet g = mj_make(4, {Rational(0), Rational(3), Rational(0)});
    EXPECT_EQ(mj_commutator(f, g), mj_make(4, {Rational(0), Rational(0), Rational(-6)}));
}

TEST(ModelJet, CommutatorOfSecondLayerHasNoQuadraticTerm) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        const ModelJet c = mj_commutator(random_jet(3, rng), random_jet(3, rng));
        EXPECT_EQ(c.coef[2], 0);
        EXPECT_GE(mj_order(c), 3);
    }
}

TEST(ModelJet, ExpOfZeroIsIdentity) {
    for (int n = 2; n <= 6; ++n) EXPECT_EQ(mj_exp(mv_make(n, std::vector<Rational>(n - 1, Rational(0)))), mj_identity(n));
}

TEST(ModelJet, ExpOfQuadraticField) {
    // x' = x^2 from x(0) = x gives x / (1 - x) at time one.
    std::vector<Rational> v(5, Rational(0));
    v[0] = 1;
    std::vector<Rational> expect(5, Rational(1));
    EXPECT_EQ(mj_exp(mv_make(6, v)), mj_make(6, expect));
}

TEST(ModelJet, ExpOfTopDegreeIsLinear) {
    const int n = 5;
    std::vector<Rational> v(n - 1, Rational(0));
    v.back() = Rational(-4, 9);
    std::vector<Rational> a(n - 1, Rational(0));
    a.back() = Rational(-4, 9);
    EXPECT_EQ(mj_exp(mv_make(n, v)), mj_make(n, a));
}

TEST(ModelJet, LogInvertsExp) {
    std::mt19937_64 rng(13);
    for (int n = 2; n <= 6; ++n)
        for (int t = 0; t < 5; ++t) {
            const ModelVec v = random_vec(n, rng);
            EXPECT_EQ(mj_log(mj_exp(v)), v);
            const ModelJet f = random_jet(n, rng);
            EXPECT_EQ(mj_exp(mj_log(f)), f);
        }
}

TEST(ModelJet, LayerCoefficientsAdd) {
    std::mt19937_64 rng(17);
    for (int n = 3; n <= 6; ++n)
        for (int k = 2; k <= n; ++k) {
            const ModelJet f = random_jet(n, rng, k), g = random_jet(n, rng, k);
            const ModelJet p = mj_compose(f, g);
            EXPECT_EQ(p.coef[k], f.coef[k] + g.coef[k]);
            EXPECT_GE(mj_order(p), k);
        }
}

TEST(ModelJet, TopLayerIsCentral) {
    std::mt19937_64 rng(19);
    const int n = 5;
    for (int t = 0; t < 10; ++t) EXPECT_EQ(mj_commutator(random_jet(n, rng), random_jet(n, rng, n)), mj_identity(n));
}

TEST(ModelJet, CentralSeriesReport) {
    for (int n = 2; n <= 6; ++n) {
        const CentralSeriesReport r = mj_central_series(n, 1, 20);
        EXPECT_TRUE(r.ok()) << "n = " << n;
        EXPECT_EQ(r.nilpotency_class, std::max(1, n - 2));
        EXPECT_TRUE(r.counterexamples.empty());
    }
}

TEST(ModelJet, RejectsBadTruncation) {
    EXPECT_THROW(mj_identity(1), std::invalid_argument);
    EXPECT_THROW(mj_make(3, {Rational(1)}), std::invalid_argument);
    EXPECT_THROW(mj_compose(mj_identity(2), mj_identity(3)), std::invalid_argument);
}
