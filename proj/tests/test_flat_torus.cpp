#include <gtest/gtest.h>

#include <numbers>

#include "hcs/flat_torus.hpp"

using namespace hcs;

namespace {

CVec wave(const FlatTorus& T, int kx, int ky) {
    const double w = 2.0 * std::numbers::pi / T.period();
    CVec v(T.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const cplx z = T.points()[i];
        v[i] = std::exp(I_unit * w * (kx * z.real() + ky * z.imag()));
    }
    return v;
}

}  // namespace

TEST(FlatTorus, SpectralDerivativesOfModes) {
    const FlatTorus T(16, 3.0);
    const double w = 2.0 * std::numbers::pi / 3.0;
    for (auto [kx, ky] : {std::pair{1, 0}, std::pair{2, -3}, std::pair{-5, 4}}) {
        const CVec f = wave(T, kx, ky);
        EXPECT_LT(max_abs(T.dx(f) - I_unit * w * double(kx) * f), 1e-12);
        EXPECT_LT(max_abs(T.dy(f) - I_unit * w * double(ky) * f), 1e-12);
        // d = (dx - i dy)/2, dbar = (dx + i dy)/2 whatever the bundle type.
        const cplx dz = 0.5 * I_unit * w * cplx(kx, -ky);
        const cplx dzb = 0.5 * I_unit * w * cplx(kx, ky);
        EXPECT_LT(max_abs(T.d(f, 2, -1) - dz * f), 1e-12);
        EXPECT_LT(max_abs(T.dbar(f, -3, 1) - dzb * f), 1e-12);
    }
}

TEST(FlatTorus, LeibnizIsExactBelowNyquist) {
    const FlatTorus T(16);
    const CVec f = wave(T, 2, 1) + 0.5 * wave(T, -1, 3), g = wave(T, 1, -2) - wave(T, 3, 0);
    const CVec fg = f.cwiseProduct(g);
    EXPECT_LT(max_abs(T.d(fg, 0, 0) - T.d(f, 0, 0).cwiseProduct(g) - f.cwiseProduct(T.d(g, 0, 0))), 1e-11);
}

TEST(FlatTorus, MeanIsExactQuadrature) {
    const FlatTorus T(8);
    EXPECT_LT(std::abs(T.mean(wave(T, 1, 0))), 1e-15);
    EXPECT_LT(std::abs(T.mean(wave(T, 3, -2))), 1e-15);
    EXPECT_LT(std::abs(T.mean(CVec::Ones(T.size())) - 1.0), 1e-15);
}

TEST(FlatTorus, GridLayout) {
    const FlatTorus T(6, 2.0);
    EXPECT_EQ(T.size(), 36);
    EXPECT_EQ(T.n(), 6);
    EXPECT_EQ(T.kind(), "flat_torus");
    for (Eigen::Index i = 0; i < T.size(); ++i) {
        EXPECT_GE(T.points()[i].real(), 0.0);
        EXPECT_LT(T.points()[i].real(), 2.0);
    }
}

TEST(FlatTorus, RejectsOddOrTinyGrids) {
    for (int n : {7, 2}) {
        try {
            FlatTorus T(n);
            ADD_FAILURE() << "accepted n = " << n;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), "torus.size");
        }
    }
}
