#pragma once

// The square flat torus C / (L Z + i L Z) sampled on a uniform n x n grid,
// with Fourier-spectral derivatives. The coordinate z is global, so every
// (a,b) bundle is trivial and the coefficient is an ordinary periodic function.
// Products of band-limited samples differentiate without Leibniz error as long
// as the product stays below the Nyquist band.

#include <numbers>

#include "hcs/jets.hpp"

namespace hcs {

class FlatTorus final : public Base {
public:
    // n must be even.
    FlatTorus(int n, double period = 2.0 * std::numbers::pi);

    Eigen::Index size() const override { return static_cast<Eigen::Index>(n_) * n_; }
    const CVec& points() const override { return pts_; }
    CVec d(const CVec& v, int a, int b) const override;
    CVec dbar(const CVec& v, int a, int b) const override;
    std::string kind() const override { return "flat_torus"; }

    int n() const { return n_; }
    double period() const { return L_; }
    CVec dx(const CVec& v) const;
    CVec dy(const CVec& v) const;
    // Mean over the samples, which is exact quadrature for trigonometric
    // polynomials below the band.
    cplx mean(const CVec& v) const { return v.mean(); }

private:
    int n_;
    double L_;
    RMat D_;  // spectral first-derivative matrix along one axis
    CVec pts_;
};

}  // namespace hcs
