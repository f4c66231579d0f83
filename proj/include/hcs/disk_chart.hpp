#pragma once

// A planar coordinate chart sampled on a uniform square grid. Derivatives are
// 4th-order finite differences (central inside, one-sided at the edges), so
// they are exact on polynomials of degree <= 4.

#include "hcs/jets.hpp"

namespace hcs {

class DiskChart final : public Base {
public:
    // nx x nx samples covering [c - half, c + half]^2 (real and imaginary parts).
    DiskChart(int nx, double half_width, cplx centre = 0.0);

    Eigen::Index size() const override { return static_cast<Eigen::Index>(nx_) * nx_; }
    const CVec& points() const override { return pts_; }
    CVec d(const CVec& v, int a, int b) const override;
    CVec dbar(const CVec& v, int a, int b) const override;
    std::string kind() const override { return "disk_chart"; }

    int nx() const { return nx_; }
    double spacing() const { return h_; }
    Eigen::Index index(int ix, int iy) const { return static_cast<Eigen::Index>(iy) * nx_ + ix; }

    CVec dx(const CVec& v) const;
    CVec dy(const CVec& v) const;
    // 4th-order Lagrange interpolation (4x4 stencil) at arbitrary chart points.
    cplx interpolate(const CVec& v, cplx z) const;
    bool contains(cplx z) const;

private:
    int nx_;
    double half_;
    cplx c_;
    double h_;
    CVec pts_;
};

}  // namespace hcs
