#include "hcs/disk_chart.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hcs {

DiskChart::DiskChart(int nx, double half_width, cplx centre) : nx_(nx), half_(half_width), c_(centre) {
    if (nx < 5) throw Error("chart.size", "disk chart needs at least 5 samples per side");
    h_ = 2.0 * half_width / (nx - 1);
    pts_.resize(size());
    for (int iy = 0; iy < nx; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            pts_[index(ix, iy)] = c_ + cplx(-half_ + ix * h_, -half_ + iy * h_);
}

namespace {

// Weights for the first derivative at offset position `pos` within a 5-point
// window (pos = 2 is the centred formula).
constexpr std::array<std::array<double, 5>, 5> kD1 = {{
    {-25.0 / 12, 4.0, -3.0, 4.0 / 3, -1.0 / 4},
    {-1.0 / 4, -5.0 / 6, 3.0 / 2, -1.0 / 2, 1.0 / 12},
    {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12},
    {-1.0 / 12, 1.0 / 2, -3.0 / 2, 5.0 / 6, 1.0 / 4},
    {1.0 / 4, -4.0 / 3, 3.0, -4.0, 25.0 / 12},
}};

template <class Idx>
cplx diff1(const CVec& v, int i, int n, double h, Idx idx) {
    const int start = std::clamp(i - 2, 0, n - 5);
    const int pos = i - start;
    cplx s = 0.0;
    for (int j = 0; j < 5; ++j) s += kD1[pos][j] * v[idx(start + j)];
    return s / h;
}

}  // namespace

CVec DiskChart::dx(const CVec& v) const {
    CVec r(size());
    for (int iy = 0; iy < nx_; ++iy)
        for (int ix = 0; ix < nx_; ++ix)
            r[index(ix, iy)] = diff1(v, ix, nx_, h_, [&](int j) { return index(j, iy); });
    return r;
}

CVec DiskChart::dy(const CVec& v) const {
    CVec r(size());
    for (int iy = 0; iy < nx_; ++iy)
        for (int ix = 0; ix < nx_; ++ix)
            r[index(ix, iy)] = diff1(v, iy, nx_, h_, [&](int j) { return index(ix, j); });
    return r;
}

CVec DiskChart::d(const CVec& v, int, int) const { return 0.5 * (dx(v) - I_unit * dy(v)); }

CVec DiskChart::dbar(const CVec& v, int, int) const { return 0.5 * (dx(v) + I_unit * dy(v)); }

bool DiskChart::contains(cplx z) const {
    const cplx u = z - c_;
    return std::abs(u.real()) <= half_ + 1e-12 && std::abs(u.imag()) <= half_ + 1e-12;
}

cplx DiskChart::interpolate(const CVec& v, cplx z) const {
    if (!contains(z)) throw Error("chart.outside", "interpolation point outside the chart");
    const cplx u = z - c_;
    const double gx = (u.real() + half_) / h_, gy = (u.imag() + half_) / h_;
    const int sx = std::clamp(static_cast<int>(std::floor(gx)) - 1, 0, nx_ - 4);
    const int sy = std::clamp(static_cast<int>(std::floor(gy)) - 1, 0, nx_ - 4);
    auto lagrange = [](double t, int s, std::array<double, 4>& w) {
        for (int j = 0; j < 4; ++j) {
            double l = 1.0;
            for (int m = 0; m < 4; ++m)
                if (m != j) l *= (t - (s + m)) / double(j - m);
            w[j] = l;
        }
    };
    std::array<double, 4> wx, wy;
    lagrange(gx, sx, wx);
    lagrange(gy, sy, wy);
    cplx s = 0.0;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) s += wx[i] * wy[j] * v[index(sx + i, sy + j)];
    return s;
}

}  // namespace hcs
