#include "hcs/flat_torus.hpp"

#include <cmath>
#include <numbers>

namespace hcs {

FlatTorus::FlatTorus(int n, double period) : n_(n), L_(period) {
    if (n < 4 || n % 2 != 0) throw Error("torus.size", "flat torus needs an even sample count >= 4", json{{"n", n}});
    if (!(period > 0.0)) throw Error("torus.period", "period must be positive");
    const double h = 2.0 * std::numbers::pi / n;
    const double scale = 2.0 * std::numbers::pi / L_;
    // Periodic sinc differentiation for even n.
    D_ = RMat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const int k = i - j;
            const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
            D_(i, j) = scale * 0.5 * sgn / std::tan(0.5 * k * h);
        }
    pts_.resize(size());
    const double step = L_ / n;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) pts_[iy * n + ix] = cplx(ix * step, iy * step);
}

CVec FlatTorus::dx(const CVec& v) const {
    Eigen::Map<const CMat> V(v.data(), n_, n_);  // column iy holds the row of constant y
    CVec r(size());
    Eigen::Map<CMat> R(r.data(), n_, n_);
    R = D_.cast<cplx>() * V;
    return r;
}

CVec FlatTorus::dy(const CVec& v) const {
    Eigen::Map<const CMat> V(v.data(), n_, n_);
    CVec r(size());
    Eigen::Map<CMat> R(r.data(), n_, n_);
    R = V * D_.transpose().cast<cplx>();
    return r;
}

CVec FlatTorus::d(const CVec& v, int, int) const { return 0.5 * (dx(v) - I_unit * dy(v)); }

CVec FlatTorus::dbar(const CVec& v, int, int) const { return 0.5 * (dx(v) + I_unit * dy(v)); }

}  // namespace hcs
