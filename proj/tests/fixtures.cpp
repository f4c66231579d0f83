#include "fixtures.hpp"

#include <numbers>

#include "hcs/flows.hpp"

namespace hcs::test {

SurfacePtr coarse_surface() {
    static const SurfacePtr S = [] {
        SurfaceOptions o;
        o.resolution = 3;
        o.kernel_cutoff = 1e-4;
        o.min_gap = 10;
        return BolzaSurface::build(o);
    }();
    return S;
}

std::shared_ptr<const FlatTorus> torus(int n) { return std::make_shared<const FlatTorus>(n); }

CVec torus_field(const FlatTorus& T, std::mt19937_64& rng, int band, double amp) {
    std::normal_distribution<double> g;
    CVec v = CVec::Zero(T.size());
    const CVec& z = T.points();
    const double w = 2.0 * std::numbers::pi / T.period();
    for (int kx = -band; kx <= band; ++kx)
        for (int ky = -band; ky <= band; ++ky) {
            const cplx c(g(rng), g(rng));
            for (Eigen::Index i = 0; i < v.size(); ++i)
                v[i] += c * std::exp(I_unit * w * (kx * z[i].real() + ky * z[i].imag()));
        }
    return amp * v / max_abs(v);
}

JetField torus_jet(const std::shared_ptr<const FlatTorus>& T, std::mt19937_64& rng, int cap, int lo, bool real,
                   double amp) {
    JetField H(T, cap);
    for (int d = lo; d <= cap; ++d)
        for (int a = 0; a <= d; ++a) {
            const int b = d - a;
            if (!real) {
                H.at(a, b) = torus_field(*T, rng, 1, amp);
            } else if (a == b) {
                H.at(a, b) = torus_field(*T, rng, 1, amp).real().cast<cplx>();
            } else if (a > b) {
                const CVec c = torus_field(*T, rng, 1, amp);
                H.at(a, b) = c;
                H.at(b, a) = c.conjugate();
            }
        }
    return H;
}

HigherStructure torus_structure(const std::shared_ptr<const FlatTorus>& T, std::mt19937_64& rng, int n, double amp) {
    HigherStructure I = make_structure(T, n);
    for (int k = 2; k <= n; ++k) I.mu_k(k) = torus_field(*T, rng, 1, amp);
    return I;
}

double max_diff(const CVec& a, const CVec& b) { return max_abs(a - b); }

double max_diff(const JetField& a, const JetField& b) { return jet_max_abs(jet_add(a, jet_scale(b, -1.0))); }

double max_diff(const HigherStructure& a, const HigherStructure& b) { return structure_distance(a, b); }

}  // namespace hcs::test
