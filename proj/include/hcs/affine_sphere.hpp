#pragma once

// Degree-3 Hitchin map: Pick differential, Blaschke metric, developing frame of
// the hyperbolic affine sphere and its SL(3,R) holonomy.
//
// With h = e^u g, g = lambda |dz|^2 hyperbolic and Pick coefficient Phi, the
// structure equations reduce to
//     Delta_g u = 2 e^u - 2 - 4 |phi|_g^2 e^{-2u},   |phi|_g^2 = |Phi|^2 lambda^{-3},
// and the frame F = (f_x, f_y, f) obeys dF/dt = F M(z, zdot) along any path.

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <vector>

#include "hcs/harmonicize.hpp"

namespace hcs {

using Mat3 = Eigen::Matrix3d;

struct PickData {
    TensorField phi;  // (3,0)
    double holomorphy_residual = 0.0;
};

struct BlaschkeMetric {
    RVec u;
    std::vector<double> residual_trace;  // max |PDE residual| per Newton iterate
    int iterations = 0;
    double residual = 0.0;
};

struct DevelopOptions {
    int min_steps = 64;
    int max_steps = 8192;
    double tol = 1e-8;
};

// Coefficient data along development paths, read from local fits.
class Developer {
public:
    Developer(SurfacePtr S, const PickData& p, const BlaschkeMetric& h, DevelopOptions opt = {});
    // Transport along the polyline of disk points, each leg a hyperbolic geodesic.
    Mat3 develop_frame(const std::vector<cplx>& path) const;
    // Initial frame at the basepoint 0: h-orthonormal tangent pair and f, unimodular.
    Mat3 initial_frame() const;
    // Holonomy matrix of the deck transformation gamma (basepoint 0).
    Mat3 holonomy_of(const Mobius& gamma) const;
    int last_steps() const { return last_steps_; }

private:
    Mat3 leg(cplx a, cplx b, int steps) const;
    Mat3 generator_matrix(cplx z, cplx zdot) const;
    SurfacePtr S_;
    FieldFit ufit_, phifit_;
    DevelopOptions opt_;
    mutable int last_steps_ = 0;
};

struct FuchsianCheck {
    double form_residual = 0.0;   // relative residual of A^T Q A = Q over the generators
    int positive = 0, negative = 0;  // signature of the fitted form
    double eigen_residual = 0.0;  // |eig(A) - {e^l, 1, e^-l}| max over generators
    bool fuchsian = false;
};

struct Holonomy {
    std::array<Mat3, 4> gen;  // A1, B1, A2, B2
    std::array<std::string, 4> names{"A1", "B1", "A2", "B2"};
    double relation_defect = 0.0;
    double max_det_error = 0.0;
    // Traces of the 4 generators followed by the 12 ordered products g_i g_j, i != j.
    std::vector<double> traces;
    std::vector<std::string> trace_labels;
    FuchsianCheck fuchsian;
    int steps = 0;

    json report() const;
};

PickData pick_differential(const HigherStructure& I, double tol = 1e-6);
BlaschkeMetric wang_solve(const BolzaSurface& S, const PickData& p, double tol = 1e-8, int max_iter = 60);
// Pointwise PDE residual of u.
RVec wang_residual(const BolzaSurface& S, const PickData& p, const RVec& u);
Holonomy holonomy(SurfacePtr S, const PickData& p, const BlaschkeMetric& h, const DevelopOptions& opt = {});
FuchsianCheck fuchsian_check(const std::array<Mat3, 4>& A, const std::array<Mobius, 4>& gamma);
std::vector<double> trace_table(const std::array<Mat3, 4>& A);

struct HitchinResult {
    HarmonicResult harmonic;
    PickData pick;
    BlaschkeMetric metric;
    Holonomy hol;

    json report() const;
};

HitchinResult hitchin_map(const HigherStructure& I, const HarmonicOptions& hopt = {}, const DevelopOptions& dopt = {});

}  // namespace hcs
