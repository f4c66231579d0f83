#pragma once

// Discrete Bolza surface. Fields are sampled at the quotient nodes of a
// geodesic refinement of the octagon; each node carries a local weighted
// least-squares polynomial fit in its recentred Poincare chart, built from
// samples lifted through the side pairings. Derivatives, quadrature and point
// evaluation all go through these fits.

#include <Eigen/LU>
#include <Eigen/Sparse>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "hcs/bolza.hpp"
#include "hcs/jets.hpp"

namespace hcs {

struct SurfaceOptions {
    int resolution = 4;        // geodesic 4-way refinement levels of the 16 base triangles
    int poly_degree = 8;       // total degree of the local fits
    int stencil = 80;          // lifted samples per fit
    double weight_exp = 2.0;   // Gaussian fit weights exp(-weight_exp (r/h)^2)
    int quad_order = 6;        // collapsed Gauss points per direction per triangle
    double kernel_cutoff = 1e-6;  // relative to the largest singular value
    double min_gap = 1e3;
    std::uint64_t seed = 20240611;

    json to_json() const;
};

struct SurfaceMesh {
    std::vector<cplx> vertices;
    std::vector<std::array<int, 3>> triangles;
    // Per vertex: owning vertex, the map taking the vertex onto its owner, and
    // the side pairing used (-1 interior, 0..7 a side pairing, 8 composite corner word).
    std::vector<int> owner;
    std::vector<Mobius> to_owner;
    std::vector<int> pairing;
    std::vector<int> node_of_vertex;
    std::vector<int> node_vertex;
};

struct TensorField {
    int a = 0, b = 0;
    CVec v;
};

struct HoloBasis {
    int k = 0;
    int dim = 0;
    std::vector<CVec> q;            // coefficients of type (k,0) sections
    std::vector<double> singular;   // smallest singular values, ascending
    double sigma_max = 0.0;
    double cutoff = 0.0;
    double gap = 0.0;
};

// Per-node fit coefficients of one field, used for evaluation off the nodes.
struct FieldFit {
    int a = 0, b = 0;
    CMat coef;  // monomials x nodes
};

struct PointValue {
    cplx value, dz, dzb;
};

class BolzaSurface final : public Base {
public:
    static std::shared_ptr<const BolzaSurface> build(const SurfaceOptions& opt = {});

    Eigen::Index size() const override { return x_.size(); }
    const CVec& points() const override { return x_; }
    CVec d(const CVec& v, int a, int b) const override;
    CVec dbar(const CVec& v, int a, int b) const override;
    std::string kind() const override { return "bolza"; }

    const SurfaceOptions& options() const { return opt_; }
    const FuchsianGroup& group() const { return G_; }
    const SurfaceMesh& mesh() const { return mesh_; }
    const RVec& lambda() const { return lambda_; }
    // Quadrature weights for the z-coefficient of a (1,1) density.
    const RVec& weights() const { return alpha_; }
    double area() const { return alpha_.dot(lambda_); }
    int monomials() const { return static_cast<int>(mons_.size()); }

    // Maass derivative d - a (d log lambda) on type (a,b) sections.
    CVec maass_d(const CVec& v, int a, int b) const;
    // Hyperbolic Laplace-Beltrami operator on scalar functions.
    const Eigen::SparseMatrix<double>& laplacian() const { return lap_; }

    const Eigen::SparseMatrix<cplx>& dbar_matrix(int a, int b) const;
    const Eigen::SparseMatrix<cplx>& d_matrix(int a, int b) const;

    cplx integrate_density(const CVec& f) const { return (alpha_.cast<cplx>().array() * f.array()).sum(); }
    // <mu, nu> = int mu conj(nu) g^{k-1} on (1-k,1) sections.
    cplx petersson(const CVec& mu, const CVec& nu, int k) const;
    // Pointwise hyperbolic norm of a type (a,b) section.
    RVec pointwise_norm(const CVec& v, int a, int b) const;

    const HoloBasis& holomorphic_basis(int k) const;
    // Square solve of dbar w = r on type (a,0) -> (a,1).
    CVec solve_dbar(const CVec& r, int a) const;

    // Rotations by m*pi/4, m = 0..7.
    static constexpr int isometry_count() { return 8; }
    CVec pullback(int m, const CVec& v, int a, int b) const;

    // Expand node values to every mesh vertex through the automorphy rule.
    CVec vertex_values(const CVec& v, int a, int b) const;
    // Max over paired vertices of |value(gv) g'(v)^a conj(g'(v))^b - value(v)|.
    double automorphy_residual(const CVec& vertex_vals, int a, int b) const;

    FieldFit fit(const CVec& v, int a, int b) const;
    // Section coefficient and its coordinate derivatives at any disk point.
    PointValue evaluate(const FieldFit& f, cplx z) const;
    // Map z into the closed octagon; returns the group element used.
    Mobius reduce(cplx z, cplx& zeta) const;

private:
    BolzaSurface() = default;
    void build_impl(const SurfaceOptions& opt);
    Eigen::SparseMatrix<cplx> assemble(int a, int b, bool bar) const;
    // Samples of the chart-w coefficient of a type (a,b) field on node i's stencil.
    CVec stencil_values(int i, const CVec& v, int a, int b) const;
    const CMat& pinv(int i) const;
    CMat compute_pinv(int i) const;
    // Value of node y's local fit at z, expressed in the coordinate z.
    PointValue local_value(const FieldFit& f, int c, const Mobius& Mz, cplx z) const;

    SurfaceOptions opt_;
    FuchsianGroup G_;
    SurfaceMesh mesh_;
    CVec x_;
    RVec lambda_, alpha_;
    std::vector<std::pair<int, int>> mons_;
    int col_d_ = 0, col_db_ = 0, col_ddb_ = 0;

    // Lifted cloud: near-group element applied to every node.
    std::vector<Mobius> near_;
    std::vector<cplx> cloud_z_;
    std::vector<int> cloud_node_, cloud_elem_;
    // Uniform bucket grid over [-1,1]^2 for neighbourhood queries.
    int grid_n_ = 0;
    std::vector<std::vector<int>> grid_;
    // Pseudo-distance support radius of the partition of unity in evaluate().
    double blend_r_ = 0.0;

    struct Stencil {
        std::vector<int> node;
        std::vector<cplx> w;  // chart coordinates T_x(lift)
        std::vector<cplx> J;  // (T_x o g)'(y)
        double h = 1.0;
    };
    std::vector<Stencil> st_;
    // Fit rows for d, dbar and d dbar of the chart function at 0.
    std::vector<CVec> row_d_, row_db_, row_ddb_;
    Eigen::SparseMatrix<double> lap_;

    std::array<std::vector<int>, 8> iso_node_;
    std::array<std::vector<cplx>, 8> iso_fac_;

    mutable std::mutex mu_;
    mutable std::map<std::tuple<int, int, bool>, Eigen::SparseMatrix<cplx>> ops_;
    mutable std::map<int, std::unique_ptr<HoloBasis>> bases_;
    mutable std::map<int, std::unique_ptr<Eigen::PartialPivLU<CMat>>> lus_;
    mutable std::map<int, CMat> pinv_cache_;
};

using SurfacePtr = std::shared_ptr<const BolzaSurface>;

TensorField dbar_op(const BolzaSurface& S, const TensorField& t);
TensorField maass_d_op(const BolzaSurface& S, const TensorField& t);
cplx integrate_density(const BolzaSurface& S, const TensorField& d);
cplx petersson_pairing(const BolzaSurface& S, const TensorField& mu, const TensorField& nu, int k);
TensorField isometry_pullback(const BolzaSurface& S, int m, const TensorField& t);

// Integer powers of complex numbers, exact in the exponent sign.
cplx ipow(cplx z, int e);

}  // namespace hcs
