#include "hcs/surface.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace hcs {

cplx ipow(cplx z, int e) {
    if (e == 0) return 1.0;
    cplx base = e > 0 ? z : 1.0 / z;
    int n = std::abs(e);
    cplx r = 1.0;
    while (n) {
        if (n & 1) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

json SurfaceOptions::to_json() const {
    return json{{"resolution", resolution},     {"poly_degree", poly_degree}, {"stencil", stencil},
                {"weight_exp", weight_exp},     {"quad_order", quad_order},   {"kernel_cutoff", kernel_cutoff},
                {"min_gap", min_gap},           {"seed", seed}};
}

namespace {

// Hash grid for exact-position lookups of mesh vertices.
class PointIndex {
public:
    explicit PointIndex(double tol) : tol_(tol), cell_(1e-4) {}
    int find(cplx z) const {
        const auto [cx, cy] = cell(z);
        for (long dx = -1; dx <= 1; ++dx)
            for (long dy = -1; dy <= 1; ++dy) {
                auto it = map_.find(key(cx + dx, cy + dy));
                if (it == map_.end()) continue;
                for (int i : it->second)
                    if (std::abs(pts_[i] - z) < tol_) return i;
            }
        return -1;
    }
    int insert(cplx z) {
        int i = find(z);
        if (i >= 0) return i;
        i = static_cast<int>(pts_.size());
        pts_.push_back(z);
        const auto [cx, cy] = cell(z);
        map_[key(cx, cy)].push_back(i);
        return i;
    }
    const std::vector<cplx>& points() const { return pts_; }

private:
    std::pair<long, long> cell(cplx z) const {
        return {static_cast<long>(std::floor(z.real() / cell_)), static_cast<long>(std::floor(z.imag() / cell_))};
    }
    static long long key(long x, long y) { return (static_cast<long long>(x) << 32) ^ (y & 0xffffffffLL); }
    double tol_, cell_;
    std::vector<cplx> pts_;
    std::unordered_map<long long, std::vector<int>> map_;
};

// Gauss-Legendre nodes/weights on [0,1] via the Golub-Welsch eigenproblem.
void gauss_legendre01(int n, std::vector<double>& x, std::vector<double>& w) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = i / std::sqrt(4.0 * i * i - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        x[i] = 0.5 * (es.eigenvalues()[i] + 1.0);
        const double v0 = es.eigenvectors()(0, i);
        w[i] = v0 * v0;  // sums to 1 on [0,1]
    }
}

cplx klein(cplx w) { return 2.0 * w / (1.0 + std::norm(w)); }
cplx poincare(cplx k) { return k / (1.0 + std::sqrt(1.0 - std::norm(k))); }

// Pull a local section value (F, F_u, F_ubar) at u = h(z) back to z for a
// holomorphic h: G(z) = F(h z) h'^a conj(h')^b.
PointValue pull_back(const PointValue& F, const Mobius& h, cplx z, int a, int b) {
    const cplx d1 = h.deriv(z), d2 = h.deriv2(z);
    const cplx fa = ipow(d1, a), fb = ipow(std::conj(d1), b);
    PointValue G;
    G.value = F.value * fa * fb;
    G.dz = F.dz * d1 * fa * fb + F.value * double(a) * ipow(d1, a - 1) * d2 * fb;
    G.dzb = F.dzb * std::conj(d1) * fa * fb + F.value * fa * double(b) * ipow(std::conj(d1), b - 1) * std::conj(d2);
    return G;
}

}  // namespace

std::shared_ptr<const BolzaSurface> BolzaSurface::build(const SurfaceOptions& opt) {
    if (opt.resolution < 1) throw Error("surface.resolution", "resolution too small to triangulate", json{{"min", 1}});
    if (opt.poly_degree < 2 || opt.stencil < (opt.poly_degree + 1) * (opt.poly_degree + 2) / 2)
        throw Error("surface.fit", "stencil must exceed the number of fit monomials");
    std::shared_ptr<BolzaSurface> s(new BolzaSurface());
    s->build_impl(opt);
    return s;
}

void BolzaSurface::build_impl(const SurfaceOptions& opt) {
    opt_ = opt;
    G_ = bolza_group();
    const auto& K = bolza_constants();

    // Geodesic refinement of the 16 base triangles (centre, side midpoint, corner).
    std::vector<std::array<cplx, 3>> tris;
    for (int j = 0; j < 8; ++j) {
        const cplx M = std::polar(K.r_mid, j * M_PI / 4.0);
        const cplx V1 = std::polar(K.r_vtx, j * M_PI / 4.0 + M_PI / 8.0);
        const cplx V0 = std::polar(K.r_vtx, j * M_PI / 4.0 - M_PI / 8.0);
        tris.push_back({0.0, M, V1});
        tris.push_back({0.0, V0, M});
    }
    for (int l = 0; l < opt.resolution; ++l) {
        std::vector<std::array<cplx, 3>> next;
        next.reserve(tris.size() * 4);
        for (const auto& t : tris) {
            const cplx ab = geodesic_point(t[0], t[1], 0.5), bc = geodesic_point(t[1], t[2], 0.5),
                       ca = geodesic_point(t[2], t[0], 0.5);
            next.push_back({t[0], ab, ca});
            next.push_back({ab, t[1], bc});
            next.push_back({ca, bc, t[2]});
            next.push_back({ab, bc, ca});
        }
        tris.swap(next);
    }
    PointIndex index(1e-9);
    for (const auto& t : tris) {
        std::array<int, 3> ids{};
        for (int k = 0; k < 3; ++k) ids[k] = index.insert(t[k]);
        mesh_.triangles.push_back(ids);
    }
    mesh_.vertices = index.points();
    const int nv = static_cast<int>(mesh_.vertices.size());

    // Side identifications. A point lies on side s iff the pairing that moves
    // side s across lands on another vertex.
    mesh_.owner.resize(nv);
    std::iota(mesh_.owner.begin(), mesh_.owner.end(), 0);
    mesh_.to_owner.assign(nv, Mobius{});
    mesh_.pairing.assign(nv, -1);
    const cplx V0 = std::polar(K.r_vtx, M_PI / 8.0);
    const int iv0 = index.find(V0);
    for (int i = 0; i < nv; ++i) {
        const cplx p = mesh_.vertices[i];
        std::vector<int> sides;
        for (int s = 0; s < 8; ++s)
            if (index.find(G_.side[(s + 4) % 8](p)) >= 0) sides.push_back(s);
        if (sides.empty()) continue;
        if (sides.size() >= 2) {
            // Corner: breadth-first search for a word taking it to V0.
            std::vector<std::pair<cplx, Mobius>> frontier{{p, Mobius{}}};
            PointIndex seen(1e-7);
            seen.insert(p);
            bool found = false;
            for (int it = 0; it < 12 && !found; ++it) {
                std::vector<std::pair<cplx, Mobius>> nf;
                for (const auto& [q, M] : frontier) {
                    if (std::abs(q - V0) < 1e-8) {
                        mesh_.to_owner[i] = M;
                        found = true;
                        break;
                    }
                    for (int s = 0; s < 8; ++s) {
                        const cplx q2 = G_.side[s](q);
                        if (std::abs(q2) > K.r_vtx + 1e-6 || seen.find(q2) >= 0) continue;
                        seen.insert(q2);
                        nf.emplace_back(q2, G_.side[s] * M);
                    }
                }
                frontier.swap(nf);
            }
            if (!found || iv0 < 0) throw Error("surface.corner", "failed to identify octagon corners");
            mesh_.owner[i] = iv0;
            mesh_.pairing[i] = (i == iv0) ? -1 : 8;
        } else if (sides[0] >= 4) {
            const int s = sides[0] - 4;
            mesh_.owner[i] = index.find(G_.side[s](p));
            mesh_.to_owner[i] = G_.side[s];
            mesh_.pairing[i] = s;
        }
    }

    mesh_.node_of_vertex.assign(nv, -1);
    for (int i = 0; i < nv; ++i)
        if (mesh_.owner[i] == i) {
            mesh_.node_of_vertex[i] = static_cast<int>(mesh_.node_vertex.size());
            mesh_.node_vertex.push_back(i);
        }
    for (int i = 0; i < nv; ++i) mesh_.node_of_vertex[i] = mesh_.node_of_vertex[mesh_.owner[i]];
    const int N = static_cast<int>(mesh_.node_vertex.size());
    x_.resize(N);
    lambda_.resize(N);
    for (int i = 0; i < N; ++i) {
        x_[i] = mesh_.vertices[mesh_.node_vertex[i]];
        lambda_[i] = 4.0 / std::pow(1.0 - std::norm(x_[i]), 2);
    }

    // Group elements whose octagon copies can hold stencil samples.
    near_.push_back(Mobius{});
    {
        std::vector<cplx> centres{0.0};
        std::vector<Mobius> frontier{Mobius{}};
        for (int it = 0; it < 6; ++it) {
            std::vector<Mobius> nf;
            for (const auto& M : frontier)
                for (int s = 0; s < 8; ++s) {
                    const Mobius M2 = M * G_.side[s];
                    const cplx c = M2(0.0);
                    if (hyp_dist(0.0, c) > 2.0 * K.d_vtx + 0.2) continue;
                    bool dup = false;
                    for (const auto& cc : centres) dup = dup || std::abs(c - cc) < 1e-8;
                    if (dup) continue;
                    centres.push_back(c);
                    near_.push_back(M2);
                    nf.push_back(M2);
                }
            frontier.swap(nf);
        }
    }
    const int ne = static_cast<int>(near_.size());
    std::vector<cplx> cloud_d;
    for (int e = 0; e < ne; ++e)
        for (int i = 0; i < N; ++i) {
            cloud_z_.push_back(near_[e](x_[i]));
            cloud_d.push_back(near_[e].deriv(x_[i]));
            cloud_node_.push_back(i);
            cloud_elem_.push_back(e);
        }
    grid_n_ = 100;
    grid_.assign(grid_n_ * grid_n_, {});
    auto cell_of = [&](cplx z) {
        const int cx = std::clamp(static_cast<int>((z.real() + 1.0) * 0.5 * grid_n_), 0, grid_n_ - 1);
        const int cy = std::clamp(static_cast<int>((z.imag() + 1.0) * 0.5 * grid_n_), 0, grid_n_ - 1);
        return std::make_pair(cx, cy);
    };
    for (size_t c = 0; c < cloud_z_.size(); ++c) {
        auto [cx, cy] = cell_of(cloud_z_[c]);
        grid_[cy * grid_n_ + cx].push_back(static_cast<int>(c));
    }

    // Stencils: the K hyperbolically nearest lifts, ties broken by cloud index.
    // Keeping whole tie groups makes the stencils at points fixed by the
    // hyperelliptic involution point-symmetric, and the square collocation
    // operator then picks up exact spurious kernel vectors.
    const size_t Kst = static_cast<size_t>(opt.stencil);
    st_.resize(N);
    std::vector<double> dist(cloud_z_.size());
    std::vector<int> sel(cloud_z_.size());
    double nn_max = 0.0;
    for (int i = 0; i < N; ++i) {
        const cplx x = x_[i];
        for (size_t c = 0; c < cloud_z_.size(); ++c) dist[c] = std::abs((cloud_z_[c] - x) / (1.0 - std::conj(x) * cloud_z_[c]));
        std::iota(sel.begin(), sel.end(), 0);
        std::partial_sort(sel.begin(), sel.begin() + Kst, sel.end(),
                          [&](int p, int q) { return dist[p] < dist[q] || (dist[p] == dist[q] && p < q); });
        Stencil& S = st_[i];
        const double s = 1.0 - std::norm(x);
        for (size_t jj = 0; jj < Kst; ++jj) {
            const int c = sel[jj];
            const cplx z = cloud_z_[c];
            S.node.push_back(cloud_node_[c]);
            S.w.push_back((z - x) / (1.0 - std::conj(x) * z));
            const cplx den = 1.0 - std::conj(x) * z;
            S.J.push_back(cloud_d[c] * s / (den * den));
        }
        S.h = dist[sel[Kst - 1]];
        nn_max = std::max(nn_max, dist[sel[1]]);
    }
    blend_r_ = 3.0 * nn_max;

    const int P = opt.poly_degree;
    for (int p = 0; p <= P; ++p)
        for (int q = 0; q <= P - p; ++q) mons_.emplace_back(p, q);
    auto col = [&](int p, int q) {
        return static_cast<int>(std::find(mons_.begin(), mons_.end(), std::make_pair(p, q)) - mons_.begin());
    };
    col_d_ = col(1, 0);
    col_db_ = col(0, 1);
    col_ddb_ = col(1, 1);

    // Fit rows and quadrature. Each triangle is integrated in the chart of the
    // node owning its first vertex, through that node's fit.
    std::vector<std::vector<int>> tri_of_node(N);
    for (size_t t = 0; t < mesh_.triangles.size(); ++t)
        tri_of_node[mesh_.node_of_vertex[mesh_.triangles[t][0]]].push_back(static_cast<int>(t));
    std::vector<double> gx, gw;
    gauss_legendre01(opt.quad_order, gx, gw);
    std::vector<std::pair<double, double>> qp;
    std::vector<double> qw;
    for (int i = 0; i < opt.quad_order; ++i)
        for (int j = 0; j < opt.quad_order; ++j) {
            qp.emplace_back(gx[i], gx[j] * (1.0 - gx[i]));
            qw.push_back(gw[i] * gw[j] * (1.0 - gx[i]));
        }

    row_d_.resize(N);
    row_db_.resize(N);
    row_ddb_.resize(N);
    alpha_ = RVec::Zero(N);
    std::vector<Eigen::Triplet<double>> lap_trip;
    const int M = static_cast<int>(mons_.size());
    for (int i = 0; i < N; ++i) {
        const CMat Pi = compute_pinv(i);
        const Stencil& S = st_[i];
        const double h = S.h;
        row_d_[i] = Pi.row(col_d_).transpose() / h;
        row_db_[i] = Pi.row(col_db_).transpose() / h;
        row_ddb_[i] = Pi.row(col_ddb_).transpose() / (h * h);
        for (size_t j = 0; j < S.node.size(); ++j)
            lap_trip.emplace_back(i, S.node[j], row_ddb_[i][j].real());

        Eigen::RowVectorXcd acc = Eigen::RowVectorXcd::Zero(M);
        const Mobius Tx = recentre(x_[i]);
        for (int t : tri_of_node[i]) {
            const auto& tv = mesh_.triangles[t];
            const Mobius& g = mesh_.to_owner[tv[0]];
            std::array<cplx, 3> kv;
            for (int k = 0; k < 3; ++k) kv[k] = klein(Tx(g(mesh_.vertices[tv[k]])));
            const double jac = std::abs((std::conj(kv[1] - kv[0]) * (kv[2] - kv[0])).imag());
            for (size_t q = 0; q < qp.size(); ++q) {
                const cplx kq = kv[0] + qp[q].first * (kv[1] - kv[0]) + qp[q].second * (kv[2] - kv[0]);
                const cplx wq = poincare(kq);
                const double lamw = 4.0 / std::pow(1.0 - std::norm(wq), 2);
                const double dA = qw[q] * jac / (std::pow(1.0 - std::norm(kq), 1.5) * lamw);
                const cplx u = wq / h, ub = std::conj(wq) / h;
                for (int m = 0; m < M; ++m) acc[m] += dA * ipow(u, mons_[m].first) * ipow(ub, mons_[m].second);
            }
        }
        if (!tri_of_node[i].empty()) {
            const Eigen::RowVectorXcd row = acc * Pi;
            for (size_t j = 0; j < S.node.size(); ++j) alpha_[S.node[j]] += row[j].real() / std::norm(S.J[j]);
        }
    }
    lap_.resize(N, N);
    lap_.setFromTriplets(lap_trip.begin(), lap_trip.end());
    lap_.makeCompressed();

    // Rotations about the centre.
    for (int m = 0; m < 8; ++m) {
        iso_node_[m].resize(N);
        iso_fac_[m].resize(N);
        const cplx e = std::polar(1.0, m * M_PI / 4.0);
        for (int i = 0; i < N; ++i) {
            const int v = index.find(e * x_[i]);
            if (v < 0) throw Error("surface.symmetry", "mesh is not rotation invariant");
            const Mobius& g = mesh_.to_owner[v];
            iso_node_[m][i] = mesh_.node_of_vertex[v];
            iso_fac_[m][i] = g.deriv(e * x_[i]) * e;
        }
    }
}

CMat BolzaSurface::compute_pinv(int i) const {
    const Stencil& S = st_[i];
    const int Kn = static_cast<int>(S.node.size()), M = static_cast<int>(mons_.size());
    CMat A(Kn, M);
    RVec sw(Kn);
    for (int j = 0; j < Kn; ++j) {
        const double r = std::abs(S.w[j]) / S.h;
        sw[j] = std::exp(-opt_.weight_exp * r * r);
        const cplx u = S.w[j] / S.h, ub = std::conj(u);
        for (int m = 0; m < M; ++m) A(j, m) = sw[j] * ipow(u, mons_[m].first) * ipow(ub, mons_[m].second);
    }
    Eigen::HouseholderQR<CMat> qr(A);
    CMat Q = qr.householderQ() * CMat::Identity(Kn, M);
    CMat R = qr.matrixQR().topLeftCorner(M, M).triangularView<Eigen::Upper>();
    CMat Pi = R.triangularView<Eigen::Upper>().solve(Q.adjoint());
    return Pi * sw.cast<cplx>().asDiagonal();
}

const CMat& BolzaSurface::pinv(int i) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = pinv_cache_.find(i);
    if (it != pinv_cache_.end()) return it->second;
    if (pinv_cache_.size() > 512) pinv_cache_.clear();
    return pinv_cache_.emplace(i, compute_pinv(i)).first->second;
}

CVec BolzaSurface::stencil_values(int i, const CVec& v, int a, int b) const {
    const Stencil& S = st_[i];
    CVec out(S.node.size());
    for (size_t j = 0; j < S.node.size(); ++j) out[j] = v[S.node[j]] * ipow(S.J[j], -a) * ipow(std::conj(S.J[j]), -b);
    return out;
}

Eigen::SparseMatrix<cplx> BolzaSurface::assemble(int a, int b, bool bar) const {
    const int N = static_cast<int>(size());
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(static_cast<size_t>(N) * (opt_.stencil + 8));
    for (int i = 0; i < N; ++i) {
        const Stencil& S = st_[i];
        const cplx x = x_[i];
        const double s = 1.0 - std::norm(x);
        const double sc = std::pow(s, -(a + b) - 1);
        const CVec& row = bar ? row_db_[i] : row_d_[i];
        for (size_t j = 0; j < S.node.size(); ++j) {
            const cplx fac = ipow(S.J[j], -a) * ipow(std::conj(S.J[j]), -b);
            trip.emplace_back(i, S.node[j], row[j] * fac * sc);
        }
        trip.emplace_back(i, i, bar ? 2.0 * b * x / s : 2.0 * a * std::conj(x) / s);
    }
    Eigen::SparseMatrix<cplx> D(N, N);
    D.setFromTriplets(trip.begin(), trip.end());
    D.makeCompressed();
    return D;
}

const Eigen::SparseMatrix<cplx>& BolzaSurface::dbar_matrix(int a, int b) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_tuple(a, b, true);
    auto it = ops_.find(key);
    if (it == ops_.end()) it = ops_.emplace(key, assemble(a, b, true)).first;
    return it->second;
}

const Eigen::SparseMatrix<cplx>& BolzaSurface::d_matrix(int a, int b) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_tuple(a, b, false);
    auto it = ops_.find(key);
    if (it == ops_.end()) it = ops_.emplace(key, assemble(a, b, false)).first;
    return it->second;
}

CVec BolzaSurface::d(const CVec& v, int a, int b) const { return d_matrix(a, b) * v; }

CVec BolzaSurface::dbar(const CVec& v, int a, int b) const { return dbar_matrix(a, b) * v; }

CVec BolzaSurface::maass_d(const CVec& v, int a, int b) const {
    CVec r = d(v, a, b);
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        const cplx z = x_[i];
        r[i] -= double(a) * 2.0 * std::conj(z) / (1.0 - std::norm(z)) * v[i];
    }
    return r;
}

cplx BolzaSurface::petersson(const CVec& mu, const CVec& nu, int k) const {
    cplx s = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) s += alpha_[i] * mu[i] * std::conj(nu[i]) * std::pow(lambda_[i], k - 1);
    return s;
}

RVec BolzaSurface::pointwise_norm(const CVec& v, int a, int b) const {
    RVec r(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) r[i] = std::abs(v[i]) * std::pow(lambda_[i], -0.5 * (a + b));
    return r;
}

CVec BolzaSurface::pullback(int m, const CVec& v, int a, int b) const {
    if (m < 0 || m >= 8) throw Error("surface.isometry", "isometry not in the symmetry list", json{{"index", m}});
    CVec r(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const cplx c = iso_fac_[m][i];
        r[i] = v[iso_node_[m][i]] * ipow(c, a) * ipow(std::conj(c), b);
    }
    return r;
}

CVec BolzaSurface::vertex_values(const CVec& v, int a, int b) const {
    const size_t nv = mesh_.vertices.size();
    CVec r(nv);
    for (size_t i = 0; i < nv; ++i) {
        const cplx g = mesh_.to_owner[i].deriv(mesh_.vertices[i]);
        r[i] = v[mesh_.node_of_vertex[i]] * ipow(g, a) * ipow(std::conj(g), b);
    }
    return r;
}

double BolzaSurface::automorphy_residual(const CVec& vv, int a, int b) const {
    double res = 0.0;
    for (size_t i = 0; i < mesh_.vertices.size(); ++i) {
        const int o = mesh_.owner[i];
        if (o == static_cast<int>(i)) continue;
        const cplx g = mesh_.to_owner[i].deriv(mesh_.vertices[i]);
        res = std::max(res, std::abs(vv[o] * ipow(g, a) * ipow(std::conj(g), b) - vv[i]));
    }
    return res;
}

FieldFit BolzaSurface::fit(const CVec& v, int a, int b) const {
    FieldFit f{a, b, CMat(mons_.size(), size())};
    for (int i = 0; i < size(); ++i) f.coef.col(i) = compute_pinv(i) * stencil_values(i, v, a, b);
    return f;
}

Mobius BolzaSurface::reduce(cplx z, cplx& zeta) const {
    Mobius M;
    zeta = z;
    for (int it = 0; it < 400; ++it) {
        int best = -1;
        double br = std::abs(zeta) - 1e-13;
        for (int s = 0; s < 8; ++s) {
            const double r = std::abs(G_.side[s](zeta));
            if (r < br) {
                br = r;
                best = s;
            }
        }
        if (best < 0) return M;
        zeta = G_.side[best](zeta);
        M = G_.side[best] * M;
    }
    throw Error("surface.reduce", "point reduction did not terminate");
}

PointValue BolzaSurface::local_value(const FieldFit& f, int c, const Mobius& Mz, cplx z) const {
    const int y = cloud_node_[c];
    const Mobius m = near_[cloud_elem_[c]].inverse() * Mz;  // z -> chart near node y
    const cplx zp = m(z);
    const Mobius T = recentre(x_[y]);
    const cplx w = T(zp);
    const double h = st_[y].h;
    const cplx u = w / h, ub = std::conj(w) / h;

    PointValue F{0.0, 0.0, 0.0};
    for (size_t k = 0; k < mons_.size(); ++k) {
        const auto [p, q] = mons_[k];
        const cplx c0 = f.coef(k, y);
        F.value += c0 * ipow(u, p) * ipow(ub, q);
        if (p > 0) F.dz += c0 * double(p) / h * ipow(u, p - 1) * ipow(ub, q);
        if (q > 0) F.dzb += c0 * double(q) / h * ipow(u, p) * ipow(ub, q - 1);
    }
    const PointValue Fz = pull_back(F, T, zp, f.a, f.b);
    return pull_back(Fz, m, z, f.a, f.b);
}

// Partition of unity over the lifts within blend_r_ of the reduced point, with
// weights (1 - d^2/R^2)^4 in the pseudo-distance d. Each local fit is only
// accurate near its own node, and picking a single node would make the result
// jump across Voronoi boundaries; path integrators need a C^2 interpolant.
PointValue BolzaSurface::evaluate(const FieldFit& f, cplx z) const {
    cplx zeta;
    const Mobius Mz = reduce(z, zeta);
    const Mobius Mzi = Mz.inverse();
    double R = blend_r_;
    for (int attempt = 0; attempt < 4; ++attempt, R *= 1.5) {
        // |zeta - y| <= 2 d(zeta, y) inside the disk.
        const double cell = 2.0 / grid_n_;
        const int reach = static_cast<int>(std::ceil(2.0 * R / cell));
        const int cx = std::clamp(static_cast<int>((zeta.real() + 1.0) * 0.5 * grid_n_), 0, grid_n_ - 1);
        const int cy = std::clamp(static_cast<int>((zeta.imag() + 1.0) * 0.5 * grid_n_), 0, grid_n_ - 1);
        double W = 0.0;
        cplx Wz = 0.0;
        PointValue acc{0.0, 0.0, 0.0};
        cplx accw_z = 0.0, accw_zb = 0.0;  // sum of weight derivatives times values
        for (int gy = std::max(0, cy - reach); gy <= std::min(grid_n_ - 1, cy + reach); ++gy)
            for (int gx = std::max(0, cx - reach); gx <= std::min(grid_n_ - 1, cx + reach); ++gx)
                for (int c : grid_[gy * grid_n_ + gx]) {
                    const cplx y = Mzi(cloud_z_[c]);  // lift seen from z
                    const cplx A = z - y, B = 1.0 - std::conj(z) * y;
                    const double d2 = std::norm(A) / std::norm(B);
                    if (d2 >= R * R) continue;
                    const double t = 1.0 - d2 / (R * R);
                    const double wt = t * t * t * t;
                    // d/dz of d^2 is d^2 (1/A + conj(y)/conj(B)).
                    const cplx d2z = d2 == 0.0 ? cplx(0.0) : d2 * (1.0 / A + std::conj(y) / std::conj(B));
                    const cplx wz = -4.0 * t * t * t * d2z / (R * R);
                    const PointValue F = local_value(f, c, Mz, z);
                    W += wt;
                    Wz += wz;
                    acc.value += wt * F.value;
                    acc.dz += wt * F.dz;
                    acc.dzb += wt * F.dzb;
                    accw_z += wz * F.value;
                    accw_zb += std::conj(wz) * F.value;
                }
        if (W <= 0.0) continue;
        PointValue G;
        G.value = acc.value / W;
        G.dz = (acc.dz + accw_z) / W - G.value * Wz / W;
        G.dzb = (acc.dzb + accw_zb) / W - G.value * std::conj(Wz) / W;
        return G;
    }
    throw Error("surface.evaluate", "no lifted node near the evaluation point");
}

TensorField dbar_op(const BolzaSurface& S, const TensorField& t) {
    if (t.b != 0) throw Error("surface.type", "dbar_op expects a type (a,0) field", json{{"type", {t.a, t.b}}});
    return {t.a, 1, S.dbar(t.v, t.a, 0)};
}

TensorField maass_d_op(const BolzaSurface& S, const TensorField& t) { return {t.a + 1, t.b, S.maass_d(t.v, t.a, t.b)}; }

cplx integrate_density(const BolzaSurface& S, const TensorField& d) {
    if (d.a != 1 || d.b != 1) throw Error("surface.type", "integrand must be a (1,1) density", json{{"type", {d.a, d.b}}});
    return S.integrate_density(d.v);
}

cplx petersson_pairing(const BolzaSurface& S, const TensorField& mu, const TensorField& nu, int k) {
    if (mu.a != 1 - k || mu.b != 1 || nu.a != 1 - k || nu.b != 1)
        throw Error("surface.type", "Petersson pairing needs two (1-k,1) fields", json{{"k", k}});
    return S.petersson(mu.v, nu.v, k);
}

TensorField isometry_pullback(const BolzaSurface& S, int m, const TensorField& t) {
    return {t.a, t.b, S.pullback(m, t.v, t.a, t.b)};
}

}  // namespace hcs
