#include "hcs/affine_sphere.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace hcs {

PickData pick_differential(const HigherStructure& input, double tol) {
    const BolzaSurface& S = bolza_base(input);
    if (input.n < 3) throw Error("pick.degree", "Pick differential needs a structure of degree >= 3");
    const HigherStructure I = convert_normalization(input, Normalization::negative);
    if (sup_mu2(I) > 1e-12) throw Error("pick.natural", "structure must be in natural coordinates (mu_2 = 0)");
    const CVec& mu3 = I.mu_k(3);
    const double r = harmonicity_residual(S, mu3, 3);
    if (!(r < tol)) throw Error("pick.not_harmonic", "mu_3 is not harmonic", json{{"residual", r}, {"tol", tol}});
    PickData p;
    p.phi = TensorField{3, 0, CVec(mu3.size())};
    const RVec& lam = S.lambda();
    for (Eigen::Index i = 0; i < mu3.size(); ++i) p.phi.v[i] = std::conj(mu3[i]) * lam[i] * lam[i] / 12.0;
    p.holomorphy_residual = dbar_residual(S, mu3, 3);
    return p;
}

namespace {

RVec pick_density(const BolzaSurface& S, const PickData& p) {
    const RVec& lam = S.lambda();
    RVec q(lam.size());
    for (Eigen::Index i = 0; i < q.size(); ++i) q[i] = std::norm(p.phi.v[i]) / (lam[i] * lam[i] * lam[i]);
    return q;
}

}  // namespace

RVec wang_residual(const BolzaSurface& S, const PickData& p, const RVec& u) {
    const RVec q = pick_density(S, p);
    RVec F = S.laplacian() * u;
    for (Eigen::Index i = 0; i < u.size(); ++i) F[i] -= 2.0 * std::exp(u[i]) - 2.0 - 4.0 * q[i] * std::exp(-2.0 * u[i]);
    return F;
}

BlaschkeMetric wang_solve(const BolzaSurface& S, const PickData& p, double tol, int max_iter) {
    if (p.phi.a != 3 || p.phi.b != 0) throw Error("wang.type", "Pick differential must have type (3,0)");
    const Eigen::Index N = S.size();
    const RVec q = pick_density(S, p);
    BlaschkeMetric h;
    h.u = RVec::Zero(N);
    RVec F = wang_residual(S, p, h.u);
    double res = F.cwiseAbs().maxCoeff();
    h.residual_trace.push_back(res);
    using SpMat = Eigen::SparseMatrix<double>;
    while (res >= tol) {
        if (h.iterations >= max_iter)
            throw Error("wang.divergence", "Newton iteration for the Blaschke metric did not converge", json{{"residuals", h.residual_trace}});
        SpMat J = S.laplacian();
        for (Eigen::Index i = 0; i < N; ++i) J.coeffRef(i, i) -= 2.0 * std::exp(h.u[i]) + 8.0 * q[i] * std::exp(-2.0 * h.u[i]);
        J.makeCompressed();
        Eigen::SparseLU<SpMat> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success) throw Error("wang.singular", "singular Newton matrix");
        const RVec step = lu.solve(-F);
        double t = 1.0;
        for (int damp = 0; damp < 20; ++damp, t *= 0.5) {
            const RVec trial = h.u + t * step;
            const RVec Ft = wang_residual(S, p, trial);
            const double rt = Ft.cwiseAbs().maxCoeff();
            if (rt < res || damp == 19) {
                h.u = trial;
                F = Ft;
                res = rt;
                break;
            }
        }
        ++h.iterations;
        h.residual_trace.push_back(res);
    }
    h.residual = res;
    return h;
}

Developer::Developer(SurfacePtr S, const PickData& p, const BlaschkeMetric& h, DevelopOptions opt)
    : S_(std::move(S)), opt_(opt) {
    ufit_ = S_->fit(h.u.cast<cplx>(), 0, 0);
    phifit_ = S_->fit(p.phi.v, 3, 0);
}

// Generator of the gauged frame E = F diag(e^{-psi/2}, e^{-psi/2}, 1); all
// entries stay bounded in hyperbolic arclength.
Mat3 Developer::generator_matrix(cplx z, cplx zd) const {
    const PointValue U = S_->evaluate(ufit_, z);
    const cplx Phi = S_->evaluate(phifit_, z).value;
    const double s = 1.0 - std::norm(z);
    const double psi = U.value.real() + std::log(4.0 / (s * s));
    const cplx psiz = U.dz + 2.0 * std::conj(z) / s;
    const cplx c = zd * psiz;
    const cplx e = zd * Phi * std::exp(-psi);
    const double eh = std::exp(0.5 * psi);
    const double psidot = 2.0 * c.real();
    Mat3 M;
    M << (c + e).real() - 0.5 * psidot, -(c + e).imag(), zd.real() * eh,
         (c - e).imag(), (c - e).real() - 0.5 * psidot, zd.imag() * eh,
         zd.real() * eh, zd.imag() * eh, 0.0;
    return M;
}

Mat3 Developer::leg(cplx a, cplx b, int steps) const {
    // Geodesic from a to b: z(s) = T^{-1}(tanh(s/2) e^{i theta}), s in [0, d].
    const Mobius T = recentre(a);
    const Mobius Ti = T.inverse();
    const cplx wb = T(b);
    const double r = std::abs(wb);
    if (r == 0.0) return Mat3::Identity();
    const cplx dir = wb / r;
    const double d = 2.0 * std::atanh(r);
    auto point = [&](double s, cplx& z, cplx& zd) {
        const double th = std::tanh(0.5 * s);
        const cplx w = th * dir;
        z = Ti(w);
        zd = Ti.deriv(w) * (0.5 * (1.0 - th * th)) * dir;
    };
    auto gauge = [&](cplx z) {
        const PointValue U = S_->evaluate(ufit_, z);
        const double s = 1.0 - std::norm(z);
        const double psi = U.value.real() + std::log(4.0 / (s * s));
        Mat3 D = Mat3::Identity();
        D(0, 0) = D(1, 1) = std::exp(-0.5 * psi);
        return D;
    };
    const double hs = d / steps;
    Mat3 Q = Mat3::Identity();
    for (int i = 0; i < steps; ++i) {
        const double s0 = i * hs;
        cplx z0, z1, z2, v0, v1, v2;
        point(s0, z0, v0);
        point(s0 + 0.5 * hs, z1, v1);
        point(s0 + hs, z2, v2);
        const Mat3 M0 = generator_matrix(z0, v0), M1 = generator_matrix(z1, v1), M2 = generator_matrix(z2, v2);
        // dQ/ds = Q M(s)
        const Mat3 k1 = Q * M0;
        const Mat3 k2 = (Q + 0.5 * hs * k1) * M1;
        const Mat3 k3 = (Q + 0.5 * hs * k2) * M1;
        const Mat3 k4 = (Q + hs * k3) * M2;
        Q += hs / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    // F = E D^{-1}, so F(b) = F(a) D(a) Q D(b)^{-1}.
    return gauge(a) * Q * gauge(b).inverse();
}

Mat3 Developer::develop_frame(const std::vector<cplx>& path) const {
    Mat3 P = Mat3::Identity();
    last_steps_ = 0;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        if (!(std::abs(path[i]) < 1.0) || !(std::abs(path[i + 1]) < 1.0))
            throw Error("develop.path", "path leaves the disk", json{{"leg", i}});
        int steps = opt_.min_steps;
        Mat3 prev = leg(path[i], path[i + 1], steps);
        for (;;) {
            if (2 * steps > opt_.max_steps)
                throw Error("develop.steps", "frame transport did not stabilise", json{{"leg", i}, {"steps", steps}});
            steps *= 2;
            const Mat3 cur = leg(path[i], path[i + 1], steps);
            const double change = (cur - prev).norm() / std::max(1.0, cur.norm());
            // Richardson step on the RK4 pair removes the h^4 term.
            const Mat3 extrap = cur + (cur - prev) / 15.0;
            prev = cur;
            if (change < opt_.tol) {
                prev = extrap;
                break;
            }
        }
        last_steps_ = std::max(last_steps_, steps);
        P = P * prev;
    }
    return P;
}

Mat3 Developer::initial_frame() const {
    const double psi0 = S_->evaluate(ufit_, 0.0).value.real() + std::log(4.0);
    Mat3 F0 = Mat3::Zero();
    F0(0, 0) = F0(1, 1) = std::exp(0.5 * psi0);
    F0(2, 2) = std::exp(-psi0);
    return F0;
}

Mat3 Developer::holonomy_of(const Mobius& g) const {
    const Mat3 P = develop_frame({0.0, g(0.0)});
    const cplx gp = g.deriv(0.0);
    Mat3 B = Mat3::Identity();
    B(0, 0) = gp.real();
    B(0, 1) = -gp.imag();
    B(1, 0) = gp.imag();
    B(1, 1) = gp.real();
    const Mat3 F0 = initial_frame();
    return F0 * P * B * F0.inverse();
}

std::vector<double> trace_table(const std::array<Mat3, 4>& A) {
    std::vector<double> t;
    for (int i = 0; i < 4; ++i) t.push_back(A[i].trace());
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) t.push_back((A[i] * A[j]).trace());
    return t;
}

FuchsianCheck fuchsian_check(const std::array<Mat3, 4>& A, const std::array<Mobius, 4>& gamma) {
    FuchsianCheck fc;
    // Unknown symmetric Q = [q0 q1 q2; q1 q3 q4; q2 q4 q5].
    auto basis = [](int k) {
        static const int idx[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
        Mat3 E = Mat3::Zero();
        E(idx[k][0], idx[k][1]) = 1.0;
        E(idx[k][1], idx[k][0]) = 1.0;
        return E;
    };
    RMat L(24, 6);
    for (int g = 0; g < 4; ++g) {
        const double sc = 1.0 / A[g].squaredNorm();
        for (int k = 0; k < 6; ++k) {
            const Mat3 E = basis(k);
            const Mat3 R = (A[g].transpose() * E * A[g] - E) * sc;
            int r = 0;
            for (int i = 0; i < 3; ++i)
                for (int j = i; j < 3; ++j) L(6 * g + r++, k) = R(i, j);
        }
    }
    Eigen::JacobiSVD<RMat> svd(L, Eigen::ComputeFullV);
    const Eigen::VectorXd qv = svd.matrixV().col(5);
    Mat3 Q = Mat3::Zero();
    for (int k = 0; k < 6; ++k) Q += qv[k] * basis(k);
    for (int g = 0; g < 4; ++g)
        fc.form_residual = std::max(fc.form_residual, (A[g].transpose() * Q * A[g] - Q).norm() / (A[g].squaredNorm() * Q.norm()));
    Eigen::SelfAdjointEigenSolver<Mat3> es(Q);
    for (int i = 0; i < 3; ++i) (es.eigenvalues()[i] > 0 ? fc.positive : fc.negative)++;
    if (fc.negative > fc.positive) std::swap(fc.negative, fc.positive);

    for (int g = 0; g < 4; ++g) {
        const cplx det = gamma[g].a * gamma[g].d - gamma[g].b * gamma[g].c;
        const double tr = std::abs(gamma[g].trace() / std::sqrt(det));
        const double ell = 2.0 * std::acosh(tr / 2.0);
        std::vector<double> target{std::exp(-ell), 1.0, std::exp(ell)};
        Eigen::EigenSolver<Mat3> ev(A[g]);
        std::vector<double> got;
        double imag = 0.0;
        for (int i = 0; i < 3; ++i) {
            got.push_back(ev.eigenvalues()[i].real());
            imag = std::max(imag, std::abs(ev.eigenvalues()[i].imag()));
        }
        std::sort(got.begin(), got.end());
        double e = imag;
        for (int i = 0; i < 3; ++i) e = std::max(e, std::abs(got[i] - target[i]) / std::max(1.0, target[i]));
        fc.eigen_residual = std::max(fc.eigen_residual, e);
    }
    fc.fuchsian = fc.form_residual < 1e-6 && fc.positive == 2 && fc.negative == 1 && fc.eigen_residual < 1e-6;
    return fc;
}

Holonomy holonomy(SurfacePtr S, const PickData& p, const BlaschkeMetric& h, const DevelopOptions& opt) {
    Developer dev(S, p, h, opt);
    const FuchsianGroup& G = S->group();
    Holonomy H;
    for (int i = 0; i < 4; ++i) {
        H.gen[i] = dev.holonomy_of(G.gen[i]);
        H.steps = std::max(H.steps, dev.last_steps());
        H.max_det_error = std::max(H.max_det_error, std::abs(H.gen[i].determinant() - 1.0));
    }
    // The commutators have norms near 2e4 at genus 2, so the word is evaluated
    // in extended precision; in double the product roundoff alone is ~5e-6.
    using MatL = Eigen::Matrix<long double, 3, 3>;
    auto comm = [](const Mat3& a, const Mat3& b) {
        const MatL x = a.cast<long double>(), y = b.cast<long double>();
        return MatL(x * y * x.inverse() * y.inverse());
    };
    H.relation_defect = static_cast<double>(
        (comm(H.gen[0], H.gen[1]) * comm(H.gen[2], H.gen[3]) - MatL::Identity()).norm());
    H.traces = trace_table(H.gen);
    for (int i = 0; i < 4; ++i) H.trace_labels.push_back(H.names[i]);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) H.trace_labels.push_back(H.names[i] + "*" + H.names[j]);
    H.fuchsian = fuchsian_check(H.gen, G.gen);
    return H;
}

json Holonomy::report() const {
    json j;
    json mats = json::object();
    for (int g = 0; g < 4; ++g) {
        json m = json::array();
        for (int r = 0; r < 3; ++r) m.push_back({gen[g](r, 0), gen[g](r, 1), gen[g](r, 2)});
        mats[names[g]] = m;
    }
    j["matrices"] = mats;
    json tt = json::array();
    for (size_t i = 0; i < traces.size(); ++i) tt.push_back({{"word", trace_labels[i]}, {"trace", traces[i]}});
    j["traces"] = tt;
    j["relation_defect"] = relation_defect;
    j["max_det_error"] = max_det_error;
    j["steps"] = steps;
    j["fuchsian"] = {{"form_residual", fuchsian.form_residual},
                     {"signature", {fuchsian.positive, fuchsian.negative}},
                     {"eigen_residual", fuchsian.eigen_residual},
                     {"fuchsian", fuchsian.fuchsian ? "yes" : "no"}};
    return j;
}

json HitchinResult::report() const {
    json j;
    j["harmonic"] = harmonic.report();
    j["pick"] = {{"sup_norm", pick.phi.v.size() ? max_abs(pick.phi.v) : 0.0}, {"holomorphy_residual", pick.holomorphy_residual}};
    j["wang"] = {{"iterations", metric.iterations}, {"residual", metric.residual}, {"residual_trace", metric.residual_trace},
                 {"sup_u", metric.u.size() ? metric.u.cwiseAbs().maxCoeff() : 0.0}};
    j["holonomy"] = hol.report();
    return j;
}

HitchinResult hitchin_map(const HigherStructure& I, const HarmonicOptions& hopt, const DevelopOptions& dopt) {
    if (I.n != 3) throw Error("hitchin.degree", "the Hitchin map is implemented for degree 3", json{{"n", I.n}});
    const auto S = std::dynamic_pointer_cast<const BolzaSurface>(I.base);
    if (!S) throw Error("harmonic.base", "structure must live on the Bolza surface");
    HitchinResult r;
    r.harmonic = harmonic_representative(I, hopt);
    r.pick = pick_differential(r.harmonic.rep, std::max(hopt.tol, 1e-6));
    r.metric = wang_solve(*S, r.pick);
    r.hol = holonomy(S, r.pick, r.metric, dopt);
    return r;
}

}  // namespace hcs
