#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>

#include "hcs/surface.hpp"

namespace hcs {

namespace {

CMat random_block(Eigen::Index n, Eigen::Index m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    CMat X(n, m);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index i = 0; i < n; ++i) X(i, j) = cplx(g(rng), g(rng));
    return X;
}

CMat orthonormal(const CMat& X) {
    Eigen::HouseholderQR<CMat> qr(X);
    return qr.householderQ() * CMat::Identity(X.rows(), X.cols());
}

}  // namespace

const HoloBasis& BolzaSurface::holomorphic_basis(int k) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = bases_.find(k);
        if (it != bases_.end()) return *it->second;
    }
    if (k < 0) throw Error("basis.k", "holomorphic basis needs k >= 0", json{{"k", k}});
    const Eigen::Index N = size();

    // Metric scaling makes the discrete operator an approximation of dbar
    // between L^2 spaces: input norm |q|^2 lambda^{1-k} dA_euc, output
    // |dbar q|^2 lambda^{-k} dA_euc.
    RVec sin(N), sout(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        sin[i] = std::sqrt(alpha_[i] * std::pow(lambda_[i], 1 - k));
        sout[i] = std::sqrt(alpha_[i] * std::pow(lambda_[i], -k));
    }
    CMat Dt = CMat(dbar_matrix(k, 0));
    Dt = sout.cast<cplx>().asDiagonal() * Dt * sin.cwiseInverse().cast<cplx>().asDiagonal();
    Eigen::PartialPivLU<CMat> lu(Dt);

    // Largest singular value by power iteration on Dt^* Dt.
    CVec v = random_block(N, 1, opt_.seed + 17 * k).col(0);
    v.normalize();
    double smax = 0.0;
    for (int it = 0; it < 60; ++it) {
        CVec w = Dt.adjoint() * (Dt * v);
        const double nrm = w.norm();
        const double prev = smax;
        smax = std::sqrt(nrm);
        v = w / nrm;
        if (it > 5 && std::abs(smax - prev) < 1e-10 * smax) break;
    }

    // Smallest singular triplets by block inverse iteration on (Dt^* Dt)^{-1}
    // followed by a Rayleigh-Ritz step on the block.
    const int expected = std::max(1, 2 * k - 1);
    Eigen::Index bs = expected + 8;
    CMat X = orthonormal(random_block(N, bs, opt_.seed + 31 * k));
    RVec sv, prev_sv;
    CMat V;
    for (int it = 0; it < 40; ++it) {
        CMat Y = lu.solve(CMat(lu.adjoint().solve(X)));
        X = orthonormal(Y);
        const CMat B = Dt * X;
        Eigen::JacobiSVD<CMat> svd(B, Eigen::ComputeThinV);
        // JacobiSVD sorts descending; reverse to ascending.
        sv = svd.singularValues().reverse();
        V = X * svd.matrixV().rowwise().reverse();
        X = V;
        if (it > 2 && prev_sv.size() == sv.size()) {
            double change = 0.0;
            for (Eigen::Index j = 0; j < sv.size() - 2; ++j)
                change = std::max(change, std::abs(sv[j] - prev_sv[j]) / std::max(sv[j], 1e-300 + 1e-3 * smax * opt_.kernel_cutoff));
            if (change < 1e-6) break;
        }
        prev_sv = sv;
    }

    auto B = std::make_unique<HoloBasis>();
    B->k = k;
    B->sigma_max = smax;
    B->cutoff = opt_.kernel_cutoff * smax;
    for (Eigen::Index j = 0; j < sv.size(); ++j) B->singular.push_back(sv[j]);
    int dim = 0;
    while (dim < sv.size() && sv[dim] < B->cutoff) ++dim;
    json detail{{"k", k}, {"singular_values", B->singular}, {"sigma_max", smax}, {"cutoff", B->cutoff}};
    if (dim == 0 || dim >= sv.size() - 1)
        throw Error("basis.cutoff", "no numerical kernel separated below the cutoff", detail);
    B->dim = dim;
    B->gap = sv[dim] / std::max(sv[dim - 1], 1e-300);
    detail["gap"] = B->gap;
    if (B->gap < opt_.min_gap) throw Error("basis.gap", "ambiguous kernel cutoff: spectral gap too small", detail);
    for (int j = 0; j < dim; ++j) B->q.push_back(V.col(j).cwiseQuotient(sin.cast<cplx>()));

    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = bases_[k];
    if (!slot) slot = std::move(B);
    return *slot;
}

CVec BolzaSurface::solve_dbar(const CVec& r, int a) const {
    const Eigen::PartialPivLU<CMat>* lu = nullptr;
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = lus_.find(a);
        if (it != lus_.end()) lu = it->second.get();
    }
    if (!lu) {
        const CMat D(dbar_matrix(a, 0));
        auto f = std::make_unique<Eigen::PartialPivLU<CMat>>(D);
        std::lock_guard<std::mutex> lock(mu_);
        auto& slot = lus_[a];
        if (!slot) slot = std::move(f);
        lu = slot.get();
    }
    return lu->solve(r);
}

}  // namespace hcs
