#include "hcs/harmonicize.hpp"

#include <algorithm>
#include <cmath>

namespace hcs {

const BolzaSurface& bolza_base(const HigherStructure& I) {
    const auto* S = dynamic_cast<const BolzaSurface*>(I.base.get());
    if (!S) throw Error("harmonic.base", "structure must live on the Bolza surface");
    return *S;
}

RandomFields::RandomFields(SurfacePtr S, std::uint64_t seed) : S_(std::move(S)), rng_(seed) {}

CVec RandomFields::holomorphic(int degree) {
    std::normal_distribution<double> g;
    const Eigen::Index N = S_->size();
    CVec r = CVec::Ones(N);
    if (degree == 0) return r;
    if (degree == 1) throw Error("random.degree", "no holomorphic 1-differential factors are generated");
    // degree = 2a + 3b with a random admissible split.
    std::vector<std::pair<int, int>> splits;
    for (int b = 0; 3 * b <= degree; ++b)
        if ((degree - 3 * b) % 2 == 0) splits.emplace_back((degree - 3 * b) / 2, b);
    const auto [na, nb] = splits[std::uniform_int_distribution<size_t>(0, splits.size() - 1)(rng_)];
    auto combo = [&](int k) {
        const HoloBasis& B = S_->holomorphic_basis(k);
        CVec c = CVec::Zero(N);
        for (const auto& q : B.q) c += cplx(g(rng_), g(rng_)) * q;
        return c;
    };
    for (int i = 0; i < na; ++i) r = r.cwiseProduct(combo(2));
    for (int i = 0; i < nb; ++i) r = r.cwiseProduct(combo(3));
    return r;
}

CVec RandomFields::field(int a, int b) {
    const int m = std::min(a, b) - 2;
    CVec v = CVec::Zero(S_->size());
    for (int term = 0; term < 2; ++term) v += holomorphic(a - m).cwiseProduct(holomorphic(b - m).conjugate());
    const RVec& lam = S_->lambda();
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] *= std::pow(lam[i], m);
    const double s = S_->pointwise_norm(v, a, b).maxCoeff();
    return s > 0.0 ? CVec(v / s) : v;
}

CVec RandomFields::function() {
    CVec f = field(0, 0);
    CVec r = 0.5 * (f + f.conjugate());
    const double s = max_abs(r);
    return s > 0.0 ? CVec(r / s) : r;
}

JetField random_hamiltonian(RandomFields& rf, BasePtr base, int cap, int lo, int hi, double amplitude) {
    JetField H(base, cap);
    std::uniform_real_distribution<double> u(0.2, 1.0);
    for (int d = lo; d <= std::min(hi, cap); ++d)
        for (int a = d; 2 * a >= d; --a) {
            const int b = d - a;
            const double amp = amplitude * u(rf.rng());
            if (a == b) {
                H.at(a, b) = amp * rf.function();
            } else {
                const CVec c = amp * rf.field(-a, -b);
                H.at(a, b) = c;
                H.at(b, a) = c.conjugate();
            }
        }
    return H;
}

double harmonicity_residual(const BolzaSurface& S, const CVec& mu, int k) {
    const double n = petersson_norm(S, mu, k);
    if (n == 0.0) return 0.0;
    const TensorField h = harmonic_projection(S, TensorField{1 - k, 1, mu}, k);
    return petersson_norm(S, mu - h.v, k) / n;
}

double dbar_residual(const BolzaSurface& S, const CVec& mu, int k) {
    const RVec& lam = S.lambda();
    const RVec& al = S.weights();
    CVec q = mu.conjugate();
    for (Eigen::Index i = 0; i < q.size(); ++i) q[i] *= std::pow(lam[i], k - 1);
    const CVec dq = S.dbar(q, k, 0);
    double nin = 0.0, nout = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        nin += al[i] * std::norm(q[i]) * std::pow(lam[i], 1 - k);
        nout += al[i] * std::norm(dq[i]) * std::pow(lam[i], -k);
    }
    if (nin == 0.0) return 0.0;
    return std::sqrt(nout / nin) / S.holomorphic_basis(k).sigma_max;
}

double energy(const HigherStructure& I, int k) {
    if (k < 3 || k > I.n) throw Error("harmonic.degree", "energy needs 3 <= k <= n", json{{"k", k}, {"n", I.n}});
    return bolza_base(I).petersson(I.mu_k(k), I.mu_k(k), k).real();
}

json HarmonicResult::report() const {
    json j;
    j["passes"] = passes;
    j["displacement"] = displacement;
    j["residual_history"] = residual_history;
    json lv = json::array();
    for (const auto& l : levels)
        lv.push_back({{"k", l.k},
                      {"pre_residual", l.pre_residual},
                      {"post_residual", l.post_residual},
                      {"dbar_residual", l.dbar_residual},
                      {"energy_pre", l.energy_pre},
                      {"energy_post", l.energy_post},
                      {"potential_norm", l.potential_norm}});
    j["levels"] = lv;
    return j;
}

HarmonicResult harmonic_representative(const HigherStructure& input, const HarmonicOptions& opt) {
    const BolzaSurface& S = bolza_base(input);
    check_structure(input);
    if (sup_mu2(input) > 1e-12)
        throw Error("harmonic.natural", "input must be in natural coordinates (mu_2 = 0)", json{{"sup_mu2", sup_mu2(input)}});
    HigherStructure I = convert_normalization(input, Normalization::negative);
    const int n = I.n;

    HarmonicResult res;
    for (int k = 3; k <= n; ++k) {
        LevelReport l;
        l.k = k;
        l.pre_residual = harmonicity_residual(S, I.mu_k(k), k);
        l.energy_pre = energy(I, k);
        res.levels.push_back(l);
    }
    auto max_residual = [&](const HigherStructure& J) {
        double m = 0.0;
        for (int k = 3; k <= n; ++k) m = std::max(m, harmonicity_residual(S, J.mu_k(k), k));
        return m;
    };

    double r = max_residual(I);
    res.residual_history.push_back(r);
    while (r >= opt.tol && res.passes < opt.max_passes) {
        ++res.passes;
        for (int k = 3; k <= n; ++k) {
            const HodgeSplit h = hodge_decompose(S, TensorField{1 - k, 1, I.mu_k(k)}, k, opt.hodge_tol);
            res.levels[k - 3].potential_norm = std::max(res.levels[k - 3].potential_norm, max_abs(h.potential.v));
            if (max_abs(h.potential.v) == 0.0) continue;
            // H = -w p^{k-1} - conj(w) pbar^{k-1}: moves mu_k by -dbar w and
            // leaves mu_2..mu_{k-1} fixed.
            JetField H(I.base, n - 1);
            H.at(k - 1, 0) = -h.potential.v;
            H.at(0, k - 1) = -h.potential.v.conjugate();
            I = flow_apply(I, HamiltonianJet::autonomous(H), opt.flow);
        }
        const double rn = max_residual(I);
        res.residual_history.push_back(rn);
        if (!(rn < r) && rn >= opt.tol)
            throw Error("harmonic.stall", "harmonicity residual did not decrease", json{{"history", res.residual_history}});
        r = rn;
    }
    if (r >= opt.tol) throw Error("harmonic.tolerance", "harmonicity tolerance not reached", json{{"history", res.residual_history}});

    for (int k = 3; k <= n; ++k) {
        auto& l = res.levels[k - 3];
        l.post_residual = harmonicity_residual(S, I.mu_k(k), k);
        l.dbar_residual = dbar_residual(S, I.mu_k(k), k);
        l.energy_post = energy(I, k);
    }
    res.rep = convert_normalization(I, input.norm);
    res.displacement = structure_distance(res.rep, input);
    return res;
}

HigherStructure orbit_perturb(const HigherStructure& I, std::uint64_t seed, double amplitude, int pieces, const FlowOptions& opt) {
    bolza_base(I);
    if (amplitude == 0.0 || I.n < 3) return I;
    auto sp = std::static_pointer_cast<const BolzaSurface>(I.base);
    RandomFields rf(sp, seed);
    std::uniform_real_distribution<double> dur(0.3, 0.7);
    HamiltonianJet H;
    for (int p = 0; p < pieces; ++p) {
        const double t = dur(rf.rng());
        H.pieces.emplace_back(t, random_hamiltonian(rf, I.base, I.n - 1, 2, I.n - 1, amplitude));
    }
    return flow_apply(I, H, opt);
}

HigherStructure isometry_pullback(const HigherStructure& I, int m) {
    const BolzaSurface& S = bolza_base(I);
    HigherStructure r = I;
    for (int k = 2; k <= I.n; ++k) r.mu_k(k) = S.pullback(m, I.mu_k(k), 1 - k, 1);
    return r;
}

}  // namespace hcs
