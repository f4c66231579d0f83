#include "hcs/flows.hpp"

#include <algorithm>
#include <cmath>

namespace hcs {

HamiltonianJet HamiltonianJet::autonomous(const JetField& H, double duration) {
    HamiltonianJet h;
    h.pieces.emplace_back(duration, H);
    return h;
}

bool HamiltonianJet::is_real(double tol) const {
    for (const auto& [t, H] : pieces) {
        const double scale = std::max(1.0, jet_max_abs(H));
        if (jet_max_abs(jet_add(H, jet_scale(jet_conj(H), -1.0))) > tol * scale) return false;
    }
    return true;
}

int HamiltonianJet::min_degree(double tol) const {
    int best = 1 << 20;
    for (const auto& [t, H] : pieces) {
        int d = H.cap() + 1;
        for (int k = 1; k <= H.cap() && d > H.cap(); ++k)
            if (jet_max_abs(jet_degree_part(H, k)) > tol) d = k;
        best = std::min(best, d);
    }
    return best;
}

double HamiltonianJet::total_time() const {
    double t = 0.0;
    for (const auto& p : pieces) t += p.first;
    return t;
}

HamiltonianJet HamiltonianJet::reversed() const {
    HamiltonianJet r;
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) r.pieces.emplace_back(it->first, jet_scale(it->second, -1.0));
    return r;
}

json FlowRecord::summary() const {
    json j;
    j["steps"] = steps;
    j["aborted"] = aborted;
    if (aborted) j["abort_reason"] = abort_reason;
    j["final_time"] = times.empty() ? 0.0 : times.back();
    json last = json::array();
    if (!sup_mu.empty())
        for (double v : sup_mu.back()) last.push_back(v);
    j["final_sup_mu"] = last;
    j["displacement"] = structure_distance(initial, final);
    return j;
}

double tangent_max_abs(const Tangent& t) {
    double m = 0.0;
    for (const auto& v : t) m = std::max(m, max_abs(v));
    return m;
}

double structure_distance(const HigherStructure& a, const HigherStructure& b) {
    if (a.n != b.n) throw Error("structure.shape", "structures of different degree");
    double m = 0.0;
    for (int k = 2; k <= a.n; ++k) m = std::max(m, max_abs(a.mu_k(k) - b.mu_k(k)));
    return m;
}

namespace {

void require_same_base(const HigherStructure& I, const JetField& H) {
    if (H.base() != I.base) throw Error("flow.base", "Hamiltonian and structure live on different bases");
}

}  // namespace

Tangent first_variation(const HigherStructure& I, const JetField& H) {
    require_same_base(I, H);
    const Base& B = *I.base;
    const int n = I.n;
    const Eigen::Index N = B.size();
    const auto w = ideal_reduce(H, I);
    const double sb = pbar_sign(I.norm);  // +1 negative, -1 positive normalization

    std::vector<CVec> dmu(n + 1);
    for (int j = 2; j <= n; ++j) dmu[j] = B.d(I.mu_k(j), 1 - j, 1);

    Tangent out(n - 1, CVec::Zero(N));
    for (int k = 1; k < n; ++k) {
        if (max_abs(w[k]) == 0.0) continue;
        const CVec dw = B.d(w[k], -k, 0);
        const CVec dbw = B.dbar(w[k], -k, 0);
        for (int l = k + 1; l <= n; ++l) {
            const int j = l - k + 1;
            CVec& o = out[l - 2];
            if (l == k + 1) o += sb * dbw;
            o.array() += double(l - k) * I.mu_k(j).array() * dw.array() - double(k) * w[k].array() * dmu[j].array();
        }
    }
    return out;
}

Tangent first_variation_maass(const HigherStructure& I, const JetField& H) {
    require_same_base(I, H);
    if (I.norm != Normalization::negative)
        throw Error("flow.normalization", "the Maass form of the first variation needs negative normalization");
    if (sup_mu2(I) > 1e-14) throw Error("flow.mu2", "the Maass form is implemented for mu_2 = 0 only", json{{"sup_mu2", sup_mu2(I)}});
    const Base& B = *I.base;
    const CVec& z = B.points();
    for (Eigen::Index i = 0; i < z.size(); ++i)
        if (!(std::abs(z[i]) < 1.0)) throw Error("flow.chart", "Maass derivatives need chart points in the unit disk");

    // Maass d on type (a,b): d - a (d log lambda), lambda = 4/(1-|z|^2)^2.
    auto maass_d = [&](const CVec& v, int a, int b) {
        CVec r = B.d(v, a, b);
        for (Eigen::Index i = 0; i < r.size(); ++i) r[i] -= double(a) * 2.0 * std::conj(z[i]) / (1.0 - std::norm(z[i])) * v[i];
        return r;
    };
    // Maass dbar on (-k,0) sections of the base surface.
    auto maass_dbar = [&](const CVec& v, int a) { return CVec(-B.dbar(v, a, 0)); };

    const int n = I.n;
    const auto w = ideal_reduce(H, I);
    Tangent out(n - 1, CVec::Zero(B.size()));
    for (int k = 1; k < n; ++k) {
        if (max_abs(w[k]) == 0.0) continue;
        // At mu_2 = 0 the identifications are the identity and the Jacobian factor is 1.
        out[k - 1] -= maass_dbar(w[k], -k);
        const CVec mdw = maass_d(w[k], -k, 0);
        for (int l = k + 2; l <= n; ++l) {
            const int j = l - k + 1;
            const CVec mdmu = maass_d(I.mu_k(j), 1 - j, 1);
            out[l - 2].array() += double(l - k) * I.mu_k(j).array() * mdw.array() - double(k) * w[k].array() * mdmu.array();
        }
    }
    return out;
}

Tangent structure_velocity(const HigherStructure& I, const JetField& H) {
    require_same_base(I, H);
    const Base& B = *I.base;
    const int n = I.n;
    const int D = n - 1;
    const double sb = pbar_sign(I.norm);

    // {H, g} for g = sb pbar + sum_j mu_j p^{j-1}, expanded with the bracket
    // rule; mu_j carries type (1-j, 1), which the generic jet bracket cannot see.
    JetField r(I.base, D);
    std::vector<CVec> dmu(n + 1), dbmu(n + 1);
    for (int j = 2; j <= n; ++j) {
        if (max_abs(I.mu_k(j)) == 0.0) continue;
        dmu[j] = B.d(I.mu_k(j), 1 - j, 1);
        dbmu[j] = B.dbar(I.mu_k(j), 1 - j, 1);
    }
    for (int idx = 0; idx < jet_count(H.cap()); ++idx) {
        const CVec& w = H.slices()[idx];
        if (max_abs(w) == 0.0) continue;
        auto [k, l] = jet_monomial(idx);
        if (k + l > D) continue;
        const CVec dw = B.d(w, -k, -l);
        const CVec dbw = B.dbar(w, -k, -l);
        r.at(k, l) += sb * dbw;
        for (int j = 2; j <= n; ++j) {
            if (dmu[j].size() == 0) continue;
            const int m = j - 1;
            if (k + l + m - 1 <= D && k + m - 1 >= 0 && k + m - 1 + l >= 1)
                r.at(k + m - 1, l).array() += double(m) * I.mu_k(j).array() * dw.array() - double(k) * w.array() * dmu[j].array();
            if (l >= 1 && k + l + m - 1 <= D) r.at(k + m, l - 1).array() -= double(l) * w.array() * dbmu[j].array();
        }
    }
    const auto nf = ideal_reduce(r, I);
    Tangent out(n - 1);
    for (int j = 2; j <= n; ++j) out[j - 2] = nf[j - 1];
    return out;
}

namespace {

HigherStructure shifted(const HigherStructure& I, const Tangent& v, double h) {
    HigherStructure r = I;
    for (size_t i = 0; i < r.mu.size(); ++i) r.mu[i] += h * v[i];
    return r;
}

std::vector<double> sup_norms(const HigherStructure& I) {
    std::vector<double> s;
    for (const auto& m : I.mu) s.push_back(max_abs(m));
    return s;
}

FlowRecord integrate_fixed(const HigherStructure& I, const HamiltonianJet& H, const FlowOptions& opt, int mult) {
    FlowRecord rec;
    rec.initial = I;
    HigherStructure cur = I;
    double t = 0.0;
    rec.times.push_back(0.0);
    rec.sup_mu.push_back(sup_norms(cur));
    for (const auto& [dur, G] : H.pieces) {
        if (dur == 0.0 || jet_max_abs(G) == 0.0) {
            t += dur;
            continue;
        }
        const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(dur) * opt.steps_per_unit))) * mult;
        const double h = dur / steps;
        for (int s = 0; s < steps; ++s) {
            try {
                const Tangent k1 = first_variation(cur, G);
                const Tangent k2 = first_variation(shifted(cur, k1, 0.5 * h), G);
                const Tangent k3 = first_variation(shifted(cur, k2, 0.5 * h), G);
                const Tangent k4 = first_variation(shifted(cur, k3, h), G);
                for (size_t i = 0; i < cur.mu.size(); ++i) cur.mu[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            } catch (const Error& e) {
                rec.aborted = true;
                rec.abort_reason = e.what();
            }
            t += h;
            ++rec.steps;
            rec.times.push_back(t);
            rec.sup_mu.push_back(sup_norms(cur));
            if (!rec.aborted && !(sup_mu2(cur) < 1.0 - opt.margin)) {
                rec.aborted = true;
                rec.abort_reason = "sup |mu_2| reached 1 - margin";
            }
            if (rec.aborted) {
                rec.final = cur;
                return rec;
            }
        }
    }
    rec.final = cur;
    return rec;
}

}  // namespace

FlowRecord flow_integrate(const HigherStructure& I, const HamiltonianJet& H, const FlowOptions& opt) {
    check_structure(I);
    for (const auto& p : H.pieces) require_same_base(I, p.second);
    if (opt.steps_per_unit < 1) throw Error("flow.steps", "steps per unit time must be >= 1");
    FlowRecord rec = integrate_fixed(I, H, opt, 1);
    if (opt.adaptive_tol <= 0.0 || rec.aborted) return rec;
    for (int d = 1, mult = 2; d <= opt.max_doublings; ++d, mult *= 2) {
        FlowRecord finer = integrate_fixed(I, H, opt, mult);
        const double change = structure_distance(rec.final, finer.final);
        rec = std::move(finer);
        if (rec.aborted || change < opt.adaptive_tol) return rec;
    }
    return rec;
}

HigherStructure flow_apply(const HigherStructure& I, const HamiltonianJet& H, const FlowOptions& opt) {
    FlowRecord r = flow_integrate(I, H, opt);
    if (r.aborted)
        throw Error("flow.abort", "flow left the admissible region", json{{"reason", r.abort_reason}, {"time", r.times.back()}, {"steps", r.steps}});
    return r.final;
}

}  // namespace hcs
