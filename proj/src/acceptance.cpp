#include "hcs/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "hcs/affine_sphere.hpp"
#include "hcs/decompose.hpp"
#include "hcs/flat_torus.hpp"
#include "hcs/hodge.hpp"
#include "hcs/modeljet.hpp"

namespace hcs {

json CriterionResult::to_json() const {
    json j{{"id", id}, {"title", title}, {"pass", pass}, {"measured", measured}, {"limits", limits}};
    if (!error.empty()) j["error"] = error;
    return j;
}

std::string criterion_line(const CriterionResult& r) {
    std::ostringstream s;
    const bool ok = r.pass && r.runtime_ok();
    s << "AC" << r.id << ' ' << (ok ? "PASS" : "FAIL") << ' ' << r.title << " (" << std::fixed;
    s.precision(1);
    s << r.seconds << "s";
    if (r.time_limit > 0.0) s << " / limit " << r.time_limit << "s";
    s << ") " << r.measured.dump();
    if (!r.error.empty()) s << " error: " << r.error;
    return s.str();
}

namespace {

struct Profile {
    bool full = true;
    int resolution = 4;
    double kernel_cutoff = 1e-6;
    double min_gap = 1e3;
    int torus_n = 32;
    int jets = 100;          // AC1 random jet fields
    int hodge_inputs = 50;   // AC4 per k
    int orbit_samples = 20;  // AC8
    int hitchin_samples = 2;  // AC9 orbit-perturbed inputs
    double equivariance_tol = 1e-3;
    double orbit_tol = 1e-5;
    double trace_tol = 1e-4;
};

Profile make_profile(const std::string& name) {
    Profile p;
    if (name == "full") return p;
    if (name != "quick") throw Error("config.profile", "profile must be 'full' or 'quick'", json{{"profile", name}});
    p.full = false;
    p.resolution = 3;
    p.kernel_cutoff = 1e-4;
    p.min_gap = 10;
    p.torus_n = 24;
    p.jets = 20;
    p.hodge_inputs = 10;
    p.orbit_samples = 4;
    p.hitchin_samples = 1;
    // Resolution 3 is a smoke level: the rotation is matched only to the
    // coarse discretization accuracy.
    p.equivariance_tol = 5e-2;
    p.orbit_tol = 1e-3;
    p.trace_tol = 1e-3;
    return p;
}

double rel(double num, double den) { return num / std::max(den, 1e-300); }

// Band-limited random samples on the torus: Fourier modes |kx|, |ky| <= band.
CVec torus_field(const FlatTorus& T, std::mt19937_64& rng, int band, double amp) {
    std::normal_distribution<double> g;
    CVec v = CVec::Zero(T.size());
    const CVec& z = T.points();
    const double w = 2.0 * std::numbers::pi / T.period();
    for (int kx = -band; kx <= band; ++kx)
        for (int ky = -band; ky <= band; ++ky) {
            const cplx c(g(rng), g(rng));
            for (Eigen::Index i = 0; i < v.size(); ++i) v[i] += c * std::exp(I_unit * w * (kx * z[i].real() + ky * z[i].imag()));
        }
    return amp * v / max_abs(v);
}

JetField torus_jet(const std::shared_ptr<const FlatTorus>& T, std::mt19937_64& rng, int cap, int lo, bool real, double amp) {
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

Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    return Rational(num(rng), den(rng));
}

ModelJet random_model_jet(int n, std::mt19937_64& rng) {
    std::vector<Rational> a;
    for (int k = 2; k <= n; ++k) a.push_back(random_rational(rng));
    return mj_make(n, a);
}

// Surface shared by the mesh criteria; built on first use.
class Context {
public:
    Context(const Profile& p, std::uint64_t seed) : p_(p), seed_(seed) {}
    SurfacePtr surface() {
        if (!S_) {
            SurfaceOptions o;
            o.resolution = p_.resolution;
            o.kernel_cutoff = p_.kernel_cutoff;
            o.min_gap = p_.min_gap;
            S_ = BolzaSurface::build(o);
        }
        return S_;
    }
    std::uint64_t seed(int salt) const { return seed_ * 1000003ULL + static_cast<std::uint64_t>(salt); }
    const Profile& profile() const { return p_; }

private:
    Profile p_;
    std::uint64_t seed_;
    SurfacePtr S_;
};

// mu_3 = (harmonic part) + dbar(potential), both of unit size times amp.
HigherStructure mixed_structure(SurfacePtr S, RandomFields& rf, int n, double amp) {
    HigherStructure I = make_structure(S, n);
    for (int k = 3; k <= n; ++k) {
        const auto frame = harmonic_frame(*S, k);
        CVec h = CVec::Zero(S->size());
        std::normal_distribution<double> g;
        for (const auto& e : frame) h += cplx(g(rf.rng()), g(rf.rng())) * e;
        const CVec w = rf.field(1 - k, 0);
        CVec mu = h / S->pointwise_norm(h, 1 - k, 1).maxCoeff() + S->dbar(w, 1 - k, 0);
        I.mu_k(k) = amp * mu / S->pointwise_norm(mu, 1 - k, 1).maxCoeff();
    }
    return I;
}

void ac1(Context& ctx, CriterionResult& r) {
    r.title = "jet bracket axioms";
    r.time_limit = 10.0;
    const double tol = 1e-10;
    auto T = std::make_shared<const FlatTorus>(ctx.profile().torus_n);
    std::mt19937_64 rng(ctx.seed(1));
    const int cap = 4;
    std::vector<JetField> F;
    for (int i = 0; i < ctx.profile().jets; ++i) F.push_back(torus_jet(T, rng, cap, 1, false, 1.0));
    double anti = 0.0, jac = 0.0, leib = 0.0;
    int triples = 0;
    for (size_t i = 0; i < F.size(); ++i) {
        const JetField& A = F[i];
        const JetField& B = F[(i + 1) % F.size()];
        const JetField& C = F[(i + 2) % F.size()];
        const JetField AB = jet_poisson(A, B);
        anti = std::max(anti, rel(jet_max_abs(jet_add(AB, jet_poisson(B, A))), jet_max_abs(AB)));
        const JetField j1 = jet_poisson(A, jet_poisson(B, C));
        const JetField j2 = jet_poisson(B, jet_poisson(C, A));
        const JetField j3 = jet_poisson(C, AB);
        const double js = std::max({jet_max_abs(j1), jet_max_abs(j2), jet_max_abs(j3)});
        jac = std::max(jac, rel(jet_max_abs(jet_add(jet_add(j1, j2), j3)), js));
        const JetField lhs = jet_poisson(A, jet_mul(B, C));
        const JetField rhs = jet_add(jet_mul(AB, C), jet_mul(B, jet_poisson(A, C)));
        leib = std::max(leib, rel(jet_max_abs(jet_add(lhs, jet_scale(rhs, -1.0))), jet_max_abs(lhs)));
        ++triples;
    }
    r.measured = json{{"fields", F.size()}, {"triples", triples}, {"antisymmetry", anti}, {"jacobi", jac}, {"leibniz", leib}};
    r.limits = json{{"relative_residual", tol}};
    r.pass = anti < tol && jac < tol && leib < tol;
}

void ac2(Context& ctx, CriterionResult& r) {
    r.title = "model jet group, exact";
    r.time_limit = 5.0;
    std::mt19937_64 rng(ctx.seed(2));
    bool axioms = true, series = true;
    long checks = 0;
    json per_n = json::array();
    for (int n = 2; n <= 6; ++n) {
        for (int t = 0; t < 30; ++t) {
            const ModelJet f = random_model_jet(n, rng), g = random_model_jet(n, rng), h = random_model_jet(n, rng);
            const ModelJet e = mj_identity(n);
            axioms = axioms && mj_compose(mj_compose(f, g), h) == mj_compose(f, mj_compose(g, h));
            axioms = axioms && mj_compose(f, e) == f && mj_compose(e, f) == f;
            const ModelJet fi = mj_invert(f);
            axioms = axioms && mj_compose(f, fi) == e && mj_compose(fi, f) == e;
            checks += 5;
        }
        const CentralSeriesReport c = mj_central_series(n, ctx.seed(20 + n), 40);
        series = series && c.ok();
        checks += c.checked;
        per_n.push_back(json{{"n", n}, {"central_series_ok", c.ok()}, {"nilpotency_class", c.nilpotency_class}});
    }
    r.measured = json{{"group_axioms", axioms}, {"central_series", series}, {"checks", checks}, {"per_n", per_n}};
    r.limits = json{{"equality", "exact"}};
    r.pass = axioms && series;
}

void ac3(Context& ctx, CriterionResult& r) {
    r.title = "Riemann-Roch dimensions";
    r.time_limit = 120.0;
    SurfacePtr S = ctx.surface();
    const double gap_min = ctx.profile().full ? 1e3 : ctx.profile().min_gap;
    json dims = json::array(), gaps = json::array();
    bool ok = true;
    int total = 0;
    for (int k = 2; k <= 4; ++k) {
        const HoloBasis& B = S->holomorphic_basis(k);
        dims.push_back(B.dim);
        gaps.push_back(B.gap);
        ok = ok && B.dim == 2 * k - 1 && B.gap >= gap_min;
        total += 2 * B.dim;
    }
    r.measured = json{{"nodes", S->size()}, {"dims", dims}, {"gaps", gaps}, {"real_dimension_n4", total}};
    r.limits = json{{"dims", {3, 5, 7}}, {"min_gap", gap_min}, {"real_dimension_n4", 30}};
    r.pass = ok && total == 30;
}

void ac4(Context& ctx, CriterionResult& r) {
    r.title = "Hodge round trips";
    r.time_limit = 60.0;
    const double tol = 1e-8;
    SurfacePtr S = ctx.surface();
    RandomFields rf(S, ctx.seed(4));
    double rec = 0.0, orth = 0.0;
    int count = 0;
    for (int k = 3; k <= 4; ++k)
        for (int i = 0; i < ctx.profile().hodge_inputs; ++i) {
            const TensorField mu{1 - k, 1, rf.field(1 - k, 1)};
            const HodgeSplit h = hodge_decompose(*S, mu, k);
            rec = std::max(rec, h.reconstruction);
            orth = std::max(orth, h.orthogonality);
            ++count;
        }
    r.measured = json{{"inputs", count}, {"reconstruction", rec}, {"orthogonality", orth}};
    r.limits = json{{"reconstruction", tol}, {"orthogonality", tol}};
    r.pass = rec < tol && orth < tol;
}

double tangent_rel_error(const Tangent& a, const Tangent& b) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, max_abs(a[i] - b[i]));
        den = std::max(den, max_abs(b[i]));
    }
    return rel(num, den);
}

void ac5(Context& ctx, CriterionResult& r) {
    r.title = "first-variation consistency";
    SurfacePtr S = ctx.surface();
    RandomFields rf(S, ctx.seed(5));
    const int n = 4;
    HigherStructure I = make_structure(S, n);
    I.mu_k(2) = 0.1 * rf.field(-1, 1);
    I.mu_k(3) = 0.05 * rf.field(-2, 1);
    I.mu_k(4) = 0.05 * rf.field(-3, 1);
    const JetField H = random_hamiltonian(rf, S, n - 1, 1, n - 1, 0.05);
    const Tangent fv = first_variation(I, H);

    FlowOptions fo;
    std::vector<double> eps{0.2, 0.1, 0.05}, err;
    for (double e : eps) {
        const HigherStructure plus = flow_apply(I, HamiltonianJet::autonomous(H, e), fo);
        const HigherStructure minus = flow_apply(I, HamiltonianJet::autonomous(H, -e), fo);
        Tangent fd(n - 1);
        for (int k = 2; k <= n; ++k) fd[k - 2] = (plus.mu_k(k) - minus.mu_k(k)) / (2.0 * e);
        err.push_back(tangent_rel_error(fd, fv));
    }
    std::vector<double> orders;
    for (size_t i = 0; i + 1 < err.size(); ++i) orders.push_back(std::log2(err[i] / err[i + 1]));
    const double min_order = *std::min_element(orders.begin(), orders.end());

    // Maass form against the direct form in natural coordinates.
    HigherStructure J = I;
    J.mu_k(2).setZero();
    const double maass = tangent_rel_error(first_variation_maass(J, H), first_variation(J, H));

    // Bracket route on a base whose derivatives satisfy Leibniz exactly.
    auto T = std::make_shared<const FlatTorus>(ctx.profile().torus_n);
    std::mt19937_64 rng(ctx.seed(50));
    double route = 0.0;
    for (Normalization nm : {Normalization::negative, Normalization::positive}) {
        HigherStructure K = torus_structure(T, rng, n, 0.2);
        K.norm = nm;
        const JetField G = torus_jet(T, rng, n - 1, 1, true, 0.1);
        route = std::max(route, tangent_rel_error(structure_velocity(K, G), first_variation(K, G)));
    }
    // The same comparison on the mesh is limited by the discrete Leibniz error.
    const double route_mesh = tangent_rel_error(structure_velocity(I, H), fv);

    r.measured = json{{"epsilons", eps}, {"fd_errors", err}, {"orders", orders}, {"maass_vs_direct", maass},
                      {"bracket_vs_table_torus", route}, {"bracket_vs_table_mesh", route_mesh}};
    r.limits = json{{"min_order", 1.9}, {"maass_vs_direct", 1e-10}, {"bracket_vs_table_torus", 1e-12}};
    r.pass = min_order >= 1.9 && maass < 1e-10 && route < 1e-12;
}

void ac6(Context& ctx, CriterionResult& r) {
    r.title = "autonomous displacement law";
    SurfacePtr S = ctx.surface();
    RandomFields rf(S, ctx.seed(6));
    const int n = 4;
    const HigherStructure I = mixed_structure(S, rf, n, 0.1);
    double top = 0.0, lower = 0.0;
    json per_k = json::array();
    for (int k = 2; k <= n - 1; ++k) {
        const CVec w = 0.05 * rf.field(-k, 0);
        JetField H(S, n - 1);
        H.at(k, 0) = w;
        H.at(0, k) = w.conjugate();
        const HigherStructure F = flow_apply(I, HamiltonianJet::autonomous(H));
        const CVec expect = I.mu_k(k + 1) + S->dbar(w, -k, 0);
        const double e = rel(max_abs(F.mu_k(k + 1) - expect), max_abs(S->dbar(w, -k, 0)));
        double lo = 0.0;
        for (int j = 2; j <= k; ++j) lo = std::max(lo, max_abs(F.mu_k(j) - I.mu_k(j)));
        top = std::max(top, e);
        lower = std::max(lower, lo);
        per_k.push_back(json{{"k", k}, {"displacement_error", e}, {"lower_change", lo}});
    }
    r.measured = json{{"per_k", per_k}, {"displacement_error", top}, {"lower_change", lower}};
    r.limits = json{{"displacement_error", 1e-7}, {"lower_change", 1e-9}};
    r.pass = top < 1e-7 && lower < 1e-9;
}

void ac7(Context& ctx, CriterionResult& r) {
    r.title = "decomposition uniqueness";
    const double tol = 1e-6;
    auto T = std::make_shared<const FlatTorus>(ctx.profile().torus_n);
    std::mt19937_64 rng(ctx.seed(7));
    const int n = 4;
    std::vector<HigherStructure> tests;
    for (int i = 0; i < 5; ++i) tests.push_back(torus_structure(T, rng, n, 0.2));
    HamiltonianJet H;
    for (double d : {0.5, 0.7, 0.4}) H.pieces.emplace_back(d, torus_jet(T, rng, n - 1, 2, true, 0.1));
    const Decomposition D = decompose_inductive(H, tests, tol);
    std::vector<JetField> parts(D.parts.begin() + 2, D.parts.end());
    const ExponentialResult E = exponential_hamiltonian(parts, tests, tol);

    // Homogeneous autonomous inputs decompose to themselves.
    bool exact = true;
    for (int k = 2; k <= n - 1; ++k) {
        JetField G(T, n - 1);
        const JetField full = torus_jet(T, rng, n - 1, 2, true, 0.1);
        for (int a = 0; a <= k; ++a) G.at(a, k - a) = full.get(a, k - a);
        const Decomposition Dk = decompose_inductive(HamiltonianJet::autonomous(G), {});
        for (int j = 2; j <= n - 1; ++j) {
            const JetField& P = Dk.parts[j];
            if (j == k) {
                for (size_t s = 0; s < P.slices().size(); ++s) exact = exact && (P.slices()[s].array() == G.slices()[s].array()).all();
            } else {
                exact = exact && jet_max_abs(P) == 0.0;
            }
        }
    }
    r.measured = json{{"tests", tests.size()}, {"recompose_error", D.check.max_error},
                      {"exponential_error", E.check.max_error}, {"exponential_iterations", E.iterations},
                      {"homogeneous_exact", exact}};
    r.limits = json{{"action_error", tol}, {"homogeneous", "bit-exact"}};
    r.pass = D.check.max_error < tol && E.check.max_error < tol && exact;
}

void ac8(Context& ctx, CriterionResult& r) {
    r.title = "harmonicization";
    const Profile& p = ctx.profile();
    SurfacePtr S = ctx.surface();
    RandomFields rf(S, ctx.seed(8));
    const HigherStructure I = mixed_structure(S, rf, 3, 0.1);
    const HarmonicResult H = harmonic_representative(I);
    const double norm3 = max_abs(H.rep.mu_k(3));

    const double idem = harmonic_representative(H.rep).displacement;

    double orbit = 0.0, energy_gap = 1e300;
    const double e_rep = energy(H.rep, 3);
    energy_gap = std::min(energy_gap, energy(I, 3) - e_rep);
    for (int s = 0; s < p.orbit_samples; ++s) {
        const HigherStructure P = orbit_perturb(I, ctx.seed(800 + s));
        const HarmonicResult Hs = harmonic_representative(P);
        orbit = std::max(orbit, rel(max_abs(Hs.rep.mu_k(3) - H.rep.mu_k(3)), norm3));
        energy_gap = std::min(energy_gap, energy(P, 3) - e_rep);
    }
    const HarmonicResult Hr = harmonic_representative(isometry_pullback(I, 1));
    const double equiv = rel(max_abs(Hr.rep.mu_k(3) - isometry_pullback(H.rep, 1).mu_k(3)), norm3);

    r.measured = json{{"degree", 3}, {"idempotence", idem}, {"orbit_samples", p.orbit_samples}, {"orbit_max_rel", orbit},
                      {"min_energy_excess", energy_gap}, {"rotation_equivariance", equiv}};
    r.limits = json{{"idempotence", 1e-8}, {"orbit_rel", p.orbit_tol}, {"energy_excess_min", 0.0},
                    {"rotation_equivariance", p.equivariance_tol}};
    r.pass = idem < 1e-8 && orbit < p.orbit_tol && energy_gap >= 0.0 && equiv < p.equivariance_tol;
}

void ac9(Context& ctx, CriterionResult& r) {
    r.title = "degree-3 Hitchin pipeline";
    r.time_limit = 600.0;
    const Profile& p = ctx.profile();
    SurfacePtr S = ctx.surface();
    const HitchinResult F = hitchin_map(make_structure(S, 3));
    const FuchsianCheck& fc = F.hol.fuchsian;
    const bool fuchsian = fc.positive == 2 && fc.negative == 1 && fc.form_residual < 1e-6 && fc.eigen_residual < 1e-6 &&
                          F.hol.relation_defect < 1e-5 && F.hol.max_det_error < 1e-8;

    RandomFields rf(S, ctx.seed(9));
    const HigherStructure I = mixed_structure(S, rf, 3, 0.1);
    const HitchinResult base = hitchin_map(I);
    double trace_diff = 0.0;
    for (int s = 0; s < p.hitchin_samples; ++s) {
        const HitchinResult h = hitchin_map(orbit_perturb(I, ctx.seed(900 + s)));
        for (size_t i = 0; i < h.hol.traces.size(); ++i)
            trace_diff = std::max(trace_diff, rel(std::abs(h.hol.traces[i] - base.hol.traces[i]), std::abs(base.hol.traces[i])));
    }
    r.measured = json{{"zero_phi", json{{"signature", {fc.positive, fc.negative}},
                                        {"form_residual", fc.form_residual},
                                        {"eigen_residual", fc.eigen_residual},
                                        {"relation_defect", F.hol.relation_defect},
                                        {"det_error", F.hol.max_det_error}}},
                      {"nonzero_phi", json{{"pick_sup", base.pick.phi.v.cwiseAbs().maxCoeff()},
                                           {"eigen_residual", base.hol.fuchsian.eigen_residual},
                                           {"orbit_samples", p.hitchin_samples},
                                           {"trace_max_rel", trace_diff}}}};
    r.limits = json{{"form_residual", 1e-6}, {"eigen_residual", 1e-6}, {"relation_defect", 1e-5}, {"det_error", 1e-8},
                    {"trace_rel", p.trace_tol}};
    r.pass = fuchsian && trace_diff < p.trace_tol;
}

void ac10(Context& ctx, CriterionResult& r) {
    r.title = "determinism";
    AcceptanceOptions q;
    q.profile = "quick";
    q.seed = ctx.seed(10);
    q.only = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    const std::string a = acceptance_report(q, run_acceptance(q)).dump();
    const std::string b = acceptance_report(q, run_acceptance(q)).dump();
    r.measured = json{{"profile", q.profile}, {"bytes", a.size()}, {"identical", a == b}};
    r.limits = json{{"identical", true}};
    r.pass = a == b;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_done) {
    Context ctx(make_profile(opt.profile), opt.seed);
    using Fn = void (*)(Context&, CriterionResult&);
    const Fn fns[] = {ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10};
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 10; ++id) {
        if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
        CriterionResult r;
        r.id = id;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            fns[id - 1](ctx, r);
        } catch (const Error& e) {
            r.pass = false;
            r.error = e.code() + ": " + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (on_done) on_done(r);
        out.push_back(std::move(r));
    }
    return out;
}

json acceptance_report(const AcceptanceOptions& opt, const std::vector<CriterionResult>& results) {
    json crit = json::array();
    bool all = true;
    for (const auto& r : results) {
        crit.push_back(r.to_json());
        all = all && r.pass;
    }
    return json{{"profile", opt.profile}, {"seed", opt.seed}, {"all_pass", all}, {"criteria", crit}};
}

}  // namespace hcs
