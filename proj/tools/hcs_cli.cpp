// hcs: command-line front end for the Bolza-surface pipeline.
//
// Exit status: 0 success, 1 module error (error JSON on stdout), 2 bad
// configuration or usage, 3 selftest ran but a criterion failed.

#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "hcs/acceptance.hpp"
#include "hcs/config.hpp"
#include "hcs/decompose.hpp"
#include "hcs/io.hpp"

using namespace hcs;
namespace fs = std::filesystem;

namespace {

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> resolution, degree;
    std::optional<double> tol;
    std::optional<std::string> out;
};

RunConfig resolve(const Flags& f) {
    RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
    if (f.seed) c.seed = *f.seed;
    if (f.resolution) c.resolution = *f.resolution;
    if (f.degree) c.degree = *f.degree;
    if (f.tol) c.tol = *f.tol;
    if (f.out) c.out = *f.out;
    c.validate();
    return c;
}

std::string out_path(const RunConfig& c, const std::string& name) {
    std::error_code ec;
    fs::create_directories(c.out, ec);
    if (ec) throw Error("io.write", "cannot create output directory", json{{"path", c.out}, {"reason", ec.message()}});
    return (fs::path(c.out) / name).string();
}

SurfacePtr surface(const RunConfig& c) { return BolzaSurface::build(c.surface()); }

void emit(const std::string& command, const std::vector<std::string>& files, const json& summary) {
    std::cout << json{{"command", command}, {"files", files}, {"summary", summary}}.dump() << '\n';
}

// mu_2 = 0; mu_k for k >= 3 mixes a harmonic part with a dbar-exact part.
HigherStructure generated_structure(SurfacePtr S, const RunConfig& c, bool with_mu2) {
    RandomFields rf(S, c.seed);
    HigherStructure I = make_structure(S, c.degree, c.normalization);
    if (with_mu2) I.mu_k(2) = 2.0 * c.amplitude * rf.field(-1, 1);
    for (int k = 3; k <= c.degree; ++k) I.mu_k(k) = c.amplitude * (rf.field(1 - k, 1) + S->dbar(rf.field(1 - k, 0), 1 - k, 0));
    return I;
}

HigherStructure input_structure(SurfacePtr S, const RunConfig& c, const std::string& path, bool with_mu2) {
    if (path.empty()) return generated_structure(S, c, with_mu2);
    return structure_from_json(read_document(path, "structure"), S);
}

FlowSpec input_spec(const RunConfig& c, const std::string& path) {
    if (path.empty()) return default_flow_spec(c.degree, c.seed, 2, 3, c.amplitude);
    FlowSpec s = flow_spec_from_json(read_document(path, "flow_spec"));
    if (s.degree != c.degree)
        throw Error("config.degree", "flow spec degree differs from the configured degree",
                    json{{"spec", s.degree}, {"config", c.degree}});
    return s;
}

FlowOptions flow_options(const RunConfig& c) {
    FlowOptions f;
    f.steps_per_unit = c.steps_per_unit;
    return f;
}

int cmd_mesh(const RunConfig& c) {
    const SurfacePtr S = surface(c);
    const std::string p = out_path(c, "mesh.json");
    write_json(p, make_document("mesh", mesh_to_json(*S)));
    emit("mesh", {p}, json{{"nodes", S->size()}, {"triangles", S->mesh().triangles.size()}, {"area", S->area()}});
    return 0;
}

int cmd_basis(const RunConfig& c, int k) {
    if (k < 0) throw Error("config.k", "basis degree must be >= 0", json{{"k", k}});
    const SurfacePtr S = surface(c);
    const HoloBasis& B = S->holomorphic_basis(k);
    const int expected = k == 0 ? 1 : k == 1 ? 2 : 2 * k - 1;
    json basis = json::array();
    for (const auto& q : B.q) basis.push_back(tensor_to_json(TensorField{k, 0, q}));
    const json body{{"k", k}, {"dimension", B.dim}, {"expected", expected}, {"matches_expected", B.dim == expected},
                    {"gap", B.gap}, {"sigma_max", B.sigma_max}, {"cutoff", B.cutoff},
                    {"singular_values", B.singular}, {"basis", basis}};
    const std::string p = out_path(c, "basis_" + std::to_string(k) + ".json");
    write_json(p, make_document("basis", body));
    emit("basis", {p}, json{{"k", k}, {"dimension", B.dim}, {"expected", expected}, {"gap", B.gap}});
    return 0;
}

int cmd_hodge(const RunConfig& c, const std::string& input) {
    const SurfacePtr S = surface(c);
    TensorField mu;
    if (input.empty()) {
        RandomFields rf(S, c.seed);
        const int k = c.degree;
        mu = TensorField{1 - k, 1, rf.field(1 - k, 1)};
    } else {
        mu = tensor_from_json(read_document(input, "tensor"), S->size());
    }
    const int k = 1 - mu.a;
    if (mu.b != 1 || k < 2) throw Error("hodge.type", "input must be a k-Beltrami differential, type (1-k, 1) with k >= 2",
                                        json{{"type", {mu.a, mu.b}}});
    const HodgeSplit h = hodge_decompose(*S, mu, k, c.hodge_tol);
    const json body{{"k", k}, {"reconstruction", h.reconstruction}, {"orthogonality", h.orthogonality},
                    {"harmonic_norm", petersson_norm(*S, h.harmonic.v, k)}, {"input_norm", petersson_norm(*S, mu.v, k)},
                    {"harmonic", tensor_to_json(h.harmonic)}, {"potential", tensor_to_json(h.potential)}};
    const std::string p = out_path(c, "hodge.json");
    write_json(p, make_document("hodge", body));
    emit("hodge", {p}, json{{"k", k}, {"reconstruction", h.reconstruction}, {"orthogonality", h.orthogonality}});
    return 0;
}

int cmd_harmonize(const RunConfig& c, const std::string& input) {
    const SurfacePtr S = surface(c);
    const HigherStructure I = input_structure(S, c, input, false);
    HarmonicOptions o;
    o.tol = c.tol;
    o.hodge_tol = c.hodge_tol;
    o.flow = flow_options(c);
    const HarmonicResult H = harmonic_representative(I, o);
    json body = H.report();
    body["tol"] = c.tol;
    body["displacement_below_tol"] = H.displacement < c.tol;
    body["representative"] = structure_to_json(H.rep);
    const std::string p = out_path(c, "harmonize.json");
    write_json(p, make_document("harmonize", body));
    CsvTable t;
    t.header = {"pass", "max_residual"};
    for (size_t i = 0; i < H.residual_history.size(); ++i) t.rows.push_back({double(i), H.residual_history[i]});
    const std::string pc = out_path(c, "harmonize_residuals.csv");
    write_csv(pc, t);
    emit("harmonize", {p, pc}, json{{"passes", H.passes}, {"displacement", H.displacement},
                                    {"displacement_below_tol", H.displacement < c.tol}});
    return 0;
}

int cmd_flow(const RunConfig& c, const std::string& spec_path, const std::string& input) {
    const SurfacePtr S = surface(c);
    const FlowSpec spec = input_spec(c, spec_path);
    const HamiltonianJet H = realize_flow_spec(spec, S);
    const HigherStructure I = input_structure(S, c, input, true);
    const FlowRecord R = flow_integrate(I, H, flow_options(c));
    json body{{"spec", flow_spec_to_json(spec)}, {"record", R.summary()}, {"final", structure_to_json(R.final)}};
    const std::string p = out_path(c, "flow.json");
    write_json(p, make_document("flow", body));
    const std::string pc = out_path(c, "flow.csv");
    write_csv(pc, flow_csv(R));
    if (R.aborted) throw Error("flow.abort", R.abort_reason, json{{"steps", R.steps}, {"report", p}});
    emit("flow", {p, pc}, json{{"steps", R.steps}, {"distance", structure_distance(I, R.final)}});
    return 0;
}

int cmd_decompose(const RunConfig& c, const std::string& spec_path, int tests) {
    const SurfacePtr S = surface(c);
    const FlowSpec spec = input_spec(c, spec_path);
    const HamiltonianJet H = realize_flow_spec(spec, S);
    std::vector<HigherStructure> I;
    for (int i = 0; i < tests; ++i) {
        RunConfig ci = c;
        ci.seed = c.seed * 7919 + static_cast<std::uint64_t>(i) + 1;
        I.push_back(generated_structure(S, ci, true));
    }
    const Decomposition D = decompose_inductive(H, I, c.action_tol, flow_options(c));
    json parts = json::array();
    for (int k = 2; k < static_cast<int>(D.parts.size()); ++k) {
        json slices = json::array();
        for (int a = 0; a <= k; ++a) slices.push_back(json{{"monomial", {a, k - a}}, {"sup", max_abs(D.parts[k].get(a, k - a))}});
        parts.push_back(json{{"degree", k}, {"sup", jet_max_abs(D.parts[k])}, {"slices", slices}});
    }
    const json body{{"spec", flow_spec_to_json(spec)}, {"tests", tests}, {"action_tol", c.action_tol},
                    {"action_error", D.check.max_error}, {"per_structure", D.check.per_structure}, {"parts", parts}};
    const std::string p = out_path(c, "decompose.json");
    write_json(p, make_document("decompose", body));
    emit("decompose", {p}, json{{"action_error", D.check.max_error}, {"parts", parts.size()}});
    return 0;
}

int cmd_holonomy(const RunConfig& c, const std::string& input, bool zero) {
    if (c.degree != 3) throw Error("config.degree", "the Hitchin pipeline is implemented for degree 3", json{{"degree", c.degree}});
    const SurfacePtr S = surface(c);
    HigherStructure I = zero ? make_structure(S, 3, c.normalization) : input_structure(S, c, input, false);
    HarmonicOptions ho;
    ho.tol = c.tol;
    ho.hodge_tol = c.hodge_tol;
    ho.flow = flow_options(c);
    DevelopOptions dopt;
    dopt.tol = c.develop_tol;
    const HitchinResult R = hitchin_map(I, ho, dopt);
    json body = R.report();
    const std::string p = out_path(c, "holonomy.json");
    write_json(p, make_document("holonomy", body));
    const std::string pc = out_path(c, "traces.csv");
    write_csv(pc, trace_csv(R.hol));
    emit("holonomy", {p, pc}, json{{"Fuchsian", R.hol.fuchsian.fuchsian ? "yes" : "no"},
                                   {"relation_defect", R.hol.relation_defect}});
    return 0;
}

int cmd_selftest(const RunConfig& c) {
    AcceptanceOptions o;
    o.profile = c.profile;
    o.seed = c.seed;
    const auto results = run_acceptance(o, [](const CriterionResult& r) { std::cerr << criterion_line(r) << '\n'; });
    const json report = acceptance_report(o, results);
    const std::string p = out_path(c, "selftest.json");
    write_json(p, make_document("selftest", report));
    emit("selftest", {p}, json{{"all_pass", report["all_pass"]}});
    return report["all_pass"].get<bool>() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Higher complex structures on the Bolza surface"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;
    app.add_option("--config", f.config, "key = value configuration file");
    app.add_option("--seed", f.seed, "random seed");
    app.add_option("--resolution", f.resolution, "mesh refinement level");
    app.add_option("--degree", f.degree, "structure degree n");
    app.add_option("--tol", f.tol, "harmonicity tolerance");
    app.add_option("--out", f.out, "output directory");

    std::string input, spec;
    int k = 2, tests = 3;
    bool zero = false;
    auto* mesh = app.add_subcommand("mesh", "build the Bolza mesh and write mesh.json");
    auto* basis = app.add_subcommand("basis", "holomorphic k-differentials and dimension report");
    basis->add_option("k", k, "differential degree")->required();
    auto* hodge = app.add_subcommand("hodge", "Hodge split of a k-Beltrami differential");
    hodge->add_option("--input", input, "tensor document (default: seeded random, k = degree)");
    auto* harm = app.add_subcommand("harmonize", "harmonic representative of a structure");
    harm->add_option("--input", input, "structure document (default: seeded random)");
    auto* flow = app.add_subcommand("flow", "integrate a Hamiltonian flow spec");
    flow->add_option("--spec", spec, "flow_spec document (default: seeded random)");
    flow->add_option("--input", input, "structure document (default: seeded random)");
    auto* dec = app.add_subcommand("decompose", "inductive coordinates of a flow spec");
    dec->add_option("--spec", spec, "flow_spec document (default: seeded random)");
    dec->add_option("--tests", tests, "number of seeded test structures")->check(CLI::Range(1, 20));
    auto* hol = app.add_subcommand("holonomy", "degree-3 Hitchin pipeline");
    hol->add_option("--input", input, "structure document (default: seeded random)");
    hol->add_flag("--zero", zero, "use the zero cubic differential");
    auto* self = app.add_subcommand("selftest", "run the acceptance suite");
    std::optional<std::string> profile;
    self->add_option("--profile", profile, "full | quick (overrides the config file)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    RunConfig cfg;
    try {
        cfg = resolve(f);
        if (profile) {
            cfg.profile = *profile;
            cfg.validate();
        }
    } catch (const Error& e) {
        std::cout << json{{"error", {{"code", e.code()}, {"message", e.what()}, {"detail", e.detail()}}}}.dump() << '\n';
        return 2;
    }

    try {
        if (*mesh) return cmd_mesh(cfg);
        if (*basis) return cmd_basis(cfg, k);
        if (*hodge) return cmd_hodge(cfg, input);
        if (*harm) return cmd_harmonize(cfg, input);
        if (*flow) return cmd_flow(cfg, spec, input);
        if (*dec) return cmd_decompose(cfg, spec, tests);
        if (*hol) return cmd_holonomy(cfg, input, zero);
        if (*self) return cmd_selftest(cfg);
    } catch (const Error& e) {
        std::cout << json{{"error", {{"code", e.code()}, {"message", e.what()}, {"detail", e.detail()}}}}.dump() << '\n';
        return e.code().rfind("config.", 0) == 0 ? 2 : 1;
    } catch (const std::exception& e) {
        std::cout << json{{"error", {{"code", "internal"}, {"message", e.what()}}}}.dump() << '\n';
        return 1;
    }
    return 2;
}
