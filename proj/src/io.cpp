#include "hcs/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hcs {

json make_document(const std::string& kind, const json& body) {
    json d;
    d["schema_version"] = kSchemaVersion;
    d["kind"] = kind;
    for (auto it = body.begin(); it != body.end(); ++it) d[it.key()] = it.value();
    return d;
}

void write_json(const std::string& path, const json& doc) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("io.write", "cannot open output file", json{{"path", path}});
    f << doc.dump(2) << '\n';
    if (!f) throw Error("io.write", "write failed", json{{"path", path}});
}

json read_json(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("io.read", "cannot open input file", json{{"path", path}});
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw Error("io.parse", "malformed JSON", json{{"path", path}, {"reason", e.what()}});
    }
}

json read_document(const std::string& path, const std::string& kind) {
    json d = read_json(path);
    if (!d.is_object() || !d.contains("schema_version") || !d["schema_version"].is_number_integer())
        throw Error("io.schema", "document has no schema_version", json{{"path", path}});
    if (d["schema_version"].get<int>() != kSchemaVersion)
        throw Error("io.schema", "unsupported schema version",
                    json{{"path", path}, {"found", d["schema_version"]}, {"supported", kSchemaVersion}});
    if (d.value("kind", std::string()) != kind)
        throw Error("io.kind", "unexpected document kind", json{{"path", path}, {"expected", kind}, {"found", d.value("kind", "")}});
    return d;
}

std::string csv_string(const CsvTable& t) {
    std::ostringstream s;
    for (size_t i = 0; i < t.header.size(); ++i) s << (i ? "," : "") << t.header[i];
    s << '\n';
    // json's number formatting is the shortest round-trip form.
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << json(row[i]).dump();
        s << '\n';
    }
    return s.str();
}

void write_csv(const std::string& path, const CsvTable& t) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("io.write", "cannot open output file", json{{"path", path}});
    f << csv_string(t);
    if (!f) throw Error("io.write", "write failed", json{{"path", path}});
}

json complex_array(const CVec& v) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        re.push_back(v[i].real());
        im.push_back(v[i].imag());
    }
    return json{{"re", re}, {"im", im}};
}

CVec complex_from_json(const json& j, Eigen::Index expected_size) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im") || !j["re"].is_array() || !j["im"].is_array())
        throw Error("io.field", "complex field needs 're' and 'im' arrays");
    const auto& re = j["re"];
    const auto& im = j["im"];
    if (re.size() != im.size() || static_cast<Eigen::Index>(re.size()) != expected_size)
        throw Error("io.field", "field size does not match the mesh",
                    json{{"re", re.size()}, {"im", im.size()}, {"expected", expected_size}});
    CVec v(expected_size);
    for (Eigen::Index i = 0; i < expected_size; ++i) {
        if (!re[i].is_number() || !im[i].is_number()) throw Error("io.field", "non-numeric field entry", json{{"index", i}});
        v[i] = cplx(re[i].get<double>(), im[i].get<double>());
    }
    return v;
}

json tensor_to_json(const TensorField& t) {
    json j{{"type", {t.a, t.b}}, {"size", t.v.size()}};
    const json c = complex_array(t.v);
    j["re"] = c["re"];
    j["im"] = c["im"];
    return j;
}

TensorField tensor_from_json(const json& j, Eigen::Index expected_size) {
    if (!j.contains("type") || !j["type"].is_array() || j["type"].size() != 2)
        throw Error("io.field", "tensor needs a 'type' pair [a, b]");
    TensorField t;
    t.a = j["type"][0].get<int>();
    t.b = j["type"][1].get<int>();
    t.v = complex_from_json(j, expected_size);
    return t;
}

json structure_to_json(const HigherStructure& I) {
    json mu = json::array();
    for (int k = 2; k <= I.n; ++k) mu.push_back(tensor_to_json(TensorField{1 - k, 1, I.mu_k(k)}));
    return json{{"n", I.n}, {"normalization", to_string(I.norm)}, {"base", I.base ? I.base->kind() : ""}, {"mu", mu}};
}

HigherStructure structure_from_json(const json& j, BasePtr base) {
    if (!j.contains("n") || !j.contains("mu") || !j["mu"].is_array()) throw Error("io.structure", "structure needs 'n' and 'mu'");
    const int n = j["n"].get<int>();
    HigherStructure I = make_structure(base, n, normalization_from_string(j.value("normalization", std::string("negative"))));
    if (static_cast<int>(j["mu"].size()) != n - 1) throw Error("io.structure", "expected n-1 mu entries", json{{"n", n}});
    for (int k = 2; k <= n; ++k) {
        const TensorField t = tensor_from_json(j["mu"][k - 2], base->size());
        if (t.a != 1 - k || t.b != 1) throw Error("io.structure", "mu_k must have type (1-k, 1)", json{{"k", k}});
        I.mu_k(k) = t.v;
    }
    check_structure(I);
    return I;
}

json mesh_to_json(const BolzaSurface& S) {
    const SurfaceMesh& M = S.mesh();
    json verts = json::array(), tris = json::array();
    for (const auto& v : M.vertices) verts.push_back({v.real(), v.imag()});
    for (const auto& t : M.triangles) tris.push_back({t[0], t[1], t[2]});
    json nodes = json::array();
    for (Eigen::Index i = 0; i < S.size(); ++i)
        nodes.push_back(json{{"z", {S.points()[i].real(), S.points()[i].imag()}},
                             {"lambda", S.lambda()[i]},
                             {"weight", S.weights()[i]}});
    return json{{"options", S.options().to_json()},
                {"area", S.area()},
                {"vertices", verts},
                {"triangles", tris},
                {"owner", M.owner},
                {"pairing", M.pairing},
                {"node_of_vertex", M.node_of_vertex},
                {"nodes", nodes}};
}

FlowSpec flow_spec_from_json(const json& j) {
    FlowSpec s;
    s.degree = j.value("degree", 3);
    s.real = j.value("real", true);
    s.seed = j.value("seed", std::uint64_t{1});
    if (!j.contains("pieces") || !j["pieces"].is_array() || j["pieces"].empty())
        throw Error("io.flow_spec", "flow spec needs a non-empty 'pieces' array");
    for (const auto& p : j["pieces"]) {
        if (!p.contains("duration") || !p["duration"].is_number()) throw Error("io.flow_spec", "piece needs a numeric 'duration'");
        if (!p.contains("terms") || !p["terms"].is_array()) throw Error("io.flow_spec", "piece needs a 'terms' array");
        for (const auto& t : p["terms"])
            if (!t.contains("monomial") || !t["monomial"].is_array() || t["monomial"].size() != 2)
                throw Error("io.flow_spec", "term needs 'monomial': [a, b]");
    }
    s.pieces = j["pieces"];
    return s;
}

json flow_spec_to_json(const FlowSpec& s) {
    return json{{"degree", s.degree}, {"real", s.real}, {"seed", s.seed}, {"pieces", s.pieces}};
}

HamiltonianJet realize_flow_spec(const FlowSpec& spec, SurfacePtr S) {
    if (spec.degree < 2 || spec.degree > 6) throw Error("io.flow_spec", "degree must be in 2..6", json{{"degree", spec.degree}});
    const int cap = std::max(1, spec.degree - 1);
    RandomFields rf(S, spec.seed);
    HamiltonianJet H;
    for (const auto& p : spec.pieces) {
        JetField G(S, cap);
        for (const auto& t : p["terms"]) {
            const int a = t["monomial"][0].get<int>(), b = t["monomial"][1].get<int>();
            if (a < 0 || b < 0 || a + b < 1 || a + b > cap)
                throw Error("io.flow_spec", "monomial outside degrees 1..n-1", json{{"monomial", {a, b}}, {"cap", cap}});
            CVec c;
            if (t.contains("re")) {
                c = complex_from_json(t, S->size());
            } else {
                const double amp = t.value("random", 0.05);
                c = amp * ((spec.real && a == b) ? rf.function() : rf.field(-a, -b));
            }
            if (spec.real && a == b) c = c.real().cast<cplx>();
            G.at(a, b) += c;
            if (spec.real && a != b) G.at(b, a) += c.conjugate();
        }
        H.pieces.emplace_back(p["duration"].get<double>(), G);
    }
    return H;
}

FlowSpec default_flow_spec(int n, std::uint64_t seed, int lo, int pieces, double amplitude) {
    FlowSpec s;
    s.degree = n;
    s.seed = seed;
    for (int i = 0; i < pieces; ++i) {
        json terms = json::array();
        for (int d = lo; d <= n - 1; ++d)
            for (int a = d; 2 * a >= d; --a) terms.push_back(json{{"monomial", {a, d - a}}, {"random", amplitude}});
        s.pieces.push_back(json{{"duration", 0.5}, {"terms", terms}});
    }
    return s;
}

CsvTable flow_csv(const FlowRecord& r) {
    CsvTable t;
    t.header = {"step", "time"};
    for (int k = 2; k <= r.initial.n; ++k) t.header.push_back("sup_mu" + std::to_string(k));
    for (size_t i = 1; i < r.times.size(); ++i) {
        std::vector<double> row{double(i), r.times[i]};
        row.insert(row.end(), r.sup_mu[i].begin(), r.sup_mu[i].end());
        t.rows.push_back(std::move(row));
    }
    return t;
}

CsvTable trace_csv(const Holonomy& h) {
    CsvTable t;
    t.header = {"index", "trace"};
    for (size_t i = 0; i < h.traces.size(); ++i) t.rows.push_back({double(i), h.traces[i]});
    return t;
}

}  // namespace hcs
