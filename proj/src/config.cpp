#include "hcs/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace hcs {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

long long parse_int(const std::string& key, const std::string& v) {
    long long x = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
        throw Error("config.value", "expected an integer", json{{"key", key}, {"value", v}});
    return x;
}

double parse_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
        throw Error("config.value", "expected a number", json{{"key", key}, {"value", v}});
    return x;
}

}  // namespace

SurfaceOptions RunConfig::surface() const {
    SurfaceOptions o;
    o.resolution = resolution;
    o.poly_degree = poly_degree;
    o.stencil = stencil;
    o.kernel_cutoff = kernel_cutoff;
    o.min_gap = min_gap;
    return o;
}

void RunConfig::validate() const {
    auto bad = [](const std::string& key, const json& v, const std::string& why) {
        throw Error("config.range", why, json{{"key", key}, {"value", v}});
    };
    if (degree < 2 || degree > 6) bad("degree", degree, "structure degree must be in 2..6");
    if (resolution < 1 || resolution > 6) bad("resolution", resolution, "resolution must be in 1..6");
    for (auto [k, v] : {std::pair{"tol", tol}, {"hodge_tol", hodge_tol}, {"develop_tol", develop_tol},
                        {"action_tol", action_tol}, {"kernel_cutoff", kernel_cutoff}, {"min_gap", min_gap}})
        if (!(v > 0.0)) bad(k, v, "tolerances must be positive");
    if (!(amplitude >= 0.0)) bad("amplitude", amplitude, "amplitude must be non-negative");
    if (steps_per_unit < 1) bad("steps_per_unit", steps_per_unit, "steps_per_unit must be >= 1");
    if (poly_degree < 2) bad("poly_degree", poly_degree, "poly_degree must be >= 2");
    if (stencil <= (poly_degree + 1) * (poly_degree + 2) / 2) bad("stencil", stencil, "stencil must exceed the number of fit monomials");
    if (profile != "full" && profile != "quick") bad("profile", profile, "profile must be 'full' or 'quick'");
    if (out.empty()) bad("out", out, "output directory must be non-empty");
}

json RunConfig::to_json() const {
    return json{{"resolution", resolution},   {"degree", degree},
                {"normalization", to_string(normalization)},
                {"seed", seed},               {"tol", tol},
                {"hodge_tol", hodge_tol},     {"develop_tol", develop_tol},
                {"action_tol", action_tol},
                {"kernel_cutoff", kernel_cutoff}, {"min_gap", min_gap},
                {"poly_degree", poly_degree}, {"stencil", stencil},
                {"steps_per_unit", steps_per_unit}, {"amplitude", amplitude},
                {"profile", profile}};
}

std::map<std::string, std::string> parse_key_values(const std::string& text, const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config.syntax", "expected 'key = value'", json{{"file", origin}, {"line", lineno}});
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw Error("config.syntax", "empty key or value", json{{"file", origin}, {"line", lineno}});
        if (!kv.emplace(key, value).second)
            throw Error("config.duplicate", "key given twice", json{{"file", origin}, {"line", lineno}, {"key", key}});
    }
    return kv;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& v) {
    if (key == "resolution") c.resolution = static_cast<int>(parse_int(key, v));
    else if (key == "degree") c.degree = static_cast<int>(parse_int(key, v));
    else if (key == "normalization") {
        if (v != "negative" && v != "positive")
            throw Error("config.value", "normalization must be 'negative' or 'positive'", json{{"value", v}});
        c.normalization = normalization_from_string(v);
    } else if (key == "seed") {
        const long long s = parse_int(key, v);
        if (s < 0) throw Error("config.value", "seed must be non-negative", json{{"value", v}});
        c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "tol") c.tol = parse_double(key, v);
    else if (key == "hodge_tol") c.hodge_tol = parse_double(key, v);
    else if (key == "develop_tol") c.develop_tol = parse_double(key, v);
    else if (key == "action_tol") c.action_tol = parse_double(key, v);
    else if (key == "kernel_cutoff") c.kernel_cutoff = parse_double(key, v);
    else if (key == "min_gap") c.min_gap = parse_double(key, v);
    else if (key == "poly_degree") c.poly_degree = static_cast<int>(parse_int(key, v));
    else if (key == "stencil") c.stencil = static_cast<int>(parse_int(key, v));
    else if (key == "steps_per_unit") c.steps_per_unit = static_cast<int>(parse_int(key, v));
    else if (key == "amplitude") c.amplitude = parse_double(key, v);
    else if (key == "profile") c.profile = v;
    else if (key == "out") c.out = v;
    else throw Error("config.unknown_key", "unknown configuration key", json{{"key", key}});
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("config.read", "cannot open config file", json{{"path", path}});
    std::stringstream ss;
    ss << f.rdbuf();
    auto kv = parse_key_values(ss.str(), path);
    auto it = kv.find("schema_version");
    if (it == kv.end()) throw Error("config.schema", "config file lacks schema_version", json{{"path", path}});
    if (parse_int("schema_version", it->second) != kConfigSchemaVersion)
        throw Error("config.schema", "unsupported config schema_version",
                    json{{"path", path}, {"found", it->second}, {"supported", kConfigSchemaVersion}});
    kv.erase(it);
    RunConfig c;
    for (const auto& [k, v] : kv) apply_setting(c, k, v);
    return c;
}

}  // namespace hcs
