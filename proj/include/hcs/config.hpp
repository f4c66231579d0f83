#pragma once

// Run configuration: a key = value text file with a mandatory schema_version
// key, overridden by command-line flags. Every problem is reported as an
// Error whose code starts with "config.", which the CLI maps to exit status 2.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "hcs/jets.hpp"
#include "hcs/surface.hpp"

namespace hcs {

inline constexpr int kConfigSchemaVersion = 1;

struct RunConfig {
    int resolution = 4;
    int degree = 3;  // structure degree n
    Normalization normalization = Normalization::negative;
    std::uint64_t seed = 1;
    double tol = 1e-7;          // harmonicity / action tolerance
    double hodge_tol = 1e-8;
    double develop_tol = 1e-8;
    // Sup-norm action mismatch allowed when recomposing a flow on the mesh;
    // the discrete Leibniz error grows with the square of the amplitude.
    double action_tol = 1e-4;
    double kernel_cutoff = 1e-6;
    double min_gap = 1e3;
    int poly_degree = 8;
    int stencil = 80;
    int steps_per_unit = 64;
    double amplitude = 0.05;    // random fields for generated inputs
    std::string profile = "full";  // selftest: full | quick
    std::string out = ".";

    SurfaceOptions surface() const;
    void validate() const;
    json to_json() const;
};

// Parses "key = value" lines; '#' starts a comment. Duplicate or unknown keys,
// malformed values and a missing or unsupported schema_version are errors.
std::map<std::string, std::string> parse_key_values(const std::string& text, const std::string& origin);
void apply_setting(RunConfig& c, const std::string& key, const std::string& value);
RunConfig load_config(const std::string& path);

}  // namespace hcs
