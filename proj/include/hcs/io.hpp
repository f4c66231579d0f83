#pragma once

// Persistence: JSON documents with a leading schema_version, CSV tables for
// plotting. Doubles are written in shortest round-trip form and keys keep
// insertion order, so identical inputs give byte-identical files.

#include <string>
#include <vector>

#include "hcs/affine_sphere.hpp"
#include "hcs/flows.hpp"
#include "hcs/surface.hpp"

namespace hcs {

inline constexpr int kSchemaVersion = 1;

// {"schema_version": 1, "kind": kind} followed by the entries of body.
json make_document(const std::string& kind, const json& body);
void write_json(const std::string& path, const json& doc);
json read_json(const std::string& path);
// Reads a document and checks its kind and schema version.
json read_document(const std::string& path, const std::string& kind);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
void write_csv(const std::string& path, const CsvTable& t);
std::string csv_string(const CsvTable& t);

json complex_array(const CVec& v);
CVec complex_from_json(const json& j, Eigen::Index expected_size);

json tensor_to_json(const TensorField& t);
TensorField tensor_from_json(const json& j, Eigen::Index expected_size);

json structure_to_json(const HigherStructure& I);
HigherStructure structure_from_json(const json& j, BasePtr base);

json mesh_to_json(const BolzaSurface& S);

// Flow specification: ordered pieces of {duration, terms}; a term names a
// monomial p^a pbar^b and either explicit coefficients ("re"/"im") or a
// random amplitude. With "real": true the conjugate monomial is added.
struct FlowSpec {
    int degree = 3;  // structure degree n; jets are capped at n-1
    bool real = true;
    std::uint64_t seed = 1;
    json pieces = json::array();
};
FlowSpec flow_spec_from_json(const json& j);
json flow_spec_to_json(const FlowSpec& s);
// Random terms are drawn from RandomFields(S, spec.seed) in document order.
HamiltonianJet realize_flow_spec(const FlowSpec& spec, SurfacePtr S);
// Seeded default: `pieces` pieces of duration 0.5 with every real monomial of
// degrees lo..n-1 at the given amplitude.
FlowSpec default_flow_spec(int n, std::uint64_t seed, int lo, int pieces, double amplitude);

// One row per integration step: step, time, sup |mu_k| for k = 2..n.
CsvTable flow_csv(const FlowRecord& r);
// One row per holonomy trace: index, trace value.
CsvTable trace_csv(const Holonomy& h);

}  // namespace hcs
