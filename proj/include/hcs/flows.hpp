#pragma once

// Hamiltonian flows on the coefficients of n-complex structures.
//
// Two independent routes to the velocity of mu_2..mu_n:
//  - first_variation: the closed-form table, superposed over the normal form
//    w_1..w_{n-1} of H mod I. The RK4 integrator uses this one.
//  - structure_velocity: the normal form of {H, g} mod I, where g is the
//    normalized generator.
// They agree exactly when the base differentiates products exactly; on the
// meshed surface they differ by the discrete Leibniz error.

#include <string>
#include <utility>
#include <vector>

#include "hcs/jets.hpp"

namespace hcs {

// mu-dot indexed like HigherStructure::mu (entry k-2 for mu_k).
using Tangent = std::vector<CVec>;

struct HamiltonianJet {
    // Piecewise constant in time; pieces run in order.
    std::vector<std::pair<double, JetField>> pieces;

    static HamiltonianJet autonomous(const JetField& H, double duration = 1.0);
    bool is_real(double tol = 1e-12) const;
    // Smallest total degree present in any piece (cap+1 when all pieces vanish).
    int min_degree(double tol = 0.0) const;
    double total_time() const;
    HamiltonianJet reversed() const;
};

struct FlowRecord {
    HigherStructure initial, final;
    int steps = 0;
    std::vector<double> times;
    // Per recorded step: sup |mu_k| for k = 2..n.
    std::vector<std::vector<double>> sup_mu;
    bool aborted = false;
    std::string abort_reason;

    json summary() const;
};

struct FlowOptions {
    int steps_per_unit = 64;
    // Abort once sup |mu_2| reaches 1 - margin.
    double margin = 1e-3;
    // When > 0, double the step count until the final state moves less than this.
    double adaptive_tol = 0.0;
    int max_doublings = 6;
};

Tangent first_variation(const HigherStructure& I, const JetField& H);
// Maass-derivative form, negative normalization and mu_2 = 0 only.
Tangent first_variation_maass(const HigherStructure& I, const JetField& H);
Tangent structure_velocity(const HigherStructure& I, const JetField& H);

FlowRecord flow_integrate(const HigherStructure& I, const HamiltonianJet& H, const FlowOptions& opt = {});
// Final structure, throwing flow.abort if the flow left the admissible set.
HigherStructure flow_apply(const HigherStructure& I, const HamiltonianJet& H, const FlowOptions& opt = {});

double tangent_max_abs(const Tangent& t);
double structure_distance(const HigherStructure& a, const HigherStructure& b);

}  // namespace hcs
