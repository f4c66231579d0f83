#pragma once

// Inductive and exponential coordinates of 2-stationary flows. Flow
// composition is carried at jet level by the Baker-Campbell-Hausdorff series;
// with every piece of degree >= 2, nested brackets of m+1 terms have degree
// >= m+2, so the series through fourth order is exact for jets of degree <= 5.

#include <vector>

#include "hcs/flows.hpp"

namespace hcs {

// BCH(X, Y) = X + Y + [X,Y]/2 + ([X,[X,Y]] + [Y,[Y,X]])/12 - [Y,[X,[X,Y]]]/24
// with [F,G] = {F,G}.
JetField bch(const JetField& X, const JetField& Y);

// Exponent of the composite time-one map: the flow "first A, then B" has
// exponent bch(B, A).
JetField sequential_exponent(const HamiltonianJet& H);
HamiltonianJet sequential_flow(const std::vector<JetField>& parts);

struct ActionCheck {
    double max_error = 0.0;
    std::vector<double> per_structure;
};
// Max over test structures of the distance between the two flows' results.
ActionCheck compare_actions(const HamiltonianJet& A, const HamiltonianJet& B, const std::vector<HigherStructure>& tests,
                            const FlowOptions& opt = {});

struct Decomposition {
    // parts[k] is H^k for k = 2..cap (entries 0 and 1 are empty jets).
    std::vector<JetField> parts;
    ActionCheck check;
};

Decomposition decompose_inductive(const HamiltonianJet& H, const std::vector<HigherStructure>& tests, double tol = 1e-6,
                                  const FlowOptions& opt = {});

struct ExponentialResult {
    JetField G;
    int iterations = 0;
    ActionCheck check;
};

ExponentialResult exponential_hamiltonian(const std::vector<JetField>& parts, const std::vector<HigherStructure>& tests,
                                          double tol = 1e-6, int max_iter = 20, const FlowOptions& opt = {});

}  // namespace hcs
