#include "hcs/decompose.hpp"

#include <algorithm>

namespace hcs {

JetField bch(const JetField& X, const JetField& Y) {
    const JetField XY = jet_poisson(X, Y);
    const JetField XXY = jet_poisson(X, XY);
    const JetField YYX = jet_poisson(Y, jet_scale(XY, -1.0));
    const JetField YXXY = jet_poisson(Y, XXY);
    JetField r = jet_add(X, Y);
    r = jet_add(r, jet_scale(XY, 0.5));
    r = jet_add(r, jet_scale(jet_add(XXY, YYX), 1.0 / 12.0));
    r = jet_add(r, jet_scale(YXXY, -1.0 / 24.0));
    return r;
}

JetField sequential_exponent(const HamiltonianJet& H) {
    if (H.pieces.empty()) throw Error("decompose.empty", "flow has no pieces");
    JetField Z = jet_scale(H.pieces[0].second, H.pieces[0].first);
    for (size_t i = 1; i < H.pieces.size(); ++i) Z = bch(jet_scale(H.pieces[i].second, H.pieces[i].first), Z);
    return Z;
}

HamiltonianJet sequential_flow(const std::vector<JetField>& parts) {
    HamiltonianJet h;
    for (const auto& p : parts)
        if (p.cap() > 0 && jet_max_abs(p) > 0.0) h.pieces.emplace_back(1.0, p);
    return h;
}

ActionCheck compare_actions(const HamiltonianJet& A, const HamiltonianJet& B, const std::vector<HigherStructure>& tests,
                            const FlowOptions& opt) {
    ActionCheck c;
    for (const auto& I : tests) {
        const HigherStructure a = A.pieces.empty() ? I : flow_apply(I, A, opt);
        const HigherStructure b = B.pieces.empty() ? I : flow_apply(I, B, opt);
        const double e = structure_distance(a, b);
        c.per_structure.push_back(e);
        c.max_error = std::max(c.max_error, e);
    }
    return c;
}

Decomposition decompose_inductive(const HamiltonianJet& H, const std::vector<HigherStructure>& tests, double tol,
                                  const FlowOptions& opt) {
    if (H.pieces.empty()) throw Error("decompose.empty", "flow has no pieces");
    for (const auto& [t, P] : H.pieces)
        if (jet_max_abs(jet_degree_part(P, 1)) != 0.0)
            throw Error("decompose.stationarity", "flow pieces must have vanishing degree-1 part");
    const int cap = H.pieces[0].second.cap();
    const BasePtr& base = H.pieces[0].second.base();

    Decomposition d;
    d.parts.assign(cap + 1, JetField(base, cap));
    JetField Z = sequential_exponent(H);
    for (int k = 2; k <= cap; ++k) {
        d.parts[k] = jet_degree_part(Z, k);
        // Residual after peeling off the first factor: Z = bch(R, H^k). An
        // exhausted exponent stops here so homogeneous inputs come back bit-exact.
        if (jet_max_abs(jet_add(Z, jet_scale(d.parts[k], -1.0))) == 0.0) {
            Z = JetField(base, cap);
            break;
        }
        Z = bch(Z, jet_scale(d.parts[k], -1.0));
    }
    const double resid = jet_max_abs(Z);
    const double scale = std::max(1e-300, jet_max_abs(sequential_exponent(H)));
    if (resid > 1e-10 * scale)
        throw Error("decompose.residual", "exponent not exhausted by the homogeneous factors", json{{"residual", resid}});

    if (!tests.empty()) {
        std::vector<JetField> seq(d.parts.begin() + 2, d.parts.end());
        d.check = compare_actions(H, sequential_flow(seq), tests, opt);
        if (!(d.check.max_error < tol))
            throw Error("decompose.action", "recomposed flow does not reproduce the action on the test structures",
                        json{{"max_error", d.check.max_error}, {"tol", tol}});
    }
    return d;
}

ExponentialResult exponential_hamiltonian(const std::vector<JetField>& parts, const std::vector<HigherStructure>& tests,
                                          double tol, int max_iter, const FlowOptions& opt) {
    std::vector<JetField> nz;
    for (const auto& p : parts)
        if (p.cap() > 0 && jet_max_abs(p) > 0.0) nz.push_back(p);
    if (parts.empty()) throw Error("decompose.empty", "no parts");
    ExponentialResult r{JetField(parts.back().base(), parts.back().cap()), 0, {}};
    if (nz.empty()) return r;
    const int cap = nz[0].cap();
    const JetField Zseq = sequential_exponent(sequential_flow(nz));
    const double scale = jet_max_abs(Zseq);

    // Degree-by-degree correction: G picks up the lowest surviving degree of
    // the mismatch log(exp(Zseq) exp(-G)) until it vanishes.
    JetField G(nz[0].base(), cap);
    bool converged = false;
    for (int it = 1; it <= max_iter; ++it) {
        r.iterations = it;
        const JetField M = bch(Zseq, jet_scale(G, -1.0));
        if (jet_max_abs(M) <= 1e-13 * std::max(scale, 1e-300)) {
            converged = true;
            break;
        }
        for (int k = 2; k <= cap; ++k) {
            const JetField part = jet_degree_part(M, k);
            if (jet_max_abs(part) > 1e-13 * std::max(scale, 1e-300)) {
                G = jet_add(G, part);
                break;
            }
        }
    }
    if (!converged) throw Error("decompose.fixed_point", "exponential coordinates did not converge", json{{"iterations", r.iterations}});
    r.G = G;
    if (!tests.empty()) {
        r.check = compare_actions(HamiltonianJet::autonomous(G), sequential_flow(nz), tests, opt);
        if (!(r.check.max_error < tol))
            throw Error("decompose.action", "exponential Hamiltonian does not reproduce the sequential flow",
                        json{{"max_error", r.check.max_error}, {"tol", tol}});
    }
    return r;
}

}  // namespace hcs
