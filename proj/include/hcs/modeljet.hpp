#pragma once

// Exact model of the group of n-jets x + a_2 x^2 + ... + a_n x^n under
// composition mod x^{n+1}, with its nilpotent Lie algebra of vector fields
// v(x) d/dx, v = v_2 x^2 + ... + v_n x^n.

#include <boost/multiprecision/gmp.hpp>
#include <cstdint>
#include <string>
#include <vector>

namespace hcs {

using Rational = boost::multiprecision::mpq_rational;

struct ModelJet {
    int n = 2;
    // coef[k] is the x^k coefficient, k = 0..n; coef[0] = 0 and coef[1] = 1.
    std::vector<Rational> coef;

    Rational a(int k) const { return coef.at(k); }
    bool operator==(const ModelJet& o) const { return n == o.n && coef == o.coef; }
};

struct ModelVec {
    int n = 2;
    // v[k] for k = 0..n; v[0] = v[1] = 0.
    std::vector<Rational> v;

    bool operator==(const ModelVec& o) const { return n == o.n && v == o.v; }
};

ModelJet mj_identity(int n);
ModelJet mj_make(int n, const std::vector<Rational>& a2_to_n);
ModelVec mv_make(int n, const std::vector<Rational>& v2_to_n);

// f o g truncated at degree n.
ModelJet mj_compose(const ModelJet& f, const ModelJet& g);
ModelJet mj_invert(const ModelJet& f);
ModelJet mj_commutator(const ModelJet& f, const ModelJet& g);
// Lowest k >= 2 with a nonzero x^k coefficient; n+1 for the identity.
int mj_order(const ModelJet& f);

// Time-one flow of v(x) d/dx as the terminating Lie series sum_m L_v^m(x)/m!.
ModelJet mj_exp(const ModelVec& v);
ModelVec mj_log(const ModelJet& f);

struct CentralSeriesReport {
    int n = 0;
    long checked = 0;
    bool commutators_descend = true;   // [N, N^k] in N^{k+1}
    bool factors_additive = true;      // degree-k coefficient adds on N^k
    bool fixes_lower = true;           // N^k products fix degree < k
    bool top_trivial = true;           // N^{n+1} = {x}, and N^n is central
    bool chain_strict = true;          // N^2 > N^3 > ... > N^n, n-2 strict steps
    bool exp_log_inverse = true;
    int strict_steps = 0;
    int nilpotency_class = 0;
    std::vector<std::string> counterexamples;

    bool ok() const {
        return commutators_descend && factors_additive && fixes_lower && top_trivial &&
               chain_strict && exp_log_inverse;
    }
};

// Exhaustive over a small rational grid for the sparse sample, randomized
// (seeded) beyond it.
CentralSeriesReport mj_central_series(int n, std::uint64_t seed = 1, int random_samples = 200);

}  // namespace hcs
