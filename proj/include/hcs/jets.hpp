#pragma once

// Truncated jets of functions on the cotangent bundle that vanish on the zero
// section, written in the complex fibre coordinates p, pbar. A jet field stores
// one coefficient slice per monomial p^a pbar^b; the slice is a section of type
// (-a,-b).

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "hcs/common.hpp"

namespace hcs {

// Monomials with 1 <= a+b <= D are ordered by degree, then by decreasing a.
constexpr int jet_count(int D) { return D * (D + 3) / 2; }
constexpr int jet_index(int a, int b) {
    const int d = a + b;
    return (d - 1) * (d + 2) / 2 + (d - a);
}
std::pair<int, int> jet_monomial(int idx);

class JetPoly {
public:
    explicit JetPoly(int degree_cap);

    int cap() const { return cap_; }
    cplx get(int a, int b) const;
    void set(int a, int b, cplx v);
    void add(int a, int b, cplx v);
    const std::vector<cplx>& coeffs() const { return c_; }
    std::vector<cplx>& coeffs() { return c_; }

    static JetPoly monomial(int cap, int a, int b, cplx coeff = 1.0);

private:
    int cap_;
    std::vector<cplx> c_;
};

JetPoly jet_mul(const JetPoly& f, const JetPoly& g);
JetPoly jet_add(const JetPoly& f, const JetPoly& g);
JetPoly jet_scale(const JetPoly& f, cplx s);
JetPoly jet_conj(const JetPoly& f);
// Lowest total degree with a nonzero coefficient; cap+1 for the zero jet.
int jet_order(const JetPoly& f, double tol = 0.0);

// A sampled base on which coefficient slices live: either the Bolza surface
// (type-aware differentiation through the automorphy factors) or a planar
// disk chart (plain coordinate derivatives).
class Base {
public:
    virtual ~Base() = default;
    virtual Eigen::Index size() const = 0;
    // Chart coordinates of the samples.
    virtual const CVec& points() const = 0;
    // Coordinate derivatives of the coefficient of a type (a,b) section.
    virtual CVec d(const CVec& v, int a, int b) const = 0;
    virtual CVec dbar(const CVec& v, int a, int b) const = 0;
    virtual std::string kind() const = 0;
};
using BasePtr = std::shared_ptr<const Base>;

class JetField {
public:
    JetField(BasePtr base, int degree_cap);

    const BasePtr& base() const { return base_; }
    int cap() const { return cap_; }
    Eigen::Index size() const { return base_->size(); }

    const CVec& get(int a, int b) const { return s_.at(jet_index(a, b)); }
    CVec& at(int a, int b) { return s_.at(jet_index(a, b)); }
    const std::vector<CVec>& slices() const { return s_; }
    std::vector<CVec>& slices() { return s_; }

    JetPoly at_point(Eigen::Index i) const;
    bool is_zero(double tol = 0.0) const;

private:
    BasePtr base_;
    int cap_;
    std::vector<CVec> s_;
};

JetField jet_add(const JetField& f, const JetField& g);
JetField jet_scale(const JetField& f, cplx s);
JetField jet_mul(const JetField& f, const JetField& g);
JetField jet_conj(const JetField& f);
// Homogeneous part of total degree k.
JetField jet_degree_part(const JetField& f, int k);
// Copy with a different degree cap (dropping or zero-padding).
JetField jet_recap(const JetField& f, int cap);
double jet_max_abs(const JetField& f);

// Poisson bracket expanded monomial by monomial:
// {w p^k pbar^l, a p^m pbar^n} = m a dw p^{k+m-1} pbar^{l+n} + n a dbar(w) p^{k+m} pbar^{l+n-1}
//                               - k w da p^{k+m-1} pbar^{l+n} - l w dbar(a) p^{k+m} pbar^{l+n-1}.
JetField jet_poisson(const JetField& f, const JetField& g);

enum class Normalization { negative, positive };

// Coefficient of pbar in the normalized generator: +1 (negative), -1 (positive).
inline double pbar_sign(Normalization n) { return n == Normalization::negative ? 1.0 : -1.0; }
const char* to_string(Normalization n);
Normalization normalization_from_string(const std::string& s);

struct HigherStructure {
    int n = 2;
    Normalization norm = Normalization::negative;
    BasePtr base;
    // mu[k-2] holds mu_k, a section of type (1-k, 1).
    std::vector<CVec> mu;

    const CVec& mu_k(int k) const { return mu.at(k - 2); }
    CVec& mu_k(int k) { return mu.at(k - 2); }
};

HigherStructure make_structure(BasePtr base, int n, Normalization norm = Normalization::negative);
void check_structure(const HigherStructure& I);
double sup_mu2(const HigherStructure& I);

// Normalized form of H mod I: p-only coefficients w_1..w_{n-1} (w[k], type (-k,0));
// w[0] is unused and zero.
std::vector<CVec> ideal_reduce(const JetField& H, const HigherStructure& I);
// The same, as a jet field with only pure p^k slices.
JetField normalized_jet(const JetField& H, const HigherStructure& I);

HigherStructure project_structure(const HigherStructure& I, int k);
HigherStructure convert_normalization(const HigherStructure& I, Normalization target);

}  // namespace hcs
