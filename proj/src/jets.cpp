#include "hcs/jets.hpp"

#include <cmath>

namespace hcs {

std::pair<int, int> jet_monomial(int idx) {
    int d = 1;
    while (jet_count(d) <= idx) ++d;
    const int off = idx - (d - 1) * (d + 2) / 2;
    return {d - off, off};
}

JetPoly::JetPoly(int degree_cap) : cap_(degree_cap), c_(jet_count(degree_cap), 0.0) {
    if (degree_cap < 1) throw Error("jets.cap", "jet degree cap must be >= 1");
}

cplx JetPoly::get(int a, int b) const {
    if (a < 0 || b < 0 || a + b < 1 || a + b > cap_) return 0.0;
    return c_[jet_index(a, b)];
}

void JetPoly::set(int a, int b, cplx v) {
    if (a + b == 0) throw Error("jets.constant", "jets vanish on the zero section");
    if (a < 0 || b < 0 || a + b > cap_) throw Error("jets.range", "monomial outside degree cap");
    c_[jet_index(a, b)] = v;
}

void JetPoly::add(int a, int b, cplx v) {
    if (a + b <= cap_) c_[jet_index(a, b)] += v;
}

JetPoly JetPoly::monomial(int cap, int a, int b, cplx coeff) {
    JetPoly f(cap);
    f.set(a, b, coeff);
    return f;
}

static void same_cap(int a, int b) {
    if (a != b) throw Error("jets.cap_mismatch", "jets have different degree caps");
}

JetPoly jet_mul(const JetPoly& f, const JetPoly& g) {
    same_cap(f.cap(), g.cap());
    const int D = f.cap();
    JetPoly r(D);
    for (int i = 0; i < jet_count(D); ++i) {
        const cplx fi = f.coeffs()[i];
        if (fi == 0.0) continue;
        auto [a, b] = jet_monomial(i);
        for (int j = 0; j < jet_count(D); ++j) {
            const cplx gj = g.coeffs()[j];
            if (gj == 0.0) continue;
            auto [c, e] = jet_monomial(j);
            r.add(a + c, b + e, fi * gj);
        }
    }
    return r;
}

JetPoly jet_add(const JetPoly& f, const JetPoly& g) {
    same_cap(f.cap(), g.cap());
    JetPoly r = f;
    for (size_t i = 0; i < r.coeffs().size(); ++i) r.coeffs()[i] += g.coeffs()[i];
    return r;
}

JetPoly jet_scale(const JetPoly& f, cplx s) {
    JetPoly r = f;
    for (auto& c : r.coeffs()) c *= s;
    return r;
}

JetPoly jet_conj(const JetPoly& f) {
    JetPoly r(f.cap());
    for (int i = 0; i < jet_count(f.cap()); ++i) {
        auto [a, b] = jet_monomial(i);
        r.set(b, a, std::conj(f.coeffs()[i]));
    }
    return r;
}

int jet_order(const JetPoly& f, double tol) {
    for (int i = 0; i < jet_count(f.cap()); ++i)
        if (std::abs(f.coeffs()[i]) > tol) {
            auto [a, b] = jet_monomial(i);
            return a + b;
        }
    return f.cap() + 1;
}

JetField::JetField(BasePtr base, int degree_cap) : base_(std::move(base)), cap_(degree_cap) {
    if (!base_) throw Error("jets.base", "jet field needs a base");
    if (degree_cap < 1) throw Error("jets.cap", "jet degree cap must be >= 1");
    s_.assign(jet_count(degree_cap), CVec::Zero(base_->size()));
}

JetPoly JetField::at_point(Eigen::Index i) const {
    JetPoly p(cap_);
    for (size_t k = 0; k < s_.size(); ++k) p.coeffs()[k] = s_[k][i];
    return p;
}

bool JetField::is_zero(double tol) const {
    for (const auto& s : s_)
        if (max_abs(s) > tol) return false;
    return true;
}

static void same_base(const JetField& f, const JetField& g) {
    if (f.base() != g.base()) throw Error("jets.base_mismatch", "jet fields live on different bases");
    same_cap(f.cap(), g.cap());
}

JetField jet_add(const JetField& f, const JetField& g) {
    same_base(f, g);
    JetField r = f;
    for (size_t i = 0; i < r.slices().size(); ++i) r.slices()[i] += g.slices()[i];
    return r;
}

JetField jet_scale(const JetField& f, cplx s) {
    JetField r = f;
    for (auto& v : r.slices()) v *= s;
    return r;
}

JetField jet_mul(const JetField& f, const JetField& g) {
    same_base(f, g);
    const int D = f.cap();
    JetField r(f.base(), D);
    for (int i = 0; i < jet_count(D); ++i) {
        if (max_abs(f.slices()[i]) == 0.0) continue;
        auto [a, b] = jet_monomial(i);
        for (int j = 0; j < jet_count(D); ++j) {
            auto [c, e] = jet_monomial(j);
            if (a + b + c + e > D) continue;
            r.at(a + c, b + e).array() += f.slices()[i].array() * g.slices()[j].array();
        }
    }
    return r;
}

JetField jet_conj(const JetField& f) {
    JetField r(f.base(), f.cap());
    for (int i = 0; i < jet_count(f.cap()); ++i) {
        auto [a, b] = jet_monomial(i);
        r.at(b, a) = f.slices()[i].conjugate();
    }
    return r;
}

JetField jet_degree_part(const JetField& f, int k) {
    JetField r(f.base(), f.cap());
    if (k < 1 || k > f.cap()) return r;
    for (int a = 0; a <= k; ++a) r.at(a, k - a) = f.get(a, k - a);
    return r;
}

JetField jet_recap(const JetField& f, int cap) {
    JetField r(f.base(), cap);
    for (int d = 1; d <= std::min(cap, f.cap()); ++d)
        for (int a = 0; a <= d; ++a) r.at(a, d - a) = f.get(a, d - a);
    return r;
}

double jet_max_abs(const JetField& f) {
    double m = 0.0;
    for (const auto& s : f.slices()) m = std::max(m, max_abs(s));
    return m;
}

JetField jet_poisson(const JetField& f, const JetField& g) {
    same_base(f, g);
    const int D = f.cap();
    const Base& B = *f.base();
    const int M = jet_count(D);

    // Derivatives are computed once per nonzero slice.
    std::vector<bool> fz(M), gz(M);
    std::vector<std::optional<CVec>> fd(M), fdb(M), gd(M), gdb(M);
    for (int i = 0; i < M; ++i) {
        fz[i] = max_abs(f.slices()[i]) == 0.0;
        gz[i] = max_abs(g.slices()[i]) == 0.0;
    }
    auto deriv = [&](std::vector<std::optional<CVec>>& cache, const JetField& h, int i, bool bar) -> const CVec& {
        if (!cache[i]) {
            auto [a, b] = jet_monomial(i);
            cache[i] = bar ? B.dbar(h.slices()[i], -a, -b) : B.d(h.slices()[i], -a, -b);
        }
        return *cache[i];
    };

    JetField r(f.base(), D);
    for (int i = 0; i < M; ++i) {
        if (fz[i]) continue;
        auto [k, l] = jet_monomial(i);
        const CVec& w = f.slices()[i];
        for (int j = 0; j < M; ++j) {
            if (gz[j]) continue;
            auto [m, n] = jet_monomial(j);
            if (k + l + m + n - 1 > D) continue;
            const CVec& a = g.slices()[j];
            // p^{k+m-1} pbar^{l+n}
            if (k + m >= 1 && (m != 0 || k != 0)) {
                CVec& out = r.at(k + m - 1, l + n);
                if (m != 0) out.array() += double(m) * a.array() * deriv(fd, f, i, false).array();
                if (k != 0) out.array() -= double(k) * w.array() * deriv(gd, g, j, false).array();
            }
            // p^{k+m} pbar^{l+n-1}
            if (l + n >= 1 && (n != 0 || l != 0)) {
                CVec& out = r.at(k + m, l + n - 1);
                if (n != 0) out.array() += double(n) * a.array() * deriv(fdb, f, i, true).array();
                if (l != 0) out.array() -= double(l) * w.array() * deriv(gdb, g, j, true).array();
            }
        }
    }
    return r;
}

const char* to_string(Normalization n) { return n == Normalization::negative ? "negative" : "positive"; }

Normalization normalization_from_string(const std::string& s) {
    if (s == "negative") return Normalization::negative;
    if (s == "positive") return Normalization::positive;
    throw Error("config.normalization", "normalization must be 'negative' or 'positive'");
}

HigherStructure make_structure(BasePtr base, int n, Normalization norm) {
    if (n < 2 || n > 6) throw Error("structure.degree", "structure degree must be in 2..6");
    HigherStructure I;
    I.n = n;
    I.norm = norm;
    I.mu.assign(n - 1, CVec::Zero(base->size()));
    I.base = std::move(base);
    return I;
}

double sup_mu2(const HigherStructure& I) { return max_abs(I.mu_k(2)); }

void check_structure(const HigherStructure& I) {
    if (!I.base) throw Error("structure.base", "structure has no base");
    if (static_cast<int>(I.mu.size()) != I.n - 1) throw Error("structure.shape", "wrong number of mu slices");
    for (const auto& m : I.mu)
        if (m.size() != I.base->size()) throw Error("structure.shape", "mu slice size mismatch");
    const double s = sup_mu2(I);
    if (!(s < 1.0)) throw Error("structure.mu2", "sup |mu_2| must stay below 1", json{{"sup_mu2", s}});
}

namespace {

// Coefficients (by p-degree 0..D) of a power series in p with CVec coefficients.
using Series = std::vector<CVec>;

Series series_mul(const Series& x, const Series& y, int D, Eigen::Index N) {
    Series r(D + 1, CVec::Zero(N));
    for (int i = 0; i <= D; ++i) {
        if (max_abs(x[i]) == 0.0) continue;
        for (int j = 0; i + j <= D; ++j) r[i + j].array() += x[i].array() * y[j].array();
    }
    return r;
}

}  // namespace

std::vector<CVec> ideal_reduce(const JetField& H, const HigherStructure& I) {
    if (H.base() != I.base) throw Error("jets.base_mismatch", "Hamiltonian and structure on different bases");
    check_structure(I);
    const int D = I.n - 1;
    const Eigen::Index N = H.size();

    // pbar = P(p) on the ideal; P has p-degrees 1..D.
    const double s = -pbar_sign(I.norm);
    Series P(D + 1, CVec::Zero(N));
    for (int k = 2; k <= I.n; ++k) P[k - 1] = s * I.mu_k(k);

    std::vector<Series> pw;  // pw[b] = P^b truncated
    Series one(D + 1, CVec::Zero(N));
    one[0].setOnes();
    pw.push_back(one);
    for (int b = 1; b <= D; ++b) pw.push_back(series_mul(pw.back(), P, D, N));

    std::vector<CVec> w(I.n, CVec::Zero(N));
    for (int d = 1; d <= std::min(D, H.cap()); ++d) {
        for (int a = 0; a <= d; ++a) {
            const int b = d - a;
            const CVec& c = H.get(a, b);
            if (max_abs(c) == 0.0) continue;
            for (int j = a; j <= D; ++j) w[j].array() += c.array() * pw[b][j - a].array();
        }
    }
    return w;
}

JetField normalized_jet(const JetField& H, const HigherStructure& I) {
    auto w = ideal_reduce(H, I);
    JetField r(H.base(), H.cap());
    for (int k = 1; k <= std::min(H.cap(), I.n - 1); ++k) r.at(k, 0) = w[k];
    return r;
}

HigherStructure project_structure(const HigherStructure& I, int k) {
    if (k < 2 || k > I.n) throw Error("structure.project", "projection degree out of range", json{{"k", k}, {"n", I.n}});
    HigherStructure r = I;
    r.n = k;
    r.mu.resize(k - 1);
    return r;
}

HigherStructure convert_normalization(const HigherStructure& I, Normalization target) {
    HigherStructure r = I;
    if (target != I.norm)
        for (auto& m : r.mu) m = -m;
    r.norm = target;
    return r;
}

}  // namespace hcs
