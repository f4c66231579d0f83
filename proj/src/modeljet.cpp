#include "hcs/modeljet.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace hcs {

namespace {

using Poly = std::vector<Rational>;

Poly mul_trunc(const Poly& a, const Poly& b, int n) {
    Poly r(n + 1, Rational(0));
    for (int i = 0; i <= n; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; i + j <= n; ++j) {
            if (b[j] != 0) r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

// L_v f = v * f'
Poly lie_apply(const Poly& v, const Poly& f, int n) {
    Poly df(n + 1, Rational(0));
    for (int k = 1; k <= n; ++k) df[k - 1] = f[k] * k;
    return mul_trunc(v, df, n);
}

void check_n(int n) {
    if (n < 2) throw std::invalid_argument("model jet truncation must be >= 2");
}

}  // namespace

ModelJet mj_identity(int n) {
    check_n(n);
    ModelJet f{n, Poly(n + 1, Rational(0))};
    f.coef[1] = 1;
    return f;
}

ModelJet mj_make(int n, const std::vector<Rational>& a) {
    if (static_cast<int>(a.size()) != n - 1) throw std::invalid_argument("need a_2..a_n");
    ModelJet f = mj_identity(n);
    for (int k = 2; k <= n; ++k) f.coef[k] = a[k - 2];
    return f;
}

ModelVec mv_make(int n, const std::vector<Rational>& v) {
    check_n(n);
    if (static_cast<int>(v.size()) != n - 1) throw std::invalid_argument("need v_2..v_n");
    ModelVec r{n, Poly(n + 1, Rational(0))};
    for (int k = 2; k <= n; ++k) r.v[k] = v[k - 2];
    return r;
}

ModelJet mj_compose(const ModelJet& f, const ModelJet& g) {
    if (f.n != g.n) throw std::invalid_argument("model jet truncation mismatch");
    const int n = f.n;
    Poly out(n + 1, Rational(0));
    Poly gk = g.coef;  // g^1
    for (int k = 1; k <= n; ++k) {
        if (f.coef[k] != 0)
            for (int j = 0; j <= n; ++j) out[j] += f.coef[k] * gk[j];
        if (k < n) gk = mul_trunc(gk, g.coef, n);
    }
    return ModelJet{n, out};
}

ModelJet mj_invert(const ModelJet& f) {
    // Solve f(h(x)) = x degree by degree: the x^k coefficient of f o h is
    // h_k plus terms in h_2..h_{k-1}.
    const int n = f.n;
    ModelJet h = mj_identity(n);
    for (int k = 2; k <= n; ++k) {
        ModelJet c = mj_compose(f, h);
        h.coef[k] -= c.coef[k];
    }
    return h;
}

ModelJet mj_commutator(const ModelJet& f, const ModelJet& g) {
    return mj_compose(mj_compose(f, g), mj_compose(mj_invert(f), mj_invert(g)));
}

int mj_order(const ModelJet& f) {
    for (int k = 2; k <= f.n; ++k)
        if (f.coef[k] != 0) return k;
    return f.n + 1;
}

ModelJet mj_exp(const ModelVec& v) {
    const int n = v.n;
    Poly term(n + 1, Rational(0));
    term[1] = 1;
    Poly out = term;
    Rational fact = 1;
    for (int m = 1; m <= n; ++m) {
        term = lie_apply(v.v, term, n);
        fact *= m;
        bool zero = true;
        for (int j = 0; j <= n; ++j) {
            if (term[j] != 0) {
                zero = false;
                out[j] += term[j] / fact;
            }
        }
        if (zero) break;
    }
    return ModelJet{n, out};
}

ModelVec mj_log(const ModelJet& f) {
    // exp(v)_k = v_k + (terms in v_2..v_{k-1}), so peel one degree at a time.
    const int n = f.n;
    ModelVec v{n, Poly(n + 1, Rational(0))};
    for (int k = 2; k <= n; ++k) {
        ModelJet e = mj_exp(v);
        v.v[k] = f.coef[k] - e.coef[k];
    }
    return v;
}

CentralSeriesReport mj_central_series(int n, std::uint64_t seed, int random_samples) {
    check_n(n);
    CentralSeriesReport rep;
    rep.n = n;
    auto fail = [&](bool& flag, const std::string& what) {
        flag = false;
        if (rep.counterexamples.size() < 8) rep.counterexamples.push_back(what);
    };
    auto describe = [](const ModelJet& f) {
        std::ostringstream os;
        os << "x";
        for (int k = 2; k <= f.n; ++k) os << " + (" << f.coef[k] << ")x^" << k;
        return os.str();
    };

    // Elements of N^k drawn from a small grid (exhaustive for the lowest free
    // coefficient pair) plus seeded random rationals.
    const std::vector<Rational> grid = {Rational(-1), Rational(0), Rational(1, 2), Rational(2)};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    auto rnd_in = [&](int k) {
        ModelJet f = mj_identity(n);
        for (int j = k; j <= n; ++j) f.coef[j] = Rational(num(rng), den(rng));
        return f;
    };
    auto grid_elems = [&](int k) {
        std::vector<ModelJet> out;
        for (const auto& c : grid) {
            for (const auto& d : grid) {
                ModelJet f = mj_identity(n);
                f.coef[k] = c;
                if (k + 1 <= n) f.coef[k + 1] = d;
                out.push_back(f);
                if (k + 1 > n) break;
            }
        }
        return out;
    };

    for (int k = 2; k <= n; ++k) {
        std::vector<ModelJet> sk = grid_elems(k);
        for (int s = 0; s < random_samples / (n - 1) + 1; ++s) sk.push_back(rnd_in(k));
        std::vector<ModelJet> s2 = grid_elems(2);
        for (int s = 0; s < 4; ++s) s2.push_back(rnd_in(2));

        for (const auto& g : sk) {
            for (const auto& f : s2) {
                ++rep.checked;
                ModelJet c = mj_commutator(f, g);
                if (mj_order(c) < k + 1) fail(rep.commutators_descend, "[" + describe(f) + ", " + describe(g) + "]");
                if (k == n && !(c == mj_identity(n))) fail(rep.top_trivial, "N^n not central");
            }
            for (const auto& h : sk) {
                ModelJet p = mj_compose(g, h);
                if (p.coef[k] != g.coef[k] + h.coef[k]) fail(rep.factors_additive, describe(g) + " * " + describe(h));
                for (int j = 2; j < k; ++j)
                    if (p.coef[j] != 0) fail(rep.fixes_lower, describe(p));
            }
            if (!(mj_log(mj_exp(mj_log(g))) == mj_log(g)) || !(mj_exp(mj_log(g)) == g))
                fail(rep.exp_log_inverse, describe(g));
        }
        // Strictness: x + x^k lies in N^k but not N^{k+1}.
        ModelJet witness = mj_identity(n);
        witness.coef[k] = 1;
        if (mj_order(witness) != k) fail(rep.chain_strict, describe(witness));
        else if (k < n) ++rep.strict_steps;
    }

    // Lower central series on a sample: gamma_1 = S, gamma_{j+1} = [S, gamma_j].
    // For the n-jet group gamma_j lies in N^{j+2}, so the class is max(1, n-2).
    {
        std::vector<ModelJet> sample;
        for (int k = 2; k <= n; ++k) {
            std::vector<Rational> e(n - 1, Rational(0));
            e[k - 2] = 1;
            sample.push_back(mj_exp(mv_make(n, e)));
        }
        sample.push_back(rnd_in(2));
        std::vector<ModelJet> level = sample;
        int cls = 0;
        while (!level.empty() && cls <= n + 1) {
            ++cls;
            std::vector<ModelJet> next;
            for (const auto& s : sample) {
                for (const auto& t : level) {
                    ModelJet c = mj_commutator(s, t);
                    if (!(c == mj_identity(n)) && next.size() < 24) next.push_back(c);
                }
            }
            level = std::move(next);
        }
        rep.nilpotency_class = cls;
        if (cls != std::max(1, n - 2)) fail(rep.chain_strict, "unexpected nilpotency class");
    }
    return rep;
}

}  // namespace hcs
