#pragma once
// Laurent-balance analysis of weight-homogeneous vector fields:
//   * weight split of a field into matched and subordinate parts,
//   * balance verification and the resonance (Kovalevskaya) matrix,
//   * step-by-step Laurent extension with pinned free parameters,
//   * residual verification of the truncated series against the full field,
//   * expansion of polynomial observables along a family (pole orders,
//     principal parts), and
//   * divisor relations: eliminate free parameters from the t^0 constraints
//     of the invariants and normalize the remaining curve equation.
//
// Conventions.  A branch t = tau^d (d = 1 or 2) with integer tau-weights W_i
// writes each state variable as x_i = sum_{k>=0} c[k][i] tau^(k - W_i); the
// flow equation becomes dx/dtau = d tau^(d-1) f(x).  Step k >= 1 solves
//   (L - k I) c_k = r_k,
// where L = d Jac(f_matched)(x0) + diag(W) and r_k is the coefficient of the
// residual at tau^(k - W_i - 1) with c_k set to zero.  Integer eigenvalues of
// L are the resonances; kernel directions there carry the free parameters.

#include "acilab/hamsys.hpp"
#include "acilab/linalg.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace acilab {

// ---------------------------------------------------------------------------
// Weights

inline long mono_weight(const Monomial& m, const std::map<VarId, int>& w) {
    long s = 0;
    for (auto& [v, e] : m.e) {
        auto it = w.find(v);
        if (it != w.end()) s += static_cast<long>(e) * it->second;
    }
    return s;
}

inline std::map<VarId, int> weight_map(const std::vector<VarId>& vars,
                                       const std::vector<int>& w) {
    std::map<VarId, int> m;
    for (std::size_t i = 0; i < vars.size(); ++i) m[vars[i]] = w[i];
    return m;
}

// Largest tau-weight among the monomials of g (parameters weigh nothing).
inline long observable_weight(const Poly& g, const std::map<VarId, int>& w) {
    long best = 0;
    for (auto& [m, c] : g.terms()) best = std::max(best, mono_weight(m, w));
    return best;
}

struct WeightSplit {
    std::vector<Poly> matched;            // terms of weight exactly W_i + d
    std::vector<Poly> subordinate;        // strictly lighter terms
    std::vector<std::string> overweight;  // must be empty for an admissible balance
};

inline WeightSplit split_by_weight(const std::vector<Poly>& f, const std::vector<VarId>& vars,
                                   const std::vector<int>& W, int d) {
    auto wmap = weight_map(vars, W);
    WeightSplit out;
    const VarPool* pool = f.empty() ? nullptr : f[0].pool();
    for (std::size_t i = 0; i < f.size(); ++i) {
        Poly m(pool), s(pool);
        for (auto& [mono, c] : f[i].terms()) {
            long wm = mono_weight(mono, wmap);
            Poly term(pool);
            term.add_term(mono, c);
            if (wm == W[i] + d) {
                m += term;
            } else if (wm < W[i] + d) {
                s += term;
            } else {
                out.overweight.push_back("component " + std::to_string(i + 1) + ": term " +
                                         term.str() + " has weight " + std::to_string(wm) +
                                         " > " + std::to_string(W[i] + d));
            }
        }
        out.matched.push_back(std::move(m));
        out.subordinate.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Balance and resonance matrix

struct BalanceSpec {
    std::string label;
    int d = 1;
    std::vector<int> weights;  // tau-weights W_i
    std::vector<Poly> x0;      // leading coefficients (may carry family parameters)
    // step -> [(parameter symbol, state component index)] for resonant steps
    std::map<int, std::vector<std::pair<VarId, std::size_t>>> pins;
};

// Residual of the leading-order equation: d*f_matched(x0) + W*x0 must vanish.
inline std::vector<Poly> balance_residual(const WeightSplit& split,
                                          const std::vector<VarId>& vars,
                                          const BalanceSpec& spec) {
    std::map<VarId, Poly> bind;
    for (std::size_t i = 0; i < vars.size(); ++i) bind[vars[i]] = spec.x0[i];
    std::vector<Poly> res;
    res.reserve(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
        Poly r = split.matched[i].substitute(bind) * Q(spec.d) + spec.x0[i] * Q(spec.weights[i]);
        res.push_back(std::move(r));
    }
    return res;
}

inline PolyMatrix kovalevskaya_matrix(const WeightSplit& split, const std::vector<VarId>& vars,
                                      const BalanceSpec& spec) {
    const std::size_t n = vars.size();
    const VarPool* pool = split.matched.empty() ? nullptr : split.matched[0].pool();
    std::map<VarId, Poly> bind;
    for (std::size_t i = 0; i < n; ++i) bind[vars[i]] = spec.x0[i];
    PolyMatrix L = mat_zero(pool, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            L[i][j] = split.matched[i].partial(vars[j]).substitute(bind) * Q(spec.d);
            if (i == j) L[i][j] += Poly::constant(pool, Q(spec.weights[i]));
        }
    return L;
}

struct IntegerSpectrum {
    std::map<int, int> roots;  // integer eigenvalue -> multiplicity
    bool fully_integer = true;
    std::string leftover;  // non-integer factor, for diagnostics
};

// Integer roots of det(lambda I - L), found by exact trial division.
inline IntegerSpectrum integer_spectrum(const PolyMatrix& L, VarPool& pool, int lo = -12,
                                        int hi = 48) {
    VarId lam = pool.intern("_lambda");
    Poly cp = charpoly(L, lam);
    IntegerSpectrum out;
    for (int r = lo; r <= hi; ++r) {
        Poly factor = Poly::variable(cp.pool(), lam) - Poly::constant(cp.pool(), Q(r));
        while (true) {
            auto q = cp.divide_exact(factor);
            if (!q) break;
            cp = std::move(*q);
            out.roots[r] += 1;
        }
    }
    if (cp.degree_in(lam) > 0) {
        out.fully_integer = false;
        out.leftover = cp.str();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Laurent extension

struct LaurentFamily {
    const VarPool* pool = nullptr;
    int d = 1;
    std::vector<int> W;
    std::vector<VarId> vars;
    int order = 0;                         // steps 0..order computed
    std::vector<std::vector<Frac>> coeff;  // coeff[k][i]
    std::vector<VarId> pinned_params;
    int kernel_dim0 = 0;         // dim ker(L): balance-family directions
    std::map<int, int> kernel_dims;  // resonant step (>=1) -> kernel dimension
    std::vector<std::string> genericity;

    // Free parameters of the Laurent family: balance-family directions plus
    // one per kernel dimension at every positive resonance.
    int free_parameter_count() const {
        int n = kernel_dim0;
        for (auto& [k, dim] : kernel_dims) n += dim;
        return n;
    }
};

namespace detail {

inline std::vector<Frac> frac_conv(const std::vector<Frac>& a, const std::vector<Frac>& b,
                                   int cap, const VarPool* pool) {
    std::vector<Frac> r(static_cast<std::size_t>(cap) + 1, Frac::of(Poly(pool)));
    for (std::size_t i = 0; i < a.size() && static_cast<int>(i) <= cap; ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size() && static_cast<int>(i + j) <= cap; ++j) {
            if (b[j].is_zero()) continue;
            r[i + j] = r[i + j] + a[i] * b[j];
        }
    }
    return r;
}

// Truncated product of per-variable coefficient arrays over the state part of
// a monomial; the parameter part is returned as a separate polynomial factor.
// `table[i]` is the coefficient array of state variable i (index = step).
inline std::pair<std::vector<Frac>, Poly> mono_series(
    const Monomial& mono, Q coef, const std::vector<VarId>& vars,
    const std::vector<std::vector<Frac>>& table, int cap, const VarPool* pool) {
    Poly param = Poly::constant(pool, coef);
    std::vector<Frac> prod(1, Frac::of(Poly::constant(pool, Q(1))));
    for (auto& [v, e] : mono.e) {
        auto it = std::find(vars.begin(), vars.end(), v);
        if (it == vars.end()) {
            param = param * Poly::variable(pool, v).pow(e);
            continue;
        }
        const auto& arr = table[static_cast<std::size_t>(it - vars.begin())];
        for (std::uint32_t r = 0; r < e; ++r) prod = frac_conv(prod, arr, cap, pool);
    }
    return {std::move(prod), std::move(param)};
}

}  // namespace detail

struct ExtendOutcome {
    bool ok = false;
    std::string error;
    LaurentFamily fam;
};

inline ExtendOutcome laurent_extend(const std::vector<Poly>& f, const std::vector<VarId>& vars,
                                    const BalanceSpec& spec, int order, VarPool& pool) {
    ExtendOutcome out;
    const std::size_t n = vars.size();
    const VarPool* cpool = &pool;

    WeightSplit split = split_by_weight(f, vars, spec.weights, spec.d);
    if (!split.overweight.empty()) {
        out.error = "field has terms heavier than the balance admits: " + split.overweight[0];
        return out;
    }
    for (Poly& r : balance_residual(split, vars, spec)) {
        if (!r.is_zero()) {
            out.error = "leading balance fails: residual " + r.str();
            return out;
        }
    }

    PolyMatrix L = kovalevskaya_matrix(split, vars, spec);

    LaurentFamily fam;
    fam.pool = cpool;
    fam.d = spec.d;
    fam.W = spec.weights;
    fam.vars = vars;
    fam.order = order;
    fam.coeff.assign(static_cast<std::size_t>(order) + 1,
                     std::vector<Frac>(n, Frac::of(Poly(cpool))));
    for (std::size_t i = 0; i < n; ++i) fam.coeff[0][i] = Frac::of(spec.x0[i]);

    {
        auto h = linsolve(L, PolyVector(n, Poly(cpool)));
        fam.kernel_dim0 = static_cast<int>(h.kernel.size());
    }

    auto wmap = weight_map(vars, spec.weights);
    const Frac fzero = Frac::of(Poly(cpool));

    for (int k = 1; k <= order; ++k) {
        // Right-hand side: the residual of dx/dtau - d tau^(d-1) f(x) at
        // tau^(k - W_i - 1) with c_k zeroed.  The derivative part contributes
        // nothing there (it enters at step k), so
        // r_i = -coefficient of tau^(k - W_i - 1) in d tau^(d-1) f_i(series),
        // built from the already-known coefficient arrays.
        std::vector<std::vector<Frac>> table(n);
        for (std::size_t i = 0; i < n; ++i) {
            table[i].reserve(static_cast<std::size_t>(k));
            for (int s = 0; s < k; ++s) table[i].push_back(fam.coeff[s][i]);
        }
        std::vector<Frac> rhs(n, fzero);
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& [mono, q] : f[i].terms()) {
                long wm = mono_weight(mono, wmap);
                long idx = k - spec.weights[i] - spec.d + wm;
                if (idx < 0) continue;
                auto [prod, param] =
                    detail::mono_series(mono, q, vars, table, static_cast<int>(idx), cpool);
                if (static_cast<std::size_t>(idx) >= prod.size()) continue;
                Frac contrib = Frac::of(param * Q(spec.d)) * prod[static_cast<std::size_t>(idx)];
                rhs[i] = rhs[i] - contrib;
            }
        }

        // Solve (L - k I) c_k = rhs over the parameter field.
        std::vector<std::vector<Frac>> aug(n, std::vector<Frac>(n + 1, fzero));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                Poly a = L[i][j];
                if (i == j) a -= Poly::constant(cpool, Q(k));
                aug[i][j] = Frac::of(a);
            }
            aug[i][n] = rhs[i];
        }
        LinSolveResult sol = linsolve_frac(aug, cpool);
        for (auto& g : sol.genericity)
            fam.genericity.push_back("step " + std::to_string(k) + ": " + g);
        if (!sol.consistent) {
            out.error = "step " + std::to_string(k) +
                        " is not solvable (balance not principal here): " + sol.failed_relation;
            return out;
        }

        auto pit = spec.pins.find(k);
        if (sol.kernel.empty()) {
            if (pit != spec.pins.end()) {
                out.error = "step " + std::to_string(k) + " is pinned but carries no kernel";
                return out;
            }
            fam.coeff[static_cast<std::size_t>(k)] = sol.particular;
            continue;
        }

        fam.kernel_dims[k] = static_cast<int>(sol.kernel.size());
        if (pit == spec.pins.end()) {
            out.error = "unpinned resonance at step " + std::to_string(k) + " (kernel dim " +
                        std::to_string(sol.kernel.size()) + ")";
            return out;
        }
        const auto& pins = pit->second;
        const std::size_t m = sol.kernel.size();
        if (pins.size() != m) {
            out.error = "step " + std::to_string(k) + ": kernel dim " + std::to_string(m) +
                        " but " + std::to_string(pins.size()) + " pins";
            return out;
        }

        // Re-basis the kernel so basis vector a has entry 1 at pin a's
        // component and 0 at the others; then shift the particular solution to
        // vanish at every pinned component.
        std::vector<std::vector<Frac>> newbasis;
        for (std::size_t a = 0; a < m; ++a) {
            std::vector<std::vector<Frac>> g(m, std::vector<Frac>(m + 1, fzero));
            for (std::size_t r = 0; r < m; ++r) {
                for (std::size_t b = 0; b < m; ++b) g[r][b] = sol.kernel[b][pins[r].second];
                g[r][m] = Frac::of(Poly::constant(
                    cpool, Q(r == a ? 1 : 0)));
            }
            LinSolveResult gs = linsolve_frac(g, cpool);
            for (auto& gg : gs.genericity)
                fam.genericity.push_back("step " + std::to_string(k) + " (pin basis): " + gg);
            if (!gs.consistent || !gs.kernel.empty()) {
                out.error = "step " + std::to_string(k) +
                            ": pinned components do not separate the kernel";
                return out;
            }
            std::vector<Frac> kb(n, fzero);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t b = 0; b < m; ++b)
                    kb[i] = kb[i] + gs.particular[b] * sol.kernel[b][i];
            newbasis.push_back(std::move(kb));
        }
        std::vector<Frac> part = sol.particular;
        for (std::size_t a = 0; a < m; ++a) {
            Frac shift = part[pins[a].second];
            if (shift.is_zero()) continue;
            for (std::size_t i = 0; i < n; ++i) part[i] = part[i] - shift * newbasis[a][i];
        }
        for (std::size_t a = 0; a < m; ++a) {
            Frac pv = Frac::of(Poly::variable(cpool, pins[a].first));
            for (std::size_t i = 0; i < n; ++i) part[i] = part[i] + pv * newbasis[a][i];
            fam.pinned_params.push_back(pins[a].first);
        }
        fam.coeff[static_cast<std::size_t>(k)] = std::move(part);
    }

    out.ok = true;
    out.fam = std::move(fam);
    return out;
}

// ---------------------------------------------------------------------------
// Verification and observables

// Checks every computable coefficient of dx/dtau - d tau^(d-1) f(x) against
// zero (steps 0..order); returns human-readable violations, empty on success.
inline std::vector<std::string> verify_series(const std::vector<Poly>& f,
                                              const LaurentFamily& fam) {
    std::vector<std::string> bad;
    const std::size_t n = fam.vars.size();
    const VarPool* pool = fam.pool;
    auto wmap = weight_map(fam.vars, fam.W);
    std::vector<std::vector<Frac>> table(n);
    for (std::size_t i = 0; i < n; ++i)
        for (int s = 0; s <= fam.order; ++s) table[i].push_back(fam.coeff[s][i]);

    for (std::size_t i = 0; i < n; ++i) {
        for (int s = 0; s <= fam.order; ++s) {
            Frac res = fam.coeff[s][i] * Frac::of(Poly::constant(pool, Q(s - fam.W[i])));
            for (auto& [mono, q] : f[i].terms()) {
                long wm = mono_weight(mono, wmap);
                long idx = s - fam.W[i] - fam.d + wm;
                if (idx < 0 || idx > s) continue;
                auto [prod, param] =
                    detail::mono_series(mono, q, fam.vars, table, static_cast<int>(idx), pool);
                if (static_cast<std::size_t>(idx) >= prod.size()) continue;
                res = res - Frac::of(param * Q(fam.d)) * prod[static_cast<std::size_t>(idx)];
            }
            if (!res.is_zero())
                bad.push_back("component " + std::to_string(i + 1) + ", step " +
                              std::to_string(s) + ": residual " + res.str());
        }
    }
    return bad;
}

struct ObservableSeries {
    int valid = 0;           // coefficients are complete for exponents <= valid
    std::map<int, Frac> c;   // tau-exponent -> coefficient (nonzero only)
};

// Laurent expansion of a polynomial observable along the family.
inline ObservableSeries observable_series(const Poly& g, const LaurentFamily& fam) {
    const std::size_t n = fam.vars.size();
    const VarPool* pool = fam.pool;
    auto wmap = weight_map(fam.vars, fam.W);
    std::vector<std::vector<Frac>> table(n);
    for (std::size_t i = 0; i < n; ++i)
        for (int s = 0; s <= fam.order; ++s) table[i].push_back(fam.coeff[s][i]);

    ObservableSeries out;
    long maxw = observable_weight(g, wmap);
    out.valid = fam.order - static_cast<int>(maxw);
    for (auto& [mono, q] : g.terms()) {
        long wm = mono_weight(mono, wmap);
        int cap = out.valid + static_cast<int>(wm);
        if (cap < 0) continue;
        auto [prod, param] = detail::mono_series(mono, q, fam.vars, table, cap, pool);
        Frac pf = Frac::of(param);
        for (std::size_t idx = 0; idx < prod.size(); ++idx) {
            if (prod[idx].is_zero()) continue;
            int e = static_cast<int>(idx) - static_cast<int>(wm);
            Frac v = pf * prod[idx];
            if (v.is_zero()) continue;
            auto it = out.c.find(e);
            if (it == out.c.end()) {
                out.c.emplace(e, std::move(v));
            } else {
                it->second = it->second + v;
                if (it->second.is_zero()) out.c.erase(it);
            }
        }
    }
    return out;
}

// Lowest tau-exponent with a nonzero coefficient; nullopt when the observable
// vanishes to the computed order.
inline std::optional<int> pole_exponent(const ObservableSeries& s) {
    for (auto& [e, v] : s.c)
        if (!v.is_zero()) return e;
    return std::nullopt;
}

// Entries below tau^0 (these must cancel identically for invariants).
inline std::vector<std::pair<int, Frac>> principal_part(const ObservableSeries& s) {
    std::vector<std::pair<int, Frac>> out;
    for (auto& [e, v] : s.c)
        if (e < 0) out.emplace_back(e, v);
    return out;
}

// ---------------------------------------------------------------------------
// Divisor relations

struct DivisorOutcome {
    bool ok = false;
    std::string error;
    Poly divisor;  // numerator of the final relation, primitive, positive lead
    std::vector<std::string> principal_violations;
    std::vector<std::string> log;
};

// Substitutes the family into each invariant, records the tau^0 relations
// "value = c_r", eliminates the listed parameters (each linear in its
// designated relation), and returns the one remaining relation.
inline DivisorOutcome divisor_relations(const std::vector<Poly>& invariants,
                                        const std::vector<VarId>& cvals,
                                        const LaurentFamily& fam,
                                        const std::vector<std::pair<VarId, std::size_t>>& elim,
                                        std::size_t final_relation) {
    DivisorOutcome out;
    const VarPool* pool = fam.pool;
    std::vector<Frac> rels;
    for (std::size_t r = 0; r < invariants.size(); ++r) {
        ObservableSeries s = observable_series(invariants[r], fam);
        if (s.valid < 0) {
            out.error = "series order too low for invariant " + std::to_string(r + 1) +
                        " (tau^0 not reached)";
            return out;
        }
        for (auto& [e, v] : s.c) {
            if (e < 0 && !v.is_zero())
                out.principal_violations.push_back("invariant " + std::to_string(r + 1) +
                                                   " tau^" + std::to_string(e) + ": " + v.str());
        }
        Frac t0 = Frac::of(Poly(pool));
        auto it = s.c.find(0);
        if (it != s.c.end()) t0 = it->second;
        rels.push_back(t0 - Frac::of(Poly::variable(pool, cvals[r])));
    }
    if (!out.principal_violations.empty()) {
        out.error = "principal parts fail to cancel";
        return out;
    }

    std::vector<bool> consumed(rels.size(), false);
    for (auto& [param, ridx] : elim) {
        if (ridx >= rels.size() || consumed[ridx]) {
            out.error = "bad elimination relation index";
            return out;
        }
        Frac rel = rels[ridx];
        if (rel.den.degree_in(param) > 0) {
            out.error = "eliminant denominator involves " + pool->name(param);
            return out;
        }
        if (rel.num.degree_in(param) != 1) {
            out.error = "relation " + std::to_string(ridx + 1) + " is not linear in " +
                        pool->name(param);
            return out;
        }
        Poly a = rel.num.coeff_of(param, 1);
        Poly b = rel.num.coeff_of(param, 0);
        if (!a.is_field_element())
            out.log.push_back("eliminating " + pool->name(param) +
                              ": coefficient assumed nonzero: " + a.str());
        Frac value = Frac{-b, a};
        value.simplify();
        out.log.push_back(pool->name(param) + " = " + value.str());
        consumed[ridx] = true;
        std::map<VarId, Frac> bind{{param, value}};
        for (std::size_t r = 0; r < rels.size(); ++r) {
            if (consumed[r]) continue;
            Frac num = poly_subst_frac(rels[r].num, bind);
            Frac den = poly_subst_frac(rels[r].den, bind);
            rels[r] = num / den;
        }
    }
    if (final_relation >= rels.size() || consumed[final_relation]) {
        out.error = "bad final relation index";
        return out;
    }
    Poly divisor = rels[final_relation].num;
    if (divisor.is_zero()) {
        out.error = "final relation is identically zero";
        return out;
    }
    Q content = rational_content(divisor);
    divisor /= content;
    out.divisor = divisor;
    out.ok = true;
    return out;
}

// computed == q * printed for some nonzero rational q?  Returns q.
inline std::optional<Q> rational_multiple(const Poly& computed, const Poly& printed) {
    if (computed.is_zero() && printed.is_zero()) return Q(1);
    if (computed.is_zero() || printed.is_zero()) return std::nullopt;
    const auto& [m0, c0] = printed.leading_term();
    auto it = computed.terms().find(m0);
    if (it == computed.terms().end()) return std::nullopt;
    Q ratio = it->second / c0;
    Poly scaled = printed;
    scaled *= ratio;
    if (scaled == computed) return ratio;
    return std::nullopt;
}

}  // namespace acilab
