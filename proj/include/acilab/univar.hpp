#pragma once
// Univariate helpers on top of Poly: treat one designated variable as the
// main variable, coefficients living in K[other vars] (K = rationals plus
// square-reduced constants).  Division and gcd require the relevant leading
// coefficients to be invertible K-elements.

#include <optional>
#include <utility>

#include "acilab/poly.hpp"

namespace acilab {

// Scalar c such that p / c has coprime integer coefficients (sign of the
// leading graded-lex coefficient preserved).  Zero polynomial -> 1.
inline Q rational_content(const Poly& p) {
    if (p.is_zero()) return Q(1);
    mpz_class g(0), l(1);
    for (auto& [m, c] : p.terms()) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
    }
    Q content(g, l);
    content.canonicalize();
    if (p.leading_term().second < 0) content = -content;
    return content;
}

inline Poly primitive_part(const Poly& p) {
    if (p.is_zero()) return p;
    Poly r = p;
    r /= rational_content(p);
    return r;
}

// Long division in K[v] (coefficients may involve other, square-reduced
// variables).  Fails (nullopt) if the divisor's leading coefficient in v is
// not an invertible K-element.
inline std::optional<std::pair<Poly, Poly>> div_rem_univar(const Poly& a, const Poly& b,
                                                           VarId v) {
    if (b.is_zero()) return std::nullopt;
    const VarPool* pool = a.pool() ? a.pool() : b.pool();
    std::int64_t db = b.degree_in(v);
    Poly blead = b.coeff_of(v, static_cast<std::uint32_t>(db < 0 ? 0 : db));
    auto binv = blead.field_inverse();
    if (!binv) return std::nullopt;
    Poly quot(pool), rem = a;
    Poly vmono = Poly::variable(pool, v);
    std::int64_t dr = rem.degree_in(v);
    while (!rem.is_zero() && dr >= db) {
        Poly rlead = rem.coeff_of(v, static_cast<std::uint32_t>(dr));
        Poly qc = rlead * (*binv);
        Poly qterm = qc * vmono.pow(static_cast<std::uint32_t>(dr - db));
        quot += qterm;
        rem -= qterm * b;
        std::int64_t nd = rem.degree_in(v);
        if (nd >= dr) return std::nullopt;  // no progress: coefficients not closing
        dr = nd;
    }
    return std::make_pair(quot, rem);
}

// Monic-normalized gcd in K[v]; requires leading coefficients invertible.
// Returns a polynomial normalized to integer coprime coefficients.
inline std::optional<Poly> gcd_univar(Poly a, Poly b, VarId v) {
    if (a.is_zero()) return primitive_part(b);
    if (b.is_zero()) return primitive_part(a);
    a = primitive_part(a);
    b = primitive_part(b);
    while (!b.is_zero()) {
        auto dr = div_rem_univar(a, b, v);
        if (!dr) return std::nullopt;
        a = std::move(b);
        b = primitive_part(dr->second);
    }
    return primitive_part(a);
}

// gcd(p, dp/dv) constant <=> squarefree in v.  nullopt when the Euclidean
// sequence hits a non-invertible leading coefficient (can't decide).
inline std::optional<bool> squarefree_univar(const Poly& p, VarId v) {
    if (p.degree_in(v) <= 0) return true;
    auto g = gcd_univar(p, p.partial(v), v);
    if (!g) return std::nullopt;
    return g->degree_in(v) <= 0;
}

// Divides num and den by their common K[v]-factor where v is the single true
// variable of den; num may involve further variables (its K[v]-coefficients
// are reduced against den).  Returns true if a nontrivial factor was removed.
inline bool cancel_common_univar(Poly& num, Poly& den, VarId v) {
    if (den.degree_in(v) <= 0 || num.is_zero()) return false;
    const VarPool* pool = num.pool() ? num.pool() : den.pool();
    // Collect num's coefficients with respect to all true variables except v.
    std::map<Monomial, Poly, MonomialLess> groups;
    for (auto& [m, c] : num.terms()) {
        Monomial key, rest;
        for (auto& [w, k] : m.e) {
            bool keep = (w != v) && !(pool && pool->square(w));
            (keep ? key : rest).e.emplace_back(w, k);
        }
        auto it = groups.find(key);
        if (it == groups.end()) it = groups.emplace(key, Poly(pool)).first;
        it->second.add_term(std::move(rest), c);
    }
    Poly g = den;
    for (auto& [key, coef] : groups) {
        auto gg = gcd_univar(g, coef, v);
        if (!gg) return false;
        g = *gg;
        if (g.degree_in(v) <= 0) return false;
    }
    auto qn = num.divide_exact(g);
    auto qd = den.divide_exact(g);
    if (!qn || !qd) return false;
    num = *qn;
    den = *qd;
    return true;
}

}  // namespace acilab
