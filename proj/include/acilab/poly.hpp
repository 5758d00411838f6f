#pragma once
// Sparse exact multivariate polynomials over arbitrary-precision rationals.
//
// Canonical form: graded-lexicographic term order, no zero coefficients, no
// zero exponents.  Variables with a square-reduction constant (VarPool) are
// normalized to exponent <= 1 on every construction, so the ring is really
// K[x...] where K = Q extended by those algebraic constants; division by a
// nonzero element of K is always possible (field_inverse).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "acilab/rational.hpp"
#include "acilab/varpool.hpp"

namespace acilab {

struct Monomial {
    // (variable, exponent), sorted by variable id, exponents > 0.
    std::vector<std::pair<VarId, std::uint32_t>> e;

    std::uint64_t total_degree() const {
        std::uint64_t d = 0;
        for (auto& [v, k] : e) d += k;
        return d;
    }
    std::uint32_t exponent(VarId v) const {
        for (auto& [w, k] : e)
            if (w == v) return k;
        return 0;
    }
    bool operator==(const Monomial& o) const { return e == o.e; }
};

// Graded-lex: higher total degree first; ties broken lexicographically with
// earlier variables (smaller id) and higher exponents first.
struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        std::uint64_t da = a.total_degree(), db = b.total_degree();
        if (da != db) return da > db;
        std::size_t i = 0, j = 0;
        while (i < a.e.size() && j < b.e.size()) {
            if (a.e[i].first != b.e[j].first) return a.e[i].first < b.e[j].first;
            if (a.e[i].second != b.e[j].second) return a.e[i].second > b.e[j].second;
            ++i, ++j;
        }
        return i < a.e.size();
    }
};

class Poly {
  public:
    using Terms = std::map<Monomial, Q, MonomialLess>;

    Poly() : pool_(nullptr) {}
    explicit Poly(const VarPool* pool) : pool_(pool) {}

    static Poly constant(const VarPool* pool, Q c) {
        Poly p(pool);
        if (c != 0) p.terms_.emplace(Monomial{}, std::move(c));
        return p;
    }
    static Poly variable(const VarPool* pool, VarId v) {
        Poly p(pool);
        p.add_term(Monomial{{{v, 1}}}, Q(1));
        return p;
    }

    const VarPool* pool() const { return pool_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.e.empty());
    }
    Q constant_value() const {
        if (terms_.empty()) return Q(0);
        if (!is_constant()) throw std::logic_error("Poly: not a constant");
        return terms_.begin()->second;
    }

    // Adds c * mono, applying square reductions; drops cancellations.
    void add_term(Monomial mono, Q c) {
        if (c == 0) return;
        if (pool_) {
            bool needs = false;
            for (auto& [v, k] : mono.e)
                if (k >= 2 && pool_->square(v)) { needs = true; break; }
            if (needs) {
                // Chained rules (e.g. kap^2 -> r2/2, r2^2 -> 2) may reintroduce
                // reducible exponents, so iterate to a fixpoint; every pass
                // strictly lowers the total degree.
                std::map<VarId, std::uint32_t> exp;
                for (auto& [v, k] : mono.e) exp[v] += k;
                bool again = true;
                while (again) {
                    again = false;
                    for (auto& [v, k] : exp) {
                        auto& sq = pool_->square(v);
                        if (!sq || k < 2) continue;
                        std::uint32_t half = k / 2;
                        c *= q_pow(sq->factor, half);
                        k %= 2;
                        if (sq->carrier) exp[*sq->carrier] += half;
                        again = true;
                        break;  // restart: the map may have grown
                    }
                }
                mono.e.clear();
                for (auto& [v, k] : exp)
                    if (k > 0) mono.e.emplace_back(v, k);
                if (c == 0) return;
            }
        }
        auto [it, inserted] = terms_.try_emplace(std::move(mono), c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Poly operator-() const {
        Poly r(pool_);
        for (auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    Poly& operator+=(const Poly& o) {
        check_pool(o);
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        check_pool(o);
        for (auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check_pool(b);
        Poly r(a.pool_ ? a.pool_ : b.pool_);
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly& operator*=(const Q& c) {
        if (c == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, coef] : terms_) coef *= c;
        return *this;
    }
    friend Poly operator*(Poly a, const Q& c) { return a *= c; }
    friend Poly operator*(const Q& c, Poly a) { return a *= c; }
    Poly& operator/=(const Q& c) {
        if (c == 0) throw std::domain_error("Poly: division by zero scalar");
        for (auto& [m, coef] : terms_) coef /= c;
        return *this;
    }

    bool operator==(const Poly& o) const { return terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly pow(std::uint32_t k) const {
        Poly r = constant(pool_, Q(1));
        Poly base = *this;
        while (k) {
            if (k & 1) r = r * base;
            base = (k >>= 1) ? base * base : base;
        }
        return r;
    }

    Poly partial(VarId v) const {
        Poly r(pool_);
        for (auto& [m, c] : terms_) {
            std::uint32_t k = m.exponent(v);
            if (k == 0) continue;
            Monomial mm;
            for (auto& [w, e] : m.e) {
                if (w == v) {
                    if (k > 1) mm.e.emplace_back(w, k - 1);
                } else {
                    mm.e.emplace_back(w, e);
                }
            }
            r.add_term(std::move(mm), c * Q(k));
        }
        return r;
    }

    // Simultaneous substitution; unbound variables stay themselves.
    Poly substitute(const std::map<VarId, Poly>& bind) const {
        Poly r(pool_);
        std::map<std::pair<VarId, std::uint32_t>, Poly> pow_cache;
        for (auto& [m, c] : terms_) {
            Poly term = constant(pool_, c);
            for (auto& [v, k] : m.e) {
                auto it = bind.find(v);
                if (it == bind.end()) {
                    Monomial mv;
                    mv.e.emplace_back(v, k);
                    Poly pv(pool_);
                    pv.add_term(std::move(mv), Q(1));
                    term = term * pv;
                } else {
                    auto key = std::make_pair(v, k);
                    auto pc = pow_cache.find(key);
                    if (pc == pow_cache.end())
                        pc = pow_cache.emplace(key, it->second.pow(k)).first;
                    term = term * pc->second;
                }
            }
            r += term;
        }
        return r;
    }

    Poly substitute(VarId v, const Poly& p) const {
        return substitute(std::map<VarId, Poly>{{v, p}});
    }

    Q eval(const std::map<VarId, Q>& point) const {
        Q total(0);
        for (auto& [m, c] : terms_) {
            Q t = c;
            for (auto& [v, k] : m.e) {
                auto it = point.find(v);
                if (it == point.end())
                    throw std::invalid_argument("Poly::eval: unbound variable " +
                                                (pool_ ? pool_->name(v) : std::to_string(v)));
                t *= q_pow(it->second, k);
            }
            total += t;
        }
        return total;
    }

    // Coefficient (a polynomial free of v) of v^k.
    Poly coeff_of(VarId v, std::uint32_t k) const {
        Poly r(pool_);
        for (auto& [m, c] : terms_) {
            if (m.exponent(v) != k) continue;
            Monomial mm;
            for (auto& [w, e] : m.e)
                if (w != v) mm.e.emplace_back(w, e);
            r.add_term(std::move(mm), c);
        }
        return r;
    }

    std::int64_t degree() const {
        if (terms_.empty()) return -1;  // -infinity sentinel
        std::int64_t d = 0;
        for (auto& [m, c] : terms_) d = std::max<std::int64_t>(d, m.total_degree());
        return d;
    }
    std::int64_t degree_in(VarId v) const {
        if (terms_.empty()) return -1;
        std::int64_t d = 0;
        for (auto& [m, c] : terms_) d = std::max<std::int64_t>(d, m.exponent(v));
        return d;
    }

    std::vector<VarId> variables() const {
        std::vector<VarId> vs;
        for (auto& [m, c] : terms_)
            for (auto& [v, k] : m.e)
                if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
        std::sort(vs.begin(), vs.end());
        return vs;
    }

    // True when every variable present is square-reduced, i.e. the value lies
    // in the coefficient field K.
    bool is_field_element() const {
        for (auto& [m, c] : terms_)
            for (auto& [v, k] : m.e)
                if (!pool_ || !pool_->square(v)) return false;
        return true;
    }

    // Inverse of a nonzero element of K (rationalizing one adjoined square
    // root at a time).  nullopt if the element is zero or a zero divisor
    // (possible when a square value is a perfect square, e.g. eps^2 = 1).
    std::optional<Poly> field_inverse() const {
        if (is_zero() || !is_field_element()) return std::nullopt;
        if (is_constant()) return constant(pool_, Q(1) / constant_value());
        VarId v = 0;
        bool found = false;
        for (auto& [m, c] : terms_) {
            for (auto& [w, k] : m.e) {
                v = w;
                found = true;
                break;
            }
            if (found) break;
        }
        // u = a + b*v with v^2 = q: u * (a - b*v) = a^2 - q*b^2 (v eliminated).
        Poly a = coeff_of(v, 0), b = coeff_of(v, 1);
        Poly conj = a - b * variable(pool_, v);
        Poly norm = *this * conj;  // free of v by construction
        auto ninv = norm.field_inverse();
        if (!ninv) return std::nullopt;
        return conj * (*ninv);
    }

    const std::pair<const Monomial, Q>& leading_term() const {
        if (terms_.empty()) throw std::logic_error("Poly: leading term of zero");
        return *terms_.begin();
    }

    // Exact division in K[true vars]: returns quotient iff remainder is zero.
    std::optional<Poly> divide_exact(const Poly& divisor) const;

    // Collects coefficients of the true-variable leading monomial structure;
    // helper for divide_exact.  Returns map true-monomial -> K-element poly.
    std::map<Monomial, Poly, MonomialLess> collect_true(const VarPool* pool) const {
        std::map<Monomial, Poly, MonomialLess> out;
        for (auto& [m, c] : terms_) {
            Monomial mt, mk;
            for (auto& [v, k] : m.e)
                (pool->square(v) ? mk : mt).e.emplace_back(v, k);
            auto it = out.find(mt);
            if (it == out.end()) it = out.emplace(mt, Poly(pool)).first;
            it->second.add_term(std::move(mk), c);
        }
        return out;
    }

    std::string str() const;  // poly_io.hpp

  private:
    static Monomial mono_mul(const Monomial& a, const Monomial& b) {
        Monomial m;
        std::size_t i = 0, j = 0;
        while (i < a.e.size() || j < b.e.size()) {
            if (j >= b.e.size() || (i < a.e.size() && a.e[i].first < b.e[j].first))
                m.e.push_back(a.e[i++]);
            else if (i >= a.e.size() || b.e[j].first < a.e[i].first)
                m.e.push_back(b.e[j++]);
            else {
                m.e.emplace_back(a.e[i].first, a.e[i].second + b.e[j].second);
                ++i, ++j;
            }
        }
        return m;
    }

    void check_pool(const Poly& o) const {
        if (pool_ && o.pool_ && pool_ != o.pool_)
            throw std::invalid_argument("Poly: variable-table mismatch");
    }

    const VarPool* pool_;
    Terms terms_;
};

inline std::optional<Poly> Poly::divide_exact(const Poly& divisor) const {
    if (divisor.is_zero()) return std::nullopt;
    const VarPool* pool = pool_ ? pool_ : divisor.pool_;
    if (is_zero()) return Poly::constant(pool, Q(0));
    // Leading true-monomial of the divisor and its K-coefficient inverse.
    auto dparts = divisor.collect_true(pool);
    const Monomial& dlead = dparts.begin()->first;
    auto dinv = dparts.begin()->second.field_inverse();
    if (!dinv) return std::nullopt;  // leading K-coefficient not invertible
    Poly rem = *this;
    Poly quot(pool);
    int guard = 0;
    while (!rem.is_zero()) {
        if (++guard > 100000) return std::nullopt;
        auto rparts = rem.collect_true(pool);
        const Monomial& rlead = rparts.begin()->first;
        // divisibility of true monomials
        Monomial qm;
        {
            std::size_t i = 0;
            bool ok = true;
            for (auto& [v, k] : dlead.e) {
                while (i < rlead.e.size() && rlead.e[i].first < v) {
                    qm.e.push_back(rlead.e[i]);
                    ++i;
                }
                if (i >= rlead.e.size() || rlead.e[i].first != v || rlead.e[i].second < k) {
                    ok = false;
                    break;
                }
                if (rlead.e[i].second > k) qm.e.emplace_back(v, rlead.e[i].second - k);
                ++i;
            }
            if (!ok) return std::nullopt;
            for (; i < rlead.e.size(); ++i) qm.e.push_back(rlead.e[i]);
        }
        Poly qcoef = rparts.begin()->second * (*dinv);
        Poly qterm(pool);
        for (auto& [mk, c] : qcoef.terms()) {
            Monomial full = mono_mul(qm, mk);
            qterm.add_term(std::move(full), c);
        }
        quot += qterm;
        rem -= qterm * divisor;
    }
    return quot;
}

}  // namespace acilab
