#pragma once
// Exact linear algebra over polynomial rings: dense matrices of Poly,
// fraction-free determinants, characteristic polynomials, and Gaussian
// elimination over the fraction field (with kernel bases and a genericity
// log for pivots that are only generically nonzero).

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "acilab/poly.hpp"
#include "acilab/poly_io.hpp"
#include "acilab/univar.hpp"

namespace acilab {

using PolyMatrix = std::vector<std::vector<Poly>>;
using PolyVector = std::vector<Poly>;

inline PolyMatrix mat_zero(const VarPool* pool, std::size_t r, std::size_t c) {
    return PolyMatrix(r, PolyVector(c, Poly(pool)));
}

inline PolyMatrix mat_identity(const VarPool* pool, std::size_t n) {
    PolyMatrix m = mat_zero(pool, n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = Poly::constant(pool, Q(1));
    return m;
}

inline PolyMatrix mat_add(const PolyMatrix& a, const PolyMatrix& b) {
    PolyMatrix r = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) r[i][j] += b[i][j];
    return r;
}

inline PolyMatrix mat_sub(const PolyMatrix& a, const PolyMatrix& b) {
    PolyMatrix r = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) r[i][j] -= b[i][j];
    return r;
}

inline PolyMatrix mat_mul(const PolyMatrix& a, const PolyMatrix& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    const VarPool* pool = nullptr;
    for (auto& row : a)
        for (auto& p : row)
            if (p.pool()) pool = p.pool();
    if (!pool)
        for (auto& row : b)
            for (auto& p : row)
                if (p.pool()) pool = p.pool();
    PolyMatrix r = mat_zero(pool, n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

inline PolyMatrix mat_scale(const PolyMatrix& a, const Poly& s) {
    PolyMatrix r = a;
    for (auto& row : r)
        for (auto& p : row) p = p * s;
    return r;
}

inline PolyMatrix commutator(const PolyMatrix& a, const PolyMatrix& b) {
    return mat_sub(mat_mul(a, b), mat_mul(b, a));
}

inline Poly mat_trace(const PolyMatrix& a) {
    Poly t(a.empty() ? nullptr : a[0][0].pool());
    for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
    return t;
}

inline bool mat_is_zero(const PolyMatrix& a) {
    for (auto& row : a)
        for (auto& p : row)
            if (!p.is_zero()) return false;
    return true;
}

namespace detail {
inline Poly det_cofactor(const PolyMatrix& a) {
    std::size_t n = a.size();
    const VarPool* pool = n ? a[0][0].pool() : nullptr;
    if (n == 0) return Poly::constant(pool, Q(1));
    if (n == 1) return a[0][0];
    if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
    Poly d(pool);
    for (std::size_t j = 0; j < n; ++j) {
        if (a[0][j].is_zero()) continue;
        PolyMatrix minor(n - 1, PolyVector(n - 1, Poly(pool)));
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) minor[r - 1][cc++] = a[r][c];
        }
        Poly term = a[0][j] * det_cofactor(minor);
        if (j % 2)
            d -= term;
        else
            d += term;
    }
    return d;
}

// Bareiss fraction-free elimination; every division is exact.
inline Poly det_bareiss(PolyMatrix a) {
    std::size_t n = a.size();
    const VarPool* pool = n ? a[0][0].pool() : nullptr;
    Poly prev = Poly::constant(pool, Q(1));
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k].is_zero()) {
            std::size_t piv = k + 1;
            while (piv < n && a[piv][k].is_zero()) ++piv;
            if (piv == n) return Poly(pool);  // singular
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Poly nume = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                auto q = nume.divide_exact(prev);
                if (!q) throw std::logic_error("det_bareiss: exact division failed");
                a[i][j] = std::move(*q);
            }
        prev = a[k][k];
    }
    Poly d = n ? a[n - 1][n - 1] : Poly::constant(pool, Q(1));
    if (sign < 0) d = -d;
    return d;
}
}  // namespace detail

// Cofactor expansion for small matrices, fraction-free Bareiss above that.
inline Poly mat_det(const PolyMatrix& a) {
    if (!a.empty() && a.size() != a[0].size())
        throw std::invalid_argument("mat_det: matrix not square");
    return a.size() <= 4 ? detail::det_cofactor(a) : detail::det_bareiss(a);
}

// Characteristic polynomial det(lam*I - A) by Faddeev-LeVerrier (the only
// divisions are by integers).  Returns coefficients c[0..n] with
// charpoly = sum c[k] * lam^k, c[n] = 1.
inline std::vector<Poly> charpoly_coeffs(const PolyMatrix& a) {
    std::size_t n = a.size();
    const VarPool* pool = n ? a[0][0].pool() : nullptr;
    std::vector<Poly> c(n + 1, Poly(pool));
    c[n] = Poly::constant(pool, Q(1));
    PolyMatrix m = mat_zero(pool, n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A * (M_{k-1} + c_{n-k+1} I)
        PolyMatrix shifted = m;
        for (std::size_t i = 0; i < n; ++i) shifted[i][i] += c[n - k + 1];
        m = mat_mul(a, shifted);
        Poly t = mat_trace(m);
        t /= Q(static_cast<long>(k));
        c[n - k] = -t;
    }
    return c;
}

inline Poly charpoly(const PolyMatrix& a, VarId lam) {
    auto c = charpoly_coeffs(a);
    const VarPool* pool = a.empty() ? nullptr : a[0][0].pool();
    Poly lp = Poly::variable(pool, lam);
    Poly out(pool);
    for (std::size_t k = 0; k < c.size(); ++k) out += c[k] * lp.pow(static_cast<std::uint32_t>(k));
    return out;
}

// ---------------------------------------------------------------------------
// Fractions of polynomials with opportunistic cancellation.

struct Frac {
    Poly num, den;

    static Frac of(Poly n) {
        Frac f{std::move(n), Poly()};
        f.den = Poly::constant(f.num.pool(), Q(1));
        return f;
    }
    bool is_zero() const { return num.is_zero(); }

    void simplify() {
        const VarPool* pool = num.pool() ? num.pool() : den.pool();
        if (num.is_zero()) {
            den = Poly::constant(pool, Q(1));
            return;
        }
        if (den.is_constant()) {
            num /= den.constant_value();
            den = Poly::constant(pool, Q(1));
            return;
        }
        if (den.is_field_element()) {
            if (auto inv = den.field_inverse()) {
                num = num * (*inv);
                den = Poly::constant(pool, Q(1));
                return;
            }
        }
        if (auto q = num.divide_exact(den)) {
            num = std::move(*q);
            den = Poly::constant(pool, Q(1));
            return;
        }
        // Cancel a common univariate factor when the denominator involves a
        // single true variable (typical: one family parameter).
        std::vector<VarId> dv;
        for (VarId v : den.variables())
            if (!pool || !pool->square(v)) dv.push_back(v);
        if (dv.size() == 1) cancel_common_univar(num, den, dv[0]);
        // Normalize scale: make denominator content-free with positive lead.
        Q c = rational_content(den);
        if (c != 1) {
            den /= c;
            num /= c;
        }
    }

    friend Frac operator+(const Frac& a, const Frac& b) {
        Frac r{a.num * b.den + b.num * a.den, a.den * b.den};
        r.simplify();
        return r;
    }
    friend Frac operator-(const Frac& a, const Frac& b) {
        Frac r{a.num * b.den - b.num * a.den, a.den * b.den};
        r.simplify();
        return r;
    }
    friend Frac operator*(const Frac& a, const Frac& b) {
        Frac r{a.num * b.num, a.den * b.den};
        r.simplify();
        return r;
    }
    friend Frac operator/(const Frac& a, const Frac& b) {
        if (b.num.is_zero()) throw std::domain_error("Frac: division by zero");
        Frac r{a.num * b.den, a.den * b.num};
        r.simplify();
        return r;
    }
    Frac operator-() const { return Frac{-num, den}; }

    std::string str() const {
        if (den.is_constant() && den.constant_value() == 1) return num.str();
        return "(" + num.str() + ")/(" + den.str() + ")";
    }
};

inline Frac frac_pow(const Frac& a, std::uint32_t n) {
    Frac r = Frac::of(Poly::constant(a.num.pool() ? a.num.pool() : a.den.pool(), Q(1)));
    Frac base = a;
    while (n) {
        if (n & 1u) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}

// Substitute fractions for selected variables of a polynomial; variables not
// listed stay symbolic (inside the numerator).
inline Frac poly_subst_frac(const Poly& p, const std::map<VarId, Frac>& vals) {
    const VarPool* pool = p.pool();
    Frac acc = Frac::of(Poly(pool));
    for (const auto& [mono, coef] : p.terms()) {
        Frac term = Frac::of(Poly::constant(pool, coef));
        for (const auto& [v, e] : mono.e) {
            auto it = vals.find(v);
            if (it == vals.end())
                term = term * Frac::of(Poly::variable(pool, v).pow(e));
            else
                term = term * frac_pow(it->second, e);
        }
        acc = acc + term;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Gaussian elimination over the fraction field of K[params].

struct LinSolveResult {
    bool consistent = true;
    std::string failed_relation;          // set when inconsistent
    std::vector<Frac> particular;         // free variables set to zero
    std::vector<std::vector<Frac>> kernel;  // basis of the homogeneous solutions
    std::vector<std::size_t> free_columns;
    std::vector<std::string> genericity;  // pivots assumed nonzero (non-constant)
};

inline LinSolveResult linsolve_frac(std::vector<std::vector<Frac>> a, const VarPool* pool) {
    std::size_t rows = a.size();
    std::size_t cols = rows ? a[0].size() - 1 : 0;

    LinSolveResult out;
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        // Prefer constant (or pure field-element) pivots: no genericity needed.
        std::size_t best = rows;
        bool best_const = false;
        for (std::size_t i = r; i < rows; ++i) {
            if (a[i][c].is_zero()) continue;
            bool is_const = a[i][c].num.is_field_element() && a[i][c].den.is_field_element();
            if (best == rows || (is_const && !best_const)) {
                best = i;
                best_const = is_const;
                if (is_const) break;
            }
        }
        if (best == rows) continue;
        std::swap(a[r], a[best]);
        if (!best_const)
            out.genericity.push_back("pivot assumed nonzero: " + a[r][c].str());
        Frac inv = Frac::of(Poly::constant(pool, Q(1))) / a[r][c];
        for (std::size_t j = c; j <= cols; ++j) a[r][j] = a[r][j] * inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            Frac f = a[i][c];
            for (std::size_t j = c; j <= cols; ++j) a[i][j] = a[i][j] - f * a[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }
    // Inconsistency: zero row with nonzero right-hand side.
    for (std::size_t i = r; i < rows; ++i) {
        if (!a[i][cols].is_zero()) {
            out.consistent = false;
            out.failed_relation = "0 = " + a[i][cols].str();
            return out;
        }
    }
    Frac zero = Frac::of(Poly(pool));
    Frac one = Frac::of(Poly::constant(pool, Q(1)));
    out.particular.assign(cols, zero);
    for (std::size_t k = 0; k < pivot_col.size(); ++k)
        out.particular[pivot_col[k]] = a[k][cols];
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    for (std::size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        out.free_columns.push_back(c);
        std::vector<Frac> v(cols, zero);
        v[c] = one;
        for (std::size_t k = 0; k < pivot_col.size(); ++k) v[pivot_col[k]] = -a[k][c];
        out.kernel.push_back(std::move(v));
    }
    return out;
}

inline LinSolveResult linsolve(const PolyMatrix& mat, const PolyVector& rhs) {
    std::size_t rows = mat.size();
    std::size_t cols = rows ? mat[0].size() : 0;
    const VarPool* pool = nullptr;
    for (auto& row : mat)
        for (auto& p : row)
            if (p.pool()) pool = p.pool();
    for (auto& p : rhs)
        if (p.pool()) pool = p.pool();

    std::vector<std::vector<Frac>> a(rows, std::vector<Frac>(cols + 1));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) a[i][j] = Frac::of(mat[i][j]);
        a[i][cols] = Frac::of(rhs[i]);
    }
    return linsolve_frac(std::move(a), pool);
}

}  // namespace acilab
