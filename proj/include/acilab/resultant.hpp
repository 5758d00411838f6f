#pragma once
// Resultant of two polynomials with respect to one variable, as the
// determinant of the Sylvester matrix (fraction-free for larger sizes).

#include "acilab/linalg.hpp"
#include "acilab/poly.hpp"

namespace acilab {

inline Poly resultant(const Poly& p, const Poly& q, VarId v) {
    const VarPool* pool = p.pool() ? p.pool() : q.pool();
    std::int64_t m = p.degree_in(v), n = q.degree_in(v);
    if (p.is_zero() || q.is_zero()) return Poly(pool);
    if (m <= 0 && n <= 0) return Poly::constant(pool, Q(1));
    if (m <= 0) return p.pow(static_cast<std::uint32_t>(n));
    if (n <= 0) return q.pow(static_cast<std::uint32_t>(m));
    std::size_t size = static_cast<std::size_t>(m + n);
    PolyMatrix s = mat_zero(pool, size, size);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
        for (std::int64_t k = 0; k <= m; ++k)
            s[i][i + static_cast<std::size_t>(k)] =
                p.coeff_of(v, static_cast<std::uint32_t>(m - k));
    for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i)
        for (std::int64_t k = 0; k <= n; ++k)
            s[static_cast<std::size_t>(n) + i][i + static_cast<std::size_t>(k)] =
                q.coeff_of(v, static_cast<std::uint32_t>(n - k));
    return mat_det(s);
}

inline Poly discriminant(const Poly& p, VarId v) {
    return resultant(p, p.partial(v), v);
}

}  // namespace acilab
