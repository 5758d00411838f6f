#pragma once
// Poisson structures, Hamiltonian vector fields, bracket tables, Casimirs.

#include "acilab/linalg.hpp"

#include <array>
#include <string>
#include <vector>

namespace acilab {

// Gradient of a polynomial with respect to an ordered list of variables.
inline std::vector<Poly> grad(const Poly& h, const std::vector<VarId>& vars) {
    std::vector<Poly> g;
    g.reserve(vars.size());
    for (VarId v : vars) g.push_back(h.partial(v));
    return g;
}

// Hamiltonian vector field x' = J * grad(H).
inline std::vector<Poly> hamiltonian_vector_field(const PolyMatrix& j, const Poly& h,
                                                  const std::vector<VarId>& vars) {
    const std::size_t n = vars.size();
    std::vector<Poly> g = grad(h, vars);
    std::vector<Poly> f;
    f.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Poly acc(h.pool());
        for (std::size_t k = 0; k < n; ++k) acc = acc + j[i][k] * g[k];
        f.push_back(acc);
    }
    return f;
}

// Poisson bracket {F,G} = grad(F)^T J grad(G).
inline Poly poisson_bracket(const PolyMatrix& j, const Poly& f, const Poly& g,
                            const std::vector<VarId>& vars) {
    const std::size_t n = vars.size();
    std::vector<Poly> gf = grad(f, vars), gg = grad(g, vars);
    Poly acc(f.pool());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) acc = acc + gf[i] * j[i][k] * gg[k];
    return acc;
}

struct StructureViolation {
    std::size_t i = 0, j = 0, k = 0;  // indices involved (k unused for skew checks)
    Poly residual;
    std::string kind;  // "skew" or "jacobi"
};

// Skew-symmetry violations: entries of J + J^T that are nonzero.
inline std::vector<StructureViolation> check_skew(const PolyMatrix& j) {
    std::vector<StructureViolation> bad;
    const std::size_t n = j.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            Poly r = j[a][b] + j[b][a];
            if (!r.is_zero()) bad.push_back({a, b, 0, r, "skew"});
        }
    return bad;
}

// Jacobi identity violations. For every i<j<k the cyclic sum
//   sum_l ( J_li d_l J_jk + J_lj d_l J_ki + J_lk d_l J_ij )
// must vanish identically.
inline std::vector<StructureViolation> check_jacobi(const PolyMatrix& j,
                                                    const std::vector<VarId>& vars) {
    std::vector<StructureViolation> bad;
    const std::size_t n = j.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c) {
                Poly acc(j[a][b].pool());
                for (std::size_t l = 0; l < n; ++l) {
                    acc = acc + j[l][a] * j[b][c].partial(vars[l]);
                    acc = acc + j[l][b] * j[c][a].partial(vars[l]);
                    acc = acc + j[l][c] * j[a][b].partial(vars[l]);
                }
                if (!acc.is_zero()) bad.push_back({a, b, c, acc, "jacobi"});
            }
    return bad;
}

// Casimir check: J * grad(F) must vanish componentwise; returns the residual field.
inline std::vector<Poly> casimir_residual(const PolyMatrix& j, const Poly& f,
                                          const std::vector<VarId>& vars) {
    return hamiltonian_vector_field(j, f, vars);
}

inline bool is_casimir(const PolyMatrix& j, const Poly& f, const std::vector<VarId>& vars) {
    for (const Poly& r : casimir_residual(j, f, vars))
        if (!r.is_zero()) return false;
    return true;
}

// Pairwise bracket table of a list of invariants.
inline PolyMatrix involution_table(const PolyMatrix& j, const std::vector<Poly>& hs,
                                   const std::vector<VarId>& vars) {
    const std::size_t m = hs.size();
    PolyMatrix t(m, std::vector<Poly>());
    for (std::size_t a = 0; a < m; ++a) {
        t[a].reserve(m);
        for (std::size_t b = 0; b < m; ++b) t[a].push_back(poisson_bracket(j, hs[a], hs[b], vars));
    }
    return t;
}

inline bool involution_table_zero(const PolyMatrix& t) {
    for (const auto& row : t)
        for (const Poly& p : row)
            if (!p.is_zero()) return false;
    return true;
}

// Cubic obstruction whose vanishing admits the extra quadratic invariant of the
// six-parameter geodesic flow on SO(4).  Arguments are the six coefficients
// lambda_1..lambda_6 (index 1-based in the formula, 0-based here).
inline Q manakov_condition(const std::array<Q, 6>& l) {
    const Q &l1 = l[0], &l2 = l[1], &l3 = l[2], &l4 = l[3], &l5 = l[4], &l6 = l[5];
    return l1 * l6 * l4 + l1 * l2 * l5 - l1 * l2 * l4 + l3 * l6 * l5 - l3 * l6 * l4 -
           l3 * l2 * l5 + l4 * l2 * l5 + l4 * l1 * l3 - l4 * l1 * l5 + l6 * l2 * l3 -
           l6 * l2 * l5 - l1 * l6 * l3;
}

}  // namespace acilab
