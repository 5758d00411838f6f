#include <catch_amalgamated.hpp>

#include "acilab/catalog.hpp"
#include "acilab/hamsys.hpp"

using namespace acilab;

namespace {

PolyMatrix canonical_form(const VarPool* pool, std::size_t n) {
    PolyMatrix j = mat_zero(pool, 2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        j[i][n + i] = Poly::constant(pool, Q(1));
        j[n + i][i] = Poly::constant(pool, Q(-1));
    }
    return j;
}

}  // namespace

TEST_CASE("canonical two-form satisfies skew symmetry and the Jacobi identity") {
    VarPool pool;
    for (std::size_t n : {1u, 2u, 3u, 5u}) {
        std::vector<VarId> vars;
        for (std::size_t i = 0; i < 2 * n; ++i)
            vars.push_back(pool.intern("c" + std::to_string(n) + "_" + std::to_string(i)));
        PolyMatrix j = canonical_form(&pool, n);
        CHECK(check_skew(j).empty());
        CHECK(check_jacobi(j, vars).empty());
    }
}

TEST_CASE("every catalog structure matrix is a Poisson tensor") {
    for (const std::string& id : catalog_ids()) {
        INFO("entry " << id);
        PhaseSystem sys = catalog_load(id, /*validate=*/false);
        CHECK(check_skew(sys.J).empty());
        CHECK(check_jacobi(sys.J, sys.vars).empty());
    }
}

TEST_CASE("every catalog invariant family is in involution") {
    for (const std::string& id : catalog_ids()) {
        INFO("entry " << id);
        PhaseSystem sys = catalog_load(id, /*validate=*/false);
        std::vector<Poly> hs;
        for (auto& inv : sys.invariants) hs.push_back(inv.poly);
        PolyMatrix table = involution_table(sys.J, hs, sys.vars);
        REQUIRE(table.size() == hs.size());
        CHECK(involution_table_zero(table));
    }
}

TEST_CASE("declared casimirs annihilate the structure matrix") {
    std::size_t total = 0;
    for (const std::string& id : catalog_ids()) {
        INFO("entry " << id);
        PhaseSystem sys = catalog_load(id, /*validate=*/false);
        for (std::size_t ci : sys.casimir_indices()) {
            INFO("casimir " << sys.invariants[ci].name);
            CHECK(is_casimir(sys.J, sys.invariants[ci].poly, sys.vars));
            ++total;
        }
    }
    CHECK(total >= 14);  // at least one per degenerate structure, two per lattice
}

TEST_CASE("the flow field is the Hamiltonian field of the declared invariant") {
    for (const std::string& id : catalog_ids()) {
        INFO("entry " << id);
        PhaseSystem sys = catalog_load(id, /*validate=*/false);
        PolyVector f = hamiltonian_vector_field(sys.J, sys.hamiltonian_invariant().poly, sys.vars);
        REQUIRE(f.size() == sys.dim());
        for (std::size_t i = 0; i < f.size(); ++i) {
            INFO("component " << i + 1);
            CHECK((f[i] - sys.field[i]).is_zero());
        }
    }
}

TEST_CASE("poisson bracket is antisymmetric and satisfies Leibniz") {
    PhaseSystem sys = catalog_load("euler-so3", /*validate=*/false);
    VarPool& pool = *sys.pool;
    Poly m1 = Poly::variable(&pool, sys.vars[0]);
    Poly m2 = Poly::variable(&pool, sys.vars[1]);
    Poly m3 = Poly::variable(&pool, sys.vars[2]);

    Poly f = m1 * m2 + m3 * m3 * Q(2);
    Poly g = m2 * m2 * m3 - m1 * Q(5);
    Poly h = m1 + m2 + m3;

    CHECK((poisson_bracket(sys.J, f, g, sys.vars) + poisson_bracket(sys.J, g, f, sys.vars)).is_zero());
    Poly lhs = poisson_bracket(sys.J, f * g, h, sys.vars);
    Poly rhs = f * poisson_bracket(sys.J, g, h, sys.vars) + g * poisson_bracket(sys.J, f, h, sys.vars);
    CHECK((lhs - rhs).is_zero());

    // so(3) brackets of coordinates: {m1, m2} = -m3 cyclically.
    CHECK((poisson_bracket(sys.J, m1, m2, sys.vars) + m3).is_zero());
    CHECK((poisson_bracket(sys.J, m2, m3, sys.vars) + m1).is_zero());
    CHECK((poisson_bracket(sys.J, m3, m1, sys.vars) + m2).is_zero());
}

TEST_CASE("a skew matrix violating the Jacobi identity is caught") {
    VarPool pool;
    std::vector<VarId> v = {pool.intern("x1"), pool.intern("x2"), pool.intern("x3")};
    auto X = [&](std::size_t i) { return Poly::variable(&pool, v[i]); };
    // Axial field w = (x2, x3, x1): skew, but w . curl(w) = -x2 - x3 != 0.
    PolyMatrix j = mat_zero(&pool, 3, 3);
    j[0][1] = -X(0);  // -w3 = -x1
    j[1][0] = X(0);
    j[0][2] = X(2);  // w2 = x3
    j[2][0] = -X(2);
    j[1][2] = -X(1);  // -w1 = -x2
    j[2][1] = X(1);
    CHECK(check_skew(j).empty());
    std::vector<StructureViolation> bad = check_jacobi(j, v);
    REQUIRE(!bad.empty());
    CHECK(bad[0].kind == "jacobi");
    CHECK(!bad[0].residual.is_zero());
}

TEST_CASE("a non-skew matrix is caught before the Jacobi stage") {
    VarPool pool;
    std::vector<VarId> v = {pool.intern("x1"), pool.intern("x2"), pool.intern("x3")};
    PolyMatrix j = mat_zero(&pool, 3, 3);
    j[0][1] = Poly::variable(&pool, v[2]);
    j[1][0] = Poly::variable(&pool, v[2]);  // same sign: not skew
    std::vector<StructureViolation> bad = check_skew(j);
    REQUIRE(!bad.empty());
    CHECK(bad[0].kind == "skew");
}

TEST_CASE("diagonal metric obstruction vanishes exactly on the catalog geodesic flow") {
    PhaseSystem sys = catalog_load("so4-geodesic", /*validate=*/false);
    std::array<Q, 4> a;
    for (std::size_t i = 0; i < 4; ++i) {
        REQUIRE(sys.constants[i].name == "a" + std::to_string(i + 1));
        REQUIRE(sys.constants[i].value.has_value());
        a[i] = *sys.constants[i].value;
    }
    // Quadratic-form coefficients of the flow invariant, ordered as the
    // coordinates: pair sums a_i + a_j from the difference-quotient pencil.
    std::array<Q, 6> lam = {a[0] + a[3], a[1] + a[3], a[2] + a[3],
                            a[1] + a[2], a[0] + a[2], a[0] + a[1]};
    CHECK(manakov_condition(lam) == 0);
    CHECK(manakov_condition({Q(1), Q(2), Q(3), Q(4), Q(5), Q(7)}) != 0);
}
