#include <catch_amalgamated.hpp>

#include "acilab/catalog.hpp"

#include <set>

using namespace acilab;

TEST_CASE("every catalog entry loads and passes structure validation") {
    for (const std::string& id : catalog_ids()) {
        INFO("entry " << id);
        PhaseSystem sys = catalog_load(id);  // throws on any structure violation
        CHECK(sys.id == id);
        CHECK(sys.dim() >= 3);
        CHECK_NOTHROW(sys.hamiltonian_invariant());
        CHECK(validate_structure(sys).empty());
    }
}

TEST_CASE("catalog ids are unique and every family is represented") {
    std::set<std::string> ids(catalog_ids().begin(), catalog_ids().end());
    CHECK(ids.size() == catalog_ids().size());
    CHECK(ids.size() == 13);

    // Each family name matches at least one id (the lattice family matches
    // its three instantiated sizes).
    for (const CatalogFamily& fam : catalog_families()) {
        bool found = false;
        for (const std::string& id : ids) {
            if (fam.name == id) found = true;
            if (fam.name == "toda-N" && id.rfind("toda-", 0) == 0) found = true;
        }
        INFO("family " << fam.name);
        CHECK(found);
        CHECK(!fam.summary.empty());
    }
    CHECK(catalog_families().size() == 11);
}

TEST_CASE("serialize then reload is a fixed point") {
    for (const std::string& id : catalog_ids()) {
        INFO("entry " << id);
        PhaseSystem sys = catalog_load(id);
        std::string s1 = serialize(sys);
        PhaseSystem back = load_system_text(s1, id + " <roundtrip>");
        std::string s2 = serialize(back);
        CHECK(s1 == s2);
        CHECK(validate_structure(back).empty());
    }
}

TEST_CASE("lattice family instantiates at any size >= 3") {
    for (int n : {3, 4, 5, 7}) {
        PhaseSystem sys = toda_system(n);
        CHECK(sys.dim() == static_cast<std::size_t>(2 * n));
        // Invariants: H, trace, product, and the higher traces I2..In.
        CHECK(sys.invariants.size() == static_cast<std::size_t>(n + 2));
        CHECK(sys.casimir_indices().size() == 2);
        REQUIRE(sys.laxes.size() == 1);
        CHECK(sys.laxes[0].size == static_cast<std::size_t>(n));
        CHECK(validate_structure(sys).empty());
    }
    CHECK_THROWS_AS(toda_system(2), CatalogError);
}

TEST_CASE("unknown and malformed ids are rejected") {
    CHECK_THROWS_AS(catalog_load("no-such-system"), CatalogError);
    CHECK_THROWS_AS(catalog_load("toda-x"), CatalogError);
}

static const char* kTinyOk =
    "system tiny\n"
    "title A rotated oscillator\n"
    "vars q p\n"
    "field = p; -q\n"
    "J\n"
    "  0; 1\n"
    "  -1; 0\n"
    "end\n"
    "invariant H weight 2 = 1/2*q^2 + 1/2*p^2\n"
    "weights 1 1\n"
    "hamiltonian H\n";

TEST_CASE("malformed catalog text is rejected with a diagnostic") {
    CHECK_NOTHROW(load_system_text(kTinyOk));

    auto mutate = [](std::string text, const std::string& from, const std::string& to) {
        auto pos = text.find(from);
        REQUIRE(pos != std::string::npos);
        return text.replace(pos, from.size(), to);
    };
    std::string ok = kTinyOk;

    SECTION("unknown keyword") {
        CHECK_THROWS_WITH(load_system_text(mutate(ok, "title", "titel")),
                          Catch::Matchers::ContainsSubstring("unknown statement"));
    }
    SECTION("ragged structure matrix row") {
        CHECK_THROWS_WITH(load_system_text(mutate(ok, "0; 1", "0; 1; 2")),
                          Catch::Matchers::ContainsSubstring("row needs 2 entries"));
    }
    SECTION("field arity mismatch") {
        CHECK_THROWS_WITH(load_system_text(mutate(ok, "field = p; -q", "field = p")),
                          Catch::Matchers::ContainsSubstring("field component count"));
    }
    SECTION("weights arity mismatch") {
        CHECK_THROWS_WITH(load_system_text(mutate(ok, "weights 1 1", "weights 1")),
                          Catch::Matchers::ContainsSubstring("weights count"));
    }
    SECTION("missing hamiltonian") {
        CHECK_THROWS_WITH(load_system_text(mutate(ok, "hamiltonian H", "note n/a")),
                          Catch::Matchers::ContainsSubstring("missing 'hamiltonian'"));
    }
    SECTION("bad polynomial") {
        CHECK_THROWS_WITH(load_system_text(mutate(ok, "field = p; -q", "field = p; -q^")),
                          Catch::Matchers::ContainsSubstring("polynomial parse error"));
    }
    SECTION("hamiltonian must reproduce the field") {
        std::string broken = mutate(ok, "field = p; -q", "field = p; q");
        PhaseSystem sys = load_system_text(broken);
        std::vector<std::string> bad = validate_structure(sys);
        REQUIRE(!bad.empty());
        CHECK(bad[0].find("differs from J*grad") != std::string::npos);
    }
    SECTION("false casimir declaration is flagged") {
        std::string broken = mutate(ok, "invariant H weight 2", "invariant H casimir weight 2");
        PhaseSystem sys = load_system_text(broken);
        std::vector<std::string> bad = validate_structure(sys);
        bool flagged = false;
        for (auto& b : bad)
            if (b.find("not a casimir") != std::string::npos) flagged = true;
        CHECK(flagged);
    }
    SECTION("weight grading violations are flagged") {
        std::string broken = mutate(ok, "weights 1 1", "weights 1 2");
        PhaseSystem sys = load_system_text(broken);
        std::vector<std::string> bad = validate_structure(sys);
        CHECK(!bad.empty());
    }
}

TEST_CASE("notes, squares and constants survive a round trip") {
    std::string text =
        "system squares\n"
        "note first remark\n"
        "note second remark\n"
        "vars u v\n"
        "square i -1\n"
        "square r2 2\n"
        "square kap 1/2 r2\n"
        "constant mu weight 2 = 3/4\n"
        "field = v; -3/4*u\n"
        "J\n"
        "  0; 1\n"
        "  -1; 0\n"
        "end\n"
        "invariant E = 1/2*v^2 + 3/8*u^2\n"
        "hamiltonian E\n";
    PhaseSystem sys = load_system_text(text);
    CHECK(sys.notes.size() == 2);
    REQUIRE(sys.squares.size() == 3);
    CHECK(sys.squares[2].carrier == "r2");
    REQUIRE(sys.constants.size() == 1);
    CHECK(sys.constants[0].value == q_of(3, 4));
    CHECK(sys.constants[0].weight == 2);

    // kap^2 reduces to r2/2, then (kap^2)^2 to 1/2.
    VarPool& pool = *sys.pool;
    Poly kap = Poly::variable(&pool, *pool.lookup("kap"));
    Poly r2 = Poly::variable(&pool, *pool.lookup("r2"));
    CHECK((kap * kap - r2 * q_of(1, 2)).is_zero());
    CHECK((kap * kap * kap * kap - Poly::constant(&pool, q_of(1, 2))).is_zero());

    std::string s1 = serialize(sys);
    CHECK(serialize(load_system_text(s1)) == s1);
}
