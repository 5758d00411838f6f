#pragma once
// Catalog of integrable phase systems: a small line-oriented text format
// describing variables, constants, Poisson structure, invariants, Lax pairs,
// Laurent-balance data, divisor eliminations, pole ladders, algebraic curves
// and reduction maps.  Entries live as .sys files in the catalog data
// directory; the periodic lattice family is generated programmatically.
//
// Grammar (one statement per line, '#' starts a comment, blocks end with
// 'end'; see docs/catalog-format.md for the formal version):
//
//   system ID                      title TEXT            note TEXT
//   denominator INT                vars ID+              weights INT+
//   square ID RAT [ID]             constant ID [weight INT] [= RAT]
//   field = POLY ; POLY ; ...
//   J <m rows of m ';'-separated POLY> end
//   invariant ID [casimir] [weight INT] = POLY
//   hamiltonian ID
//   lax ID spectral (ID|none) bracket (AB|BA) size INT
//     A <rows> B <rows> end
//   balance ID ... end             divisor ID balance ID ... end
//   poles ID max INT ... end       curve ID x ID y ID genus INT kind KIND ... end
//   reduction TARGET-ID ... end

#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hamsys.hpp"
#include "linalg.hpp"
#include "poly.hpp"
#include "poly_io.hpp"
#include "rational.hpp"
#include "varpool.hpp"

namespace acilab {

struct CatalogError : std::runtime_error {
    explicit CatalogError(const std::string& m) : std::runtime_error(m) {}
};

struct SquareDecl {
    std::string name;
    Q factor;
    std::optional<std::string> carrier;
};

struct ConstantDecl {
    std::string name;
    std::optional<int> weight;
    std::optional<Q> value;
};

struct SystemInvariant {
    std::string name;
    Poly poly;
    bool casimir = false;
    std::optional<int> weight;
};

struct PinSpec {
    int step = 0;
    std::string param;
    std::string var;
};

struct SeriesCoeff {
    std::string var;
    int step = 0;
    Poly value;
};

struct BalanceEntry {
    std::string label;
    int d = 1;
    std::vector<int> tau_weights;
    std::vector<std::string> params;  // step-0 family parameters
    PolyVector x0;
    std::vector<int> spectrum;  // expected integer eigenvalues, with multiplicity
    std::vector<PinSpec> pins;
    int free_params = 0;
    std::vector<SeriesCoeff> series;                  // reference coefficients
    std::vector<std::pair<std::string, Poly>> t0;     // invariant name -> t^0 value
};

enum class DivisorMatch { Scaled, Exact, Inconsistent };

struct DivisorEntry {
    std::string name;
    std::string balance;
    int order = 8;
    std::vector<std::string> values;                       // c1, c2, ...
    std::vector<std::pair<std::string, int>> eliminate;    // (param, 1-based relation)
    int final_rel = 1;                                     // 1-based
    std::vector<std::pair<std::string, Q>> sets;           // post-substitutions
    Poly printed;
    std::optional<Poly> derived;
    DivisorMatch match = DivisorMatch::Scaled;
};

struct PoleEntry {
    std::string balance;
    int max_order = 1;
    std::vector<std::pair<std::string, Poly>> functions;
};

struct LaxEntry {
    std::string name;
    std::optional<std::string> spectral;  // pencil parameter, if any
    bool bracket_ab = true;               // true: Adot = AB - BA; false: Adot = BA - AB
    std::size_t size = 0;
    PolyMatrix A, B;
};

enum class CurveKind { Hyperelliptic, Covering, EllipticCover };

struct CurveEntry {
    std::string name;
    std::string x, y;
    int genus = 0;
    CurveKind kind = CurveKind::Hyperelliptic;
    std::optional<Poly> poly;  // covering: F(x,y) = 0
    std::optional<Poly> rhs;   // hyperelliptic / elliptic-cover: y^2 = rhs(x)
    std::optional<Poly> base;  // elliptic-cover: base curve w^2 = base(x)
};

struct ReductionEntry {
    std::string target;
    bool fields_match = true;  // whether flow intertwining is claimed
    std::vector<std::pair<std::string, Poly>> var_map;    // target var -> poly(source vars)
    std::vector<std::pair<std::string, Poly>> const_map;  // target const -> poly(source consts)
    std::vector<std::pair<std::string, Poly>> inv_checks; // target inv -> poly(source inv names)
};

struct PhaseSystem {
    std::string id;
    std::string title;
    std::vector<std::string> notes;

    std::unique_ptr<VarPool> pool;
    std::vector<std::string> var_names;
    std::vector<VarId> vars;
    std::vector<int> weights;  // empty when the system carries no grading
    std::vector<SquareDecl> squares;
    std::vector<ConstantDecl> constants;
    int series_denominator = 1;

    PolyVector field;
    PolyMatrix J;
    std::vector<SystemInvariant> invariants;
    std::string hamiltonian;

    std::vector<BalanceEntry> balances;
    std::vector<DivisorEntry> divisors;
    std::vector<PoleEntry> poles;
    std::vector<LaxEntry> laxes;
    std::vector<CurveEntry> curves;
    std::vector<ReductionEntry> reductions;

    std::size_t dim() const { return vars.size(); }

    const SystemInvariant* invariant(const std::string& name) const {
        for (auto& inv : invariants)
            if (inv.name == name) return &inv;
        return nullptr;
    }
    const SystemInvariant& hamiltonian_invariant() const {
        const SystemInvariant* inv = invariant(hamiltonian);
        if (!inv) throw CatalogError(id + ": hamiltonian '" + hamiltonian + "' not among invariants");
        return *inv;
    }
    std::vector<std::size_t> casimir_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < invariants.size(); ++i)
            if (invariants[i].casimir) out.push_back(i);
        return out;
    }
    const BalanceEntry* balance(const std::string& label) const {
        for (auto& b : balances)
            if (b.label == label) return &b;
        return nullptr;
    }
    const CurveEntry* curve(const std::string& name) const {
        for (auto& c : curves)
            if (c.name == name) return &c;
        return nullptr;
    }
    std::optional<VarId> var_id(const std::string& name) const {
        for (std::size_t i = 0; i < var_names.size(); ++i)
            if (var_names[i] == name) return vars[i];
        return std::nullopt;
    }
    std::optional<std::size_t> var_index(const std::string& name) const {
        for (std::size_t i = 0; i < var_names.size(); ++i)
            if (var_names[i] == name) return i;
        return std::nullopt;
    }
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace catalog_detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_char(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(strip(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(strip(cur));
    return out;
}

// Payload after the first '=' on the line.
inline std::string after_eq(const std::string& line, const std::string& what) {
    std::size_t p = line.find('=');
    if (p == std::string::npos) throw CatalogError("expected '=' in " + what + " line: " + line);
    return strip(line.substr(p + 1));
}

class Reader {
  public:
    explicit Reader(std::istream& in) : in_(in) {}

    // Next significant line (comments/blanks skipped); false at EOF.
    bool next(std::string& line) {
        std::string raw;
        while (std::getline(in_, raw)) {
            ++lineno_;
            std::size_t hash = raw.find('#');
            if (hash != std::string::npos) raw = raw.substr(0, hash);
            raw = strip(raw);
            if (raw.empty()) continue;
            line = raw;
            return true;
        }
        return false;
    }
    int lineno() const { return lineno_; }

  private:
    std::istream& in_;
    int lineno_ = 0;
};

}  // namespace catalog_detail

inline PhaseSystem load_system_stream(std::istream& in, const std::string& origin) {
    using namespace catalog_detail;
    PhaseSystem sys;
    sys.pool = std::make_unique<VarPool>();
    VarPool& pool = *sys.pool;
    Reader rd(in);

    auto fail = [&](const std::string& msg) -> void {
        throw CatalogError(origin + ":" + std::to_string(rd.lineno()) + ": " + msg);
    };
    auto parse = [&](const std::string& text) -> Poly {
        try {
            return parse_poly(pool, text);
        } catch (const std::exception& e) {
            fail(std::string("polynomial parse error: ") + e.what() + " in: " + text);
            throw;  // unreachable
        }
    };
    auto parse_int = [&](const std::string& t) -> int {
        try {
            std::size_t used = 0;
            int v = std::stoi(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::exception&) {
            fail("expected integer, got '" + t + "'");
            throw;
        }
    };
    auto parse_rat = [&](const std::string& t) -> Q {
        std::optional<Q> q = parse_rational(t);
        if (!q) fail("expected rational, got '" + t + "'");
        return *q;
    };

    std::string line;
    bool need_line = true;
    bool have_line = false;
    while (true) {
        if (need_line) {
            have_line = rd.next(line);
            if (!have_line) break;
        }
        need_line = true;
        std::vector<std::string> tok = split_ws(line);
        const std::string& kw = tok[0];

        if (kw == "system") {
            if (tok.size() != 2) fail("system needs exactly one id");
            sys.id = tok[1];
        } else if (kw == "title") {
            sys.title = strip(line.substr(5));
        } else if (kw == "note") {
            sys.notes.push_back(strip(line.substr(4)));
        } else if (kw == "denominator") {
            if (tok.size() != 2) fail("denominator needs one integer");
            sys.series_denominator = parse_int(tok[1]);
            if (sys.series_denominator != 1 && sys.series_denominator != 2)
                fail("series denominator must be 1 or 2");
        } else if (kw == "vars") {
            if (tok.size() < 2) fail("vars needs at least one identifier");
            for (std::size_t i = 1; i < tok.size(); ++i) {
                sys.var_names.push_back(tok[i]);
                sys.vars.push_back(pool.intern(tok[i]));
            }
        } else if (kw == "square") {
            if (tok.size() != 3 && tok.size() != 4) fail("square ID RAT [carrier]");
            VarId id = pool.intern(tok[1]);
            Q factor = parse_rat(tok[2]);
            if (tok.size() == 4) {
                VarId carrier = pool.intern(tok[3]);
                pool.set_square(id, factor, carrier);
                sys.squares.push_back({tok[1], factor, tok[3]});
            } else {
                pool.set_square(id, factor);
                sys.squares.push_back({tok[1], factor, std::nullopt});
            }
        } else if (kw == "constant") {
            if (tok.size() < 2) fail("constant needs a name");
            ConstantDecl c;
            c.name = tok[1];
            pool.intern(c.name);
            for (std::size_t i = 2; i < tok.size();) {
                if (tok[i] == "weight" && i + 1 < tok.size()) {
                    c.weight = parse_int(tok[i + 1]);
                    i += 2;
                } else if (tok[i] == "=" && i + 1 < tok.size()) {
                    c.value = parse_rat(tok[i + 1]);
                    i += 2;
                } else {
                    fail("bad constant attribute '" + tok[i] + "'");
                }
            }
            sys.constants.push_back(std::move(c));
        } else if (kw == "weights") {
            if (tok.size() != sys.vars.size() + 1) fail("weights count must equal vars count");
            for (std::size_t i = 1; i < tok.size(); ++i) sys.weights.push_back(parse_int(tok[i]));
        } else if (kw == "field") {
            for (const std::string& part : split_char(after_eq(line, "field"), ';'))
                sys.field.push_back(parse(part));
            if (sys.field.size() != sys.vars.size()) fail("field component count must equal vars count");
        } else if (kw == "J") {
            const std::size_t m = sys.vars.size();
            if (m == 0) fail("J before vars");
            for (std::size_t r = 0; r < m; ++r) {
                if (!rd.next(line)) fail("unexpected EOF inside J block");
                std::vector<std::string> cells = split_char(line, ';');
                if (cells.size() != m) fail("J row needs " + std::to_string(m) + " entries");
                PolyVector row;
                for (auto& cell : cells) row.push_back(parse(cell));
                sys.J.push_back(std::move(row));
            }
            if (!rd.next(line) || line != "end") fail("J block must end with 'end'");
        } else if (kw == "invariant") {
            SystemInvariant inv;
            std::size_t i = 1;
            if (i >= tok.size()) fail("invariant needs a name");
            inv.name = tok[i++];
            while (i < tok.size() && tok[i] != "=") {
                if (tok[i] == "casimir") {
                    inv.casimir = true;
                    ++i;
                } else if (tok[i] == "weight" && i + 1 < tok.size()) {
                    inv.weight = parse_int(tok[i + 1]);
                    i += 2;
                } else {
                    fail("bad invariant attribute '" + tok[i] + "'");
                }
            }
            inv.poly = parse(after_eq(line, "invariant"));
            sys.invariants.push_back(std::move(inv));
        } else if (kw == "hamiltonian") {
            if (tok.size() != 2) fail("hamiltonian needs one invariant name");
            sys.hamiltonian = tok[1];
        } else if (kw == "lax") {
            // lax ID spectral (ID|none) bracket (AB|BA) size INT
            LaxEntry lx;
            if (tok.size() != 8 || tok[2] != "spectral" || tok[4] != "bracket" || tok[6] != "size")
                fail("lax header: lax ID spectral ID|none bracket AB|BA size INT");
            lx.name = tok[1];
            if (tok[3] != "none") {
                lx.spectral = tok[3];
                pool.intern(tok[3]);
            }
            if (tok[5] == "AB")
                lx.bracket_ab = true;
            else if (tok[5] == "BA")
                lx.bracket_ab = false;
            else
                fail("lax bracket must be AB or BA");
            lx.size = static_cast<std::size_t>(parse_int(tok[7]));
            auto read_matrix = [&](const std::string& tag, PolyMatrix& M) {
                if (!rd.next(line) || line != tag) fail("lax block expects '" + tag + "' row marker");
                for (std::size_t r = 0; r < lx.size; ++r) {
                    if (!rd.next(line)) fail("unexpected EOF in lax matrix");
                    std::vector<std::string> cells = split_char(line, ';');
                    if (cells.size() != lx.size) fail("lax row needs " + std::to_string(lx.size) + " entries");
                    PolyVector row;
                    for (auto& cell : cells) row.push_back(parse(cell));
                    M.push_back(std::move(row));
                }
            };
            read_matrix("A", lx.A);
            read_matrix("B", lx.B);
            if (!rd.next(line) || line != "end") fail("lax block must end with 'end'");
            sys.laxes.push_back(std::move(lx));
        } else if (kw == "balance") {
            if (tok.size() != 2) fail("balance needs a label");
            BalanceEntry b;
            b.label = tok[1];
            b.d = sys.series_denominator;
            while (rd.next(line)) {
                std::vector<std::string> bt = split_ws(line);
                if (bt[0] == "end") break;
                if (bt[0] == "d") {
                    b.d = parse_int(bt.at(1));
                } else if (bt[0] == "tau-weights") {
                    if (bt.size() != sys.vars.size() + 1) fail("tau-weights count must equal vars count");
                    b.tau_weights.clear();
                    for (std::size_t i = 1; i < bt.size(); ++i) b.tau_weights.push_back(parse_int(bt[i]));
                } else if (bt[0] == "param") {
                    for (std::size_t i = 1; i < bt.size(); ++i) {
                        pool.intern(bt[i]);
                        b.params.push_back(bt[i]);
                    }
                } else if (bt[0] == "x0") {
                    for (const std::string& part : split_char(after_eq(line, "x0"), ';'))
                        b.x0.push_back(parse(part));
                    if (b.x0.size() != sys.vars.size()) fail("x0 component count must equal vars count");
                } else if (bt[0] == "spectrum") {
                    for (std::size_t i = 1; i < bt.size(); ++i) b.spectrum.push_back(parse_int(bt[i]));
                } else if (bt[0] == "pin") {
                    if (bt.size() != 4) fail("pin STEP PARAM VAR");
                    PinSpec pin;
                    pin.step = parse_int(bt[1]);
                    pin.param = bt[2];
                    pin.var = bt[3];
                    pool.intern(pin.param);
                    b.pins.push_back(std::move(pin));
                } else if (bt[0] == "free-params") {
                    b.free_params = parse_int(bt.at(1));
                } else if (bt[0] == "series") {
                    if (bt.size() < 4) fail("series VAR STEP = POLY");
                    SeriesCoeff sc;
                    sc.var = bt[1];
                    sc.step = parse_int(bt[2]);
                    sc.value = parse(after_eq(line, "series"));
                    b.series.push_back(std::move(sc));
                } else if (bt[0] == "t0") {
                    if (bt.size() < 3) fail("t0 INV = POLY");
                    b.t0.emplace_back(bt[1], parse(after_eq(line, "t0")));
                } else {
                    fail("unknown balance statement '" + bt[0] + "'");
                }
            }
            sys.balances.push_back(std::move(b));
        } else if (kw == "divisor") {
            if (tok.size() != 4 || tok[2] != "balance") fail("divisor NAME balance LABEL");
            DivisorEntry dv;
            dv.name = tok[1];
            dv.balance = tok[3];
            while (rd.next(line)) {
                std::vector<std::string> dt = split_ws(line);
                if (dt[0] == "end") break;
                if (dt[0] == "order") {
                    dv.order = parse_int(dt.at(1));
                } else if (dt[0] == "values") {
                    for (std::size_t i = 1; i < dt.size(); ++i) {
                        pool.intern(dt[i]);
                        dv.values.push_back(dt[i]);
                    }
                } else if (dt[0] == "eliminate") {
                    if (dt.size() != 3) fail("eliminate PARAM REL-INDEX");
                    dv.eliminate.emplace_back(dt[1], parse_int(dt[2]));
                } else if (dt[0] == "final") {
                    dv.final_rel = parse_int(dt.at(1));
                } else if (dt[0] == "set") {
                    if (dt.size() != 3) fail("set IDENT RATIONAL");
                    dv.sets.emplace_back(dt[1], parse_rat(dt[2]));
                } else if (dt[0] == "printed") {
                    dv.printed = parse(after_eq(line, "printed"));
                } else if (dt[0] == "derived") {
                    dv.derived = parse(after_eq(line, "derived"));
                } else if (dt[0] == "match") {
                    if (dt.size() != 2) fail("match scaled|exact|inconsistent");
                    if (dt[1] == "scaled")
                        dv.match = DivisorMatch::Scaled;
                    else if (dt[1] == "exact")
                        dv.match = DivisorMatch::Exact;
                    else if (dt[1] == "inconsistent")
                        dv.match = DivisorMatch::Inconsistent;
                    else
                        fail("match scaled|exact|inconsistent");
                } else {
                    fail("unknown divisor statement '" + dt[0] + "'");
                }
            }
            sys.divisors.push_back(std::move(dv));
        } else if (kw == "poles") {
            if (tok.size() != 4 || tok[2] != "max") fail("poles BALANCE max INT");
            PoleEntry pe;
            pe.balance = tok[1];
            pe.max_order = parse_int(tok[3]);
            while (rd.next(line)) {
                if (line == "end") break;
                std::vector<std::string> pt = split_ws(line);
                if (pt.size() < 3 || pt[1] != "=") fail("pole function line: NAME = POLY");
                pe.functions.emplace_back(pt[0], parse(after_eq(line, "poles")));
            }
            sys.poles.push_back(std::move(pe));
        } else if (kw == "curve") {
            // curve NAME x ID y ID genus INT kind KIND
            if (tok.size() != 10 || tok[2] != "x" || tok[4] != "y" || tok[6] != "genus" || tok[8] != "kind")
                fail("curve NAME x ID y ID genus INT kind KIND");
            CurveEntry cv;
            cv.name = tok[1];
            cv.x = tok[3];
            cv.y = tok[5];
            pool.intern(cv.x);
            pool.intern(cv.y);
            cv.genus = parse_int(tok[7]);
            if (tok[9] == "hyperelliptic")
                cv.kind = CurveKind::Hyperelliptic;
            else if (tok[9] == "covering")
                cv.kind = CurveKind::Covering;
            else if (tok[9] == "elliptic-cover")
                cv.kind = CurveKind::EllipticCover;
            else
                fail("curve kind hyperelliptic|covering|elliptic-cover");
            while (rd.next(line)) {
                std::vector<std::string> ct = split_ws(line);
                if (ct[0] == "end") break;
                if (ct[0] == "poly")
                    cv.poly = parse(after_eq(line, "curve poly"));
                else if (ct[0] == "rhs")
                    cv.rhs = parse(after_eq(line, "curve rhs"));
                else if (ct[0] == "base")
                    cv.base = parse(after_eq(line, "curve base"));
                else
                    fail("unknown curve statement '" + ct[0] + "'");
            }
            sys.curves.push_back(std::move(cv));
        } else if (kw == "reduction") {
            if (tok.size() != 2) fail("reduction TARGET-ID");
            ReductionEntry re;
            re.target = tok[1];
            while (rd.next(line)) {
                std::vector<std::string> rt = split_ws(line);
                if (rt[0] == "end") break;
                if (rt[0] == "fields") {
                    if (rt.size() != 2 || (rt[1] != "match" && rt[1] != "skip")) fail("fields match|skip");
                    re.fields_match = (rt[1] == "match");
                } else if (rt[0] == "map") {
                    re.var_map.emplace_back(rt.at(1), parse(after_eq(line, "map")));
                } else if (rt[0] == "pmap") {
                    re.const_map.emplace_back(rt.at(1), parse(after_eq(line, "pmap")));
                } else if (rt[0] == "invcheck") {
                    re.inv_checks.emplace_back(rt.at(1), parse(after_eq(line, "invcheck")));
                } else {
                    fail("unknown reduction statement '" + rt[0] + "'");
                }
            }
            sys.reductions.push_back(std::move(re));
        } else {
            fail("unknown statement '" + kw + "'");
        }
    }

    if (sys.id.empty()) throw CatalogError(origin + ": missing 'system' line");
    if (sys.vars.empty()) throw CatalogError(origin + ": missing 'vars' line");
    if (sys.field.empty()) throw CatalogError(origin + ": missing 'field' line");
    if (sys.J.empty()) throw CatalogError(origin + ": missing 'J' block");
    if (sys.hamiltonian.empty()) throw CatalogError(origin + ": missing 'hamiltonian' line");
    return sys;
}

inline PhaseSystem load_system_text(const std::string& text, const std::string& origin = "<text>") {
    std::istringstream in(text);
    return load_system_stream(in, origin);
}

inline PhaseSystem load_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CatalogError("cannot open catalog file: " + path);
    return load_system_stream(in, path);
}

// ---------------------------------------------------------------------------
// Serialization (canonical form; load(serialize(s)) is structurally identical)
// ---------------------------------------------------------------------------

inline std::string serialize(const PhaseSystem& sys) {
    std::ostringstream out;
    out << "system " << sys.id << "\n";
    if (!sys.title.empty()) out << "title " << sys.title << "\n";
    for (auto& n : sys.notes) out << "note " << n << "\n";
    if (sys.series_denominator != 1) out << "denominator " << sys.series_denominator << "\n";
    out << "vars";
    for (auto& v : sys.var_names) out << " " << v;
    out << "\n";
    for (auto& sq : sys.squares) {
        out << "square " << sq.name << " " << q_str(sq.factor);
        if (sq.carrier) out << " " << *sq.carrier;
        out << "\n";
    }
    for (auto& c : sys.constants) {
        out << "constant " << c.name;
        if (c.weight) out << " weight " << *c.weight;
        if (c.value) out << " = " << q_str(*c.value);
        out << "\n";
    }
    if (!sys.weights.empty()) {
        out << "weights";
        for (int w : sys.weights) out << " " << w;
        out << "\n";
    }
    out << "field =";
    for (std::size_t i = 0; i < sys.field.size(); ++i) out << (i ? " ; " : " ") << print_poly(sys.field[i]);
    out << "\n";
    out << "J\n";
    for (auto& row : sys.J) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " ; " : "") << print_poly(row[i]);
        out << "\n";
    }
    out << "end\n";
    for (auto& inv : sys.invariants) {
        out << "invariant " << inv.name;
        if (inv.casimir) out << " casimir";
        if (inv.weight) out << " weight " << *inv.weight;
        out << " = " << print_poly(inv.poly) << "\n";
    }
    out << "hamiltonian " << sys.hamiltonian << "\n";
    for (auto& lx : sys.laxes) {
        out << "lax " << lx.name << " spectral " << (lx.spectral ? *lx.spectral : std::string("none"))
            << " bracket " << (lx.bracket_ab ? "AB" : "BA") << " size " << lx.size << "\n";
        out << "A\n";
        for (auto& row : lx.A) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " ; " : "") << print_poly(row[i]);
            out << "\n";
        }
        out << "B\n";
        for (auto& row : lx.B) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " ; " : "") << print_poly(row[i]);
            out << "\n";
        }
        out << "end\n";
    }
    for (auto& b : sys.balances) {
        out << "balance " << b.label << "\n";
        out << "d " << b.d << "\n";
        out << "tau-weights";
        for (int w : b.tau_weights) out << " " << w;
        out << "\n";
        if (!b.params.empty()) {
            out << "param";
            for (auto& p : b.params) out << " " << p;
            out << "\n";
        }
        out << "x0 =";
        for (std::size_t i = 0; i < b.x0.size(); ++i) out << (i ? " ; " : " ") << print_poly(b.x0[i]);
        out << "\n";
        out << "spectrum";
        for (int s : b.spectrum) out << " " << s;
        out << "\n";
        for (auto& pin : b.pins) out << "pin " << pin.step << " " << pin.param << " " << pin.var << "\n";
        out << "free-params " << b.free_params << "\n";
        for (auto& sc : b.series)
            out << "series " << sc.var << " " << sc.step << " = " << print_poly(sc.value) << "\n";
        for (auto& [inv, val] : b.t0) out << "t0 " << inv << " = " << print_poly(val) << "\n";
        out << "end\n";
    }
    for (auto& dv : sys.divisors) {
        out << "divisor " << dv.name << " balance " << dv.balance << "\n";
        out << "order " << dv.order << "\n";
        if (!dv.values.empty()) {
            out << "values";
            for (auto& v : dv.values) out << " " << v;
            out << "\n";
        }
        for (auto& [p, r] : dv.eliminate) out << "eliminate " << p << " " << r << "\n";
        out << "final " << dv.final_rel << "\n";
        for (auto& [p, q] : dv.sets) out << "set " << p << " " << q_str(q) << "\n";
        out << "printed = " << print_poly(dv.printed) << "\n";
        if (dv.derived) out << "derived = " << print_poly(*dv.derived) << "\n";
        out << "match "
            << (dv.match == DivisorMatch::Scaled       ? "scaled"
                : dv.match == DivisorMatch::Exact      ? "exact"
                                                       : "inconsistent")
            << "\n";
        out << "end\n";
    }
    for (auto& pe : sys.poles) {
        out << "poles " << pe.balance << " max " << pe.max_order << "\n";
        for (auto& [n, p] : pe.functions) out << n << " = " << print_poly(p) << "\n";
        out << "end\n";
    }
    for (auto& cv : sys.curves) {
        out << "curve " << cv.name << " x " << cv.x << " y " << cv.y << " genus " << cv.genus << " kind "
            << (cv.kind == CurveKind::Hyperelliptic ? "hyperelliptic"
                : cv.kind == CurveKind::Covering    ? "covering"
                                                    : "elliptic-cover")
            << "\n";
        if (cv.poly) out << "poly = " << print_poly(*cv.poly) << "\n";
        if (cv.rhs) out << "rhs = " << print_poly(*cv.rhs) << "\n";
        if (cv.base) out << "base = " << print_poly(*cv.base) << "\n";
        out << "end\n";
    }
    for (auto& re : sys.reductions) {
        out << "reduction " << re.target << "\n";
        out << "fields " << (re.fields_match ? "match" : "skip") << "\n";
        for (auto& [v, p] : re.var_map) out << "map " << v << " = " << print_poly(p) << "\n";
        for (auto& [v, p] : re.const_map) out << "pmap " << v << " = " << print_poly(p) << "\n";
        for (auto& [v, p] : re.inv_checks) out << "invcheck " << v << " = " << print_poly(p) << "\n";
        out << "end\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Structure validation: exact self-checks every entry must pass on load.
// ---------------------------------------------------------------------------

inline int weighted_degree(const Poly& p, const std::map<VarId, int>& w) {
    // Maximum weighted monomial degree; 0 for a constant.
    if (p.is_zero()) return 0;
    bool first = true;
    long best = 0;
    for (auto& [m, c] : p.terms()) {
        long d = 0;
        for (auto& [v, k] : m.e) {
            auto it = w.find(v);
            if (it != w.end()) d += static_cast<long>(it->second) * k;
        }
        if (first || d > best) best = d;
        first = false;
    }
    return static_cast<int>(best);
}

inline bool is_weight_homogeneous(const Poly& p, const std::map<VarId, int>& w, int expected) {
    for (auto& [m, c] : p.terms()) {
        long d = 0;
        for (auto& [v, k] : m.e) {
            auto it = w.find(v);
            if (it != w.end()) d += static_cast<long>(it->second) * k;
        }
        if (d != expected) return false;
    }
    return true;
}

inline std::vector<std::string> validate_structure(const PhaseSystem& sys) {
    std::vector<std::string> bad;
    const std::size_t m = sys.dim();
    if (sys.J.size() != m) {
        bad.push_back("J is not " + std::to_string(m) + "x" + std::to_string(m));
        return bad;
    }
    for (auto& row : sys.J)
        if (row.size() != m) {
            bad.push_back("J has a ragged row");
            return bad;
        }

    auto viol = [&](const StructureViolation& v) {
        return v.kind + " violation at (" + std::to_string(v.i) + "," + std::to_string(v.j) + "," +
               std::to_string(v.k) + ")";
    };
    for (auto& v : check_skew(sys.J)) bad.push_back(sys.id + ": " + viol(v));
    for (auto& v : check_jacobi(sys.J, sys.vars)) bad.push_back(sys.id + ": " + viol(v));

    const SystemInvariant* ham = sys.invariant(sys.hamiltonian);
    if (!ham) {
        bad.push_back(sys.id + ": hamiltonian '" + sys.hamiltonian + "' is not an invariant");
    } else {
        PolyVector f = hamiltonian_vector_field(sys.J, ham->poly, sys.vars);
        for (std::size_t i = 0; i < m; ++i)
            if (!(f[i] - sys.field[i]).is_zero())
                bad.push_back(sys.id + ": field component " + std::to_string(i + 1) +
                              " differs from J*grad(" + sys.hamiltonian + ")");
    }

    for (auto& inv : sys.invariants) {
        if (inv.casimir) {
            PolyVector r = casimir_residual(sys.J, inv.poly, sys.vars);
            for (std::size_t i = 0; i < m; ++i)
                if (!r[i].is_zero()) {
                    bad.push_back(sys.id + ": declared casimir " + inv.name + " is not a casimir");
                    break;
                }
        }
    }

    // Full pairwise involution table.
    std::vector<Poly> hs;
    for (auto& inv : sys.invariants) hs.push_back(inv.poly);
    PolyMatrix table = involution_table(sys.J, hs, sys.vars);
    for (std::size_t i = 0; i < table.size(); ++i)
        for (std::size_t j = 0; j < table[i].size(); ++j)
            if (!table[i][j].is_zero())
                bad.push_back(sys.id + ": invariants " + sys.invariants[i].name + ", " +
                              sys.invariants[j].name + " are not in involution");

    // Grading: field raises weight by the time-weight 1, invariants match
    // their declared weights (constants contribute their declared weights).
    if (!sys.weights.empty()) {
        std::map<VarId, int> w;
        for (std::size_t i = 0; i < m; ++i) w[sys.vars[i]] = sys.weights[i];
        for (auto& c : sys.constants)
            if (c.weight) w[*sys.pool->lookup(c.name)] = *c.weight;
        for (std::size_t i = 0; i < m; ++i)
            if (!sys.field[i].is_zero() && !is_weight_homogeneous(sys.field[i], w, sys.weights[i] + 1))
                bad.push_back(sys.id + ": field component " + std::to_string(i + 1) +
                              " is not weight homogeneous of degree " + std::to_string(sys.weights[i] + 1));
        for (auto& inv : sys.invariants)
            if (inv.weight && !is_weight_homogeneous(inv.poly, w, *inv.weight))
                bad.push_back(sys.id + ": invariant " + inv.name + " is not weight homogeneous of degree " +
                              std::to_string(*inv.weight));
    }

    // Balance block shape checks (cheap; analytic content is exercised by the
    // Laurent engine).
    for (auto& b : sys.balances) {
        if (b.tau_weights.size() != m) bad.push_back(sys.id + ": balance " + b.label + " tau-weights size");
        if (b.x0.size() != m) bad.push_back(sys.id + ": balance " + b.label + " x0 size");
        if (b.spectrum.size() != m) bad.push_back(sys.id + ": balance " + b.label + " spectrum size");
        for (auto& pin : b.pins)
            if (!sys.var_id(pin.var))
                bad.push_back(sys.id + ": balance " + b.label + " pins unknown variable " + pin.var);
    }
    for (auto& dv : sys.divisors)
        if (!sys.balance(dv.balance)) bad.push_back(sys.id + ": divisor " + dv.name + " references unknown balance");
    for (auto& pe : sys.poles)
        if (!sys.balance(pe.balance)) bad.push_back(sys.id + ": poles block references unknown balance");
    for (auto& lx : sys.laxes)
        if (lx.A.size() != lx.size || lx.B.size() != lx.size)
            bad.push_back(sys.id + ": lax " + lx.name + " matrix size mismatch");
    return bad;
}

// ---------------------------------------------------------------------------
// Periodic lattice family (generated, not stored as text)
// ---------------------------------------------------------------------------

inline PhaseSystem toda_system(int n) {
    if (n < 3) throw CatalogError("toda requires N >= 3");
    PhaseSystem sys;
    sys.id = "toda-" + std::to_string(n);
    sys.title = "Periodic exponential lattice with " + std::to_string(n) +
                " sites in reduced off-diagonal coordinates";
    sys.notes.push_back("Off-diagonal coordinates a_i, diagonal coordinates b_i; all spectral");
    sys.notes.push_back("invariants I_k = tr(A^k)/k of the symmetric periodic Lax matrix commute.");
    sys.pool = std::make_unique<VarPool>();
    VarPool& pool = *sys.pool;
    const std::size_t N = static_cast<std::size_t>(n);

    std::vector<VarId> a(N), b(N);
    for (std::size_t i = 0; i < N; ++i) {
        sys.var_names.push_back("a" + std::to_string(i + 1));
        a[i] = pool.intern(sys.var_names.back());
        sys.vars.push_back(a[i]);
    }
    for (std::size_t i = 0; i < N; ++i) {
        sys.var_names.push_back("b" + std::to_string(i + 1));
        b[i] = pool.intern(sys.var_names.back());
        sys.vars.push_back(b[i]);
    }
    auto V = [&](VarId v) { return Poly::variable(&pool, v); };

    // Field: da_i = a_i (b_{i+1} - b_i), db_i = 2 (a_i^2 - a_{i-1}^2).
    for (std::size_t i = 0; i < N; ++i) sys.field.push_back(V(a[i]) * (V(b[(i + 1) % N]) - V(b[i])));
    for (std::size_t i = 0; i < N; ++i)
        sys.field.push_back((V(a[i]) * V(a[i]) - V(a[(i + N - 1) % N]) * V(a[(i + N - 1) % N])) * Q(2));

    // Poisson tensor: {a_i, b_j} = -a_i (delta_ij - delta_{i+1,j}) / 4.
    sys.J.assign(2 * N, PolyVector(2 * N, Poly(&pool)));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            Q coef(0);
            if (i == j) coef -= Q(1, 4);
            if ((i + 1) % N == j) coef += Q(1, 4);
            if (coef != 0) {
                Poly e = V(a[i]) * coef;
                sys.J[i][N + j] = e;
                sys.J[N + j][i] = -e;
            }
        }

    // Lax matrices: A symmetric periodic tridiagonal, B its skew part.
    PolyMatrix A(N, PolyVector(N, Poly(&pool))), B(N, PolyVector(N, Poly(&pool)));
    for (std::size_t i = 0; i < N; ++i) {
        A[i][i] = V(b[i]);
        A[i][(i + 1) % N] += V(a[i]);
        A[(i + 1) % N][i] += V(a[i]);
        B[i][(i + 1) % N] += V(a[i]);
        B[(i + 1) % N][i] -= V(a[i]);
    }

    // Invariants: I_k = tr(A^k)/k, the product of off-diagonal coordinates,
    // and the quadratic flow hamiltonian H = 4 I_2.
    PolyMatrix Ak = A;
    std::vector<Poly> I(static_cast<std::size_t>(n));
    I[0] = mat_trace(Ak);
    for (int k = 2; k <= n; ++k) {
        Ak = mat_mul(Ak, A);
        Poly t = mat_trace(Ak);
        t /= Q(k);
        I[static_cast<std::size_t>(k - 1)] = t;
    }
    Poly prod = Poly::constant(&pool, Q(1));
    for (std::size_t i = 0; i < N; ++i) prod = prod * V(a[i]);
    Poly H(&pool);
    for (std::size_t i = 0; i < N; ++i) H += V(b[i]) * V(b[i]) * Q(2) + V(a[i]) * V(a[i]) * Q(4);

    sys.invariants.push_back({"H", H, false, std::nullopt});
    sys.invariants.push_back({"I1", I[0], true, std::nullopt});
    sys.invariants.push_back({"Pa", prod, true, std::nullopt});
    for (int k = 2; k <= n; ++k)
        sys.invariants.push_back({"I" + std::to_string(k), I[static_cast<std::size_t>(k - 1)], false, std::nullopt});
    sys.hamiltonian = "H";

    LaxEntry lx;
    lx.name = "periodic";
    lx.spectral = std::nullopt;
    lx.bracket_ab = false;  // Adot = [B, A]
    lx.size = N;
    lx.A = std::move(A);
    lx.B = std::move(B);
    sys.laxes.push_back(std::move(lx));
    return sys;
}

// ---------------------------------------------------------------------------
// Loading by id
// ---------------------------------------------------------------------------

inline std::string catalog_dir() {
    if (const char* env = std::getenv("ACILAB_CATALOG_DIR")) return env;
#ifdef ACILAB_CATALOG_DIR
    return ACILAB_CATALOG_DIR;
#else
    return "catalog";
#endif
}

inline const std::vector<std::string>& catalog_ids() {
    static const std::vector<std::string> ids = {
        "euler-so3",    "so4-geodesic", "toda-3",       "toda-4",
        "toda-5",       "garnier",      "nls-reduction", "yang-mills-reduction",
        "five-dim",     "henon-heiles", "kowalewski",   "kirchhoff-clebsch",
        "rdg-cover",
    };
    return ids;
}

struct CatalogFamily {
    std::string name;
    std::string summary;
};

inline const std::vector<CatalogFamily>& catalog_families() {
    static const std::vector<CatalogFamily> fams = {
        {"euler-so3", "Free rigid body on so(3)*: quadratic invariants, Manakov pencil, elliptic quadrature"},
        {"so4-geodesic", "Geodesic flow on SO(4) with a diagonal metric pencil and a 4x4 spectral curve"},
        {"toda-N", "Periodic exponential lattice (N >= 3 sites) with symmetric tridiagonal Lax matrix"},
        {"garnier", "Quartic two-degree oscillator with a 2x2 pencil and genus-2 separation curve"},
        {"nls-reduction", "Stationary two-component cubic wave reduction onto the quartic oscillator"},
        {"yang-mills-reduction", "Homogeneous two-mode field truncation mapped onto the quartic oscillator"},
        {"five-dim", "Five-component quartic flow with a simple-pole function ladder on a genus-7 cover"},
        {"henon-heiles", "Cubic two-degree potential: full Laurent family and quadrature relation analysis"},
        {"kowalewski", "Heavy-top case with equal moments: complex Laurent family and quartic invariant"},
        {"kirchhoff-clebsch", "Rigid body in ideal fluid, integrable quadratic case on a rank-two pencil"},
        {"rdg-cover", "Quartic two-degree system covering the five-component flow two-to-one"},
    };
    return fams;
}

inline PhaseSystem catalog_load(const std::string& id, bool validate = true) {
    PhaseSystem sys;
    if (id.rfind("toda-", 0) == 0) {
        int n = 0;
        try {
            n = std::stoi(id.substr(5));
        } catch (const std::exception&) {
            throw CatalogError("bad lattice id: " + id);
        }
        sys = toda_system(n);
    } else {
        sys = load_system_file(catalog_dir() + "/" + id + ".sys");
        if (sys.id != id)
            throw CatalogError("catalog file for '" + id + "' declares system '" + sys.id + "'");
    }
    if (validate) {
        std::vector<std::string> bad = validate_structure(sys);
        if (!bad.empty()) {
            std::string msg = "catalog entry " + id + " failed structure validation:";
            for (auto& b : bad) msg += "\n  " + b;
            throw CatalogError(msg);
        }
    }
    return sys;
}

}  // namespace acilab
