#pragma once
// Catalog-driven Laurent analysis: runs a stored balance through the series
// engine and checks everything the entry claims — resonance spectrum, free
// parameter count, reference coefficients, invariant values at tau^0,
// principal-part cancellation, pole ladders, divisor relations, and the
// guarded weight-resonance property of each invariant.

#include "acilab/catalog.hpp"
#include "acilab/painleve.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace acilab {

inline BalanceSpec to_balance_spec(const PhaseSystem& sys, const BalanceEntry& b) {
    BalanceSpec spec;
    spec.label = b.label;
    spec.d = b.d;
    spec.weights = b.tau_weights;
    spec.x0 = b.x0;
    for (const PinSpec& pin : b.pins) {
        std::optional<std::size_t> idx = sys.var_index(pin.var);
        if (!idx) throw CatalogError(sys.id + ": pin references unknown variable " + pin.var);
        std::optional<VarId> pv = sys.pool->lookup(pin.param);
        if (!pv) throw CatalogError(sys.id + ": pin parameter " + pin.param + " not interned");
        spec.pins[pin.step].push_back({*pv, *idx});
    }
    return spec;
}

// Natural order for a balance run: deep enough for every divisor built on it
// and for the order-8 residual verification.
inline int balance_run_order(const PhaseSystem& sys, const BalanceEntry& b) {
    int order = 8 * b.d;
    for (const DivisorEntry& dv : sys.divisors)
        if (dv.balance == b.label) order = std::max(order, dv.order);
    for (const SeriesCoeff& sc : b.series) order = std::max(order, sc.step);
    return order;
}

struct BalanceRun {
    bool ok = false;
    std::string error;
    LaurentFamily fam;
    IntegerSpectrum spectrum;
    bool spectrum_ok = false;     // integer roots match the stored multiset
    bool free_params_ok = false;  // engine count == stored == nonnegative multiplicity
    int free_params = 0;
};

inline BalanceRun run_balance(PhaseSystem& sys, const BalanceEntry& b, int order = 0) {
    BalanceRun out;
    if (order <= 0) order = balance_run_order(sys, b);
    BalanceSpec spec = to_balance_spec(sys, b);

    WeightSplit split = split_by_weight(sys.field, sys.vars, spec.weights, spec.d);
    PolyMatrix L = kovalevskaya_matrix(split, sys.vars, spec);
    out.spectrum = integer_spectrum(L, *sys.pool);

    std::map<int, int> expected;
    for (int r : b.spectrum) expected[r] += 1;
    out.spectrum_ok = out.spectrum.fully_integer && out.spectrum.roots == expected;

    int nonneg = 0;
    for (auto& [r, mult] : expected)
        if (r >= 0) nonneg += mult;

    ExtendOutcome ext = laurent_extend(sys.field, sys.vars, spec, order, *sys.pool);
    if (!ext.ok) {
        out.error = ext.error;
        return out;
    }
    out.fam = std::move(ext.fam);
    out.free_params = out.fam.free_parameter_count();
    out.free_params_ok = (out.free_params == b.free_params) && (b.free_params == nonneg);
    out.ok = true;
    return out;
}

// Reference-coefficient comparison: every stored series value must equal the
// computed coefficient exactly.
inline std::vector<std::string> compare_reference_series(const PhaseSystem& sys,
                                                         const BalanceEntry& b,
                                                         const LaurentFamily& fam) {
    std::vector<std::string> bad;
    for (const SeriesCoeff& sc : b.series) {
        std::optional<std::size_t> idx = sys.var_index(sc.var);
        if (!idx) {
            bad.push_back("unknown variable " + sc.var);
            continue;
        }
        if (sc.step > fam.order) {
            bad.push_back(sc.var + " step " + std::to_string(sc.step) + ": beyond computed order");
            continue;
        }
        Frac diff = fam.coeff[static_cast<std::size_t>(sc.step)][*idx] - Frac::of(sc.value);
        if (!diff.is_zero())
            bad.push_back(sc.var + " step " + std::to_string(sc.step) + ": computed " +
                          fam.coeff[static_cast<std::size_t>(sc.step)][*idx].str() + ", stored " +
                          sc.value.str());
    }
    return bad;
}

// tau^0 values of the invariants along the family, against the stored ones.
inline std::vector<std::string> compare_t0_values(const PhaseSystem& sys, const BalanceEntry& b,
                                                  const LaurentFamily& fam) {
    std::vector<std::string> bad;
    for (auto& [name, want] : b.t0) {
        const SystemInvariant* inv = sys.invariant(name);
        if (!inv) {
            bad.push_back("unknown invariant " + name);
            continue;
        }
        ObservableSeries s = observable_series(inv->poly, fam);
        if (s.valid < 0) {
            bad.push_back(name + ": series order too low");
            continue;
        }
        Frac have = Frac::of(Poly(fam.pool));
        if (auto it = s.c.find(0); it != s.c.end()) have = it->second;
        Frac diff = have - Frac::of(want);
        if (!diff.is_zero())
            bad.push_back(name + " at tau^0: computed " + have.str() + ", stored " + want.str());
    }
    return bad;
}

// Principal parts of every invariant must cancel identically along the family.
inline std::vector<std::string> invariant_principal_parts(const PhaseSystem& sys,
                                                          const LaurentFamily& fam) {
    std::vector<std::string> bad;
    for (const SystemInvariant& inv : sys.invariants) {
        ObservableSeries s = observable_series(inv.poly, fam);
        if (s.valid < 0) {
            bad.push_back(inv.name + ": series order too low");
            continue;
        }
        for (auto& [e, v] : principal_part(s))
            bad.push_back(inv.name + " tau^" + std::to_string(e) + ": " + v.str());
    }
    return bad;
}

// ---------------------------------------------------------------------------
// Guarded weight-resonance check.  For an invariant F, let Phi be its maximal
// graded piece with respect to the balance tau-weights and w that piece's
// weight.  When v = grad(Phi)(x0) is nonzero it is a left eigenvector of the
// resonance matrix with eigenvalue w, so w must occur in the spectrum; when v
// vanishes the criterion is silent (guard vacuous).

struct WeightGuardResult {
    std::string invariant;
    long top_weight = 0;
    bool vacuous = true;
    bool in_spectrum = false;
    bool left_eigenvector_ok = false;

    bool holds() const { return vacuous || (in_spectrum && left_eigenvector_ok); }
};

inline Poly graded_part(const Poly& p, const std::map<VarId, int>& w, long weight) {
    Poly out(p.pool());
    for (auto& [m, c] : p.terms())
        if (mono_weight(m, w) == weight) out.add_term(m, c);
    return out;
}

inline std::vector<WeightGuardResult> weight_resonance_checks(const PhaseSystem& sys,
                                                              const BalanceEntry& b) {
    BalanceSpec spec = to_balance_spec(sys, b);
    WeightSplit split = split_by_weight(sys.field, sys.vars, spec.weights, spec.d);
    PolyMatrix L = kovalevskaya_matrix(split, sys.vars, spec);
    auto wmap = weight_map(sys.vars, spec.weights);

    std::map<VarId, Poly> bind;
    for (std::size_t i = 0; i < sys.dim(); ++i) bind[sys.vars[i]] = spec.x0[i];

    std::vector<WeightGuardResult> out;
    for (const SystemInvariant& inv : sys.invariants) {
        WeightGuardResult res;
        res.invariant = inv.name;
        res.top_weight = observable_weight(inv.poly, wmap);
        Poly phi = graded_part(inv.poly, wmap, res.top_weight);

        std::vector<Poly> v;
        bool nonzero = false;
        for (std::size_t j = 0; j < sys.dim(); ++j) {
            v.push_back(phi.partial(sys.vars[j]).substitute(bind));
            if (!v.back().is_zero()) nonzero = true;
        }
        res.vacuous = !nonzero;
        if (nonzero) {
            res.in_spectrum = false;
            for (int r : b.spectrum)
                if (static_cast<long>(r) == res.top_weight) res.in_spectrum = true;
            // v^T L == w v^T, identically in the family parameters.
            res.left_eigenvector_ok = true;
            for (std::size_t i = 0; i < sys.dim(); ++i) {
                Poly acc(inv.poly.pool());
                for (std::size_t j = 0; j < sys.dim(); ++j) acc += v[j] * L[j][i];
                acc -= v[i] * Q(res.top_weight);
                if (!acc.is_zero()) res.left_eigenvector_ok = false;
            }
        }
        out.push_back(std::move(res));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pole ladders

struct PoleResult {
    std::string name;
    std::optional<int> exponent;  // lowest tau-exponent; nullopt if identically 0
    bool within = false;          // exponent >= -max declared
};

inline std::vector<PoleResult> run_poles(const PhaseSystem&, const PoleEntry& pe,
                                         const LaurentFamily& fam) {
    std::vector<PoleResult> out;
    for (auto& [name, f] : pe.functions) {
        PoleResult r;
        r.name = name;
        ObservableSeries s = observable_series(f, fam);
        r.exponent = pole_exponent(s);
        r.within = !r.exponent || *r.exponent >= -pe.max_order * fam.d;
        // Exactness below tau^0 requires the series to reach tau^0 at all.
        if (s.valid < 0) r.within = false;
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Divisor relations from a stored entry

struct DivisorRun {
    bool ok = false;
    std::string error;
    Poly derived;                        // engine relation, primitive form
    std::optional<Q> scale_vs_stored;    // derived == q * stored derived
    std::optional<Q> scale_vs_printed;   // derived (after sets) == q * printed
    std::vector<std::string> log;
    std::vector<std::string> principal_violations;
};

inline DivisorRun run_divisor(const PhaseSystem& sys, const DivisorEntry& dv,
                              const LaurentFamily& fam) {
    DivisorRun out;
    if (dv.values.size() != sys.invariants.size()) {
        out.error = "divisor " + dv.name + ": needs one value symbol per invariant";
        return out;
    }
    std::vector<Poly> invs;
    std::vector<VarId> cvals;
    for (std::size_t r = 0; r < sys.invariants.size(); ++r) {
        invs.push_back(sys.invariants[r].poly);
        std::optional<VarId> cv = sys.pool->lookup(dv.values[r]);
        if (!cv) {
            out.error = "divisor value symbol " + dv.values[r] + " not interned";
            return out;
        }
        cvals.push_back(*cv);
    }
    std::vector<std::pair<VarId, std::size_t>> elim;
    for (auto& [param, rel1] : dv.eliminate) {
        std::optional<VarId> pv = sys.pool->lookup(param);
        if (!pv) {
            out.error = "eliminated parameter " + param + " not interned";
            return out;
        }
        if (rel1 < 1) {
            out.error = "relation indices are 1-based";
            return out;
        }
        elim.push_back({*pv, static_cast<std::size_t>(rel1 - 1)});
    }
    DivisorOutcome rel = divisor_relations(invs, cvals, fam, elim,
                                           static_cast<std::size_t>(dv.final_rel - 1));
    out.log = rel.log;
    out.principal_violations = rel.principal_violations;
    if (!rel.ok) {
        out.error = rel.error;
        return out;
    }
    out.derived = rel.divisor;
    if (dv.derived) out.scale_vs_stored = rational_multiple(out.derived, *dv.derived);

    Poly printed_side = out.derived;
    for (auto& [name, value] : dv.sets) {
        std::optional<VarId> sv = sys.pool->lookup(name);
        if (!sv) {
            out.error = "set symbol " + name + " not interned";
            return out;
        }
        printed_side = printed_side.substitute(*sv, Poly::constant(printed_side.pool(), value));
    }
    out.scale_vs_printed = rational_multiple(printed_side, dv.printed);
    out.ok = true;
    return out;
}

}  // namespace acilab
