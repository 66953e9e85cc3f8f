#include "cavsat/decimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cavsat/rng.hpp"

namespace cavsat::sid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double violate_mass(const Survey3& s, bool negated) { return negated ? s.st : s.sf; }

/// ln of a normalizer, +inf-safe: nonpositive values poison the estimate
/// instead of throwing (the caller ranks, it does not abort).
double safe_log(double z) { return z > 0.0 ? std::log(z) : -kInf; }

}  // namespace

const char* to_string(Status s) {
    switch (s) {
        case Status::Solved: return "solved";
        case Status::Contradiction: return "contradiction";
        case Status::NegativeComplexity: return "negative_complexity";
        case Status::NonConvergence: return "nonconvergence";
    }
    return "unknown";
}

std::vector<VariableBias> compute_biases(const Formula& f, const EdgeIndex& idx,
                                         const sp::EdgeState& state) {
    std::vector<VariableBias> out(f.n_vars());
    for (VarId v = 0; v < f.n_vars(); ++v) {
        Survey3 prod{0.0, 1.0, 0.0};
        for (std::uint32_t k = idx.var_begin[v]; k < idx.var_begin[v + 1]; ++k)
            prod = survey_product(prod, state.u[idx.var_edges[k]]);
        if (!prod.normalize())
            throw ContradictionError("zero-norm warning product at variable " +
                                     std::to_string(v));
        out[v] = {prod.st, prod.si, prod.sf};
    }
    return out;
}

double delta_estimate(const Formula& f, const EdgeIndex& idx, const sp::EdgeState& state,
                      const VariableBias& bias, VarId var) {
    const bool value = bias.wt >= bias.wf;

    // Local complexity terms over the radius-1 neighborhood (clauses on
    // `var` and their variables), recomputed with s(var, .) clamped to the
    // majority polarization. The variable term of `var` itself carries no
    // s-dependence and cancels.
    double before = 0.0;
    double after = 0.0;

    struct Patch {
        std::uint32_t edge;
        Survey3 replacement;
    };
    std::vector<VarId> neighbors;
    std::vector<std::vector<Patch>> patches;
    auto patch_list = [&](VarId v) -> std::vector<Patch>& {
        for (std::size_t i = 0; i < neighbors.size(); ++i)
            if (neighbors[i] == v) return patches[i];
        neighbors.push_back(v);
        patches.emplace_back();
        return patches.back();
    };

    for (const auto& occ : f.occurrences(var)) {
        const std::uint32_t c = occ.clause;
        const std::uint32_t begin = idx.clause_begin[c];
        const std::uint32_t end = idx.clause_begin[c + 1];
        const std::uint32_t self_edge = begin + occ.pos;
        // Clamped variable violates the clause unless its value satisfies
        // its literal.
        const bool satisfies = value != f.clause(c).lits[occ.pos].negated;
        const double self_violate = satisfies ? 0.0 : 1.0;

        double violate_all = 1.0;
        double violate_rest = 1.0;
        for (std::uint32_t e = begin; e < end; ++e) {
            const double viol = violate_mass(state.s[e], idx.edge_negated[e] != 0);
            violate_all *= viol;
            if (e != self_edge) violate_rest *= viol;
            before -= safe_log(survey_product(state.s[e], state.u[e]).norm());
        }
        before += safe_log(1.0 - violate_all);
        const double zc_after = 1.0 - self_violate * violate_rest;
        if (zc_after <= 0.0) return kInf;  // clamp leaves the clause unsatisfiable
        after += std::log(zc_after);

        // Edge term of the clamped variable: overlap of the hard survey
        // with the incoming warning.
        const double blocked = value ? state.u[self_edge].sf : state.u[self_edge].st;
        if (blocked >= 1.0) return kInf;  // clamp against a hard warning
        after -= std::log(1.0 - blocked);

        for (std::uint32_t e = begin; e < end; ++e) {
            if (e == self_edge) continue;
            double warn = self_violate;
            for (std::uint32_t e2 = begin; e2 < end; ++e2)
                if (e2 != e && e2 != self_edge)
                    warn *= violate_mass(state.s[e2], idx.edge_negated[e2] != 0);
            const Survey3 fresh = idx.edge_negated[e] ? Survey3{0.0, 1.0 - warn, warn}
                                                      : Survey3{warn, 1.0 - warn, 0.0};
            const double ze_after = survey_product(state.s[e], fresh).norm();
            if (ze_after <= 0.0) return kInf;
            after -= std::log(ze_after);
            patch_list(idx.edge_var[e]).push_back({e, fresh});
        }
    }

    // Neighbor variable terms with the patched incoming warnings.
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        const VarId v = neighbors[i];
        Survey3 prod_before{0.0, 1.0, 0.0};
        Survey3 prod_after{0.0, 1.0, 0.0};
        for (std::uint32_t k = idx.var_begin[v]; k < idx.var_begin[v + 1]; ++k) {
            const std::uint32_t e = idx.var_edges[k];
            prod_before = survey_product(prod_before, state.u[e]);
            const Patch* patch = nullptr;
            for (const Patch& p : patches[i])
                if (p.edge == e) {
                    patch = &p;
                    break;
                }
            prod_after = survey_product(prod_after, patch ? patch->replacement : state.u[e]);
        }
        before += safe_log(prod_before.norm());
        const double zj_after = prod_after.norm();
        if (zj_after <= 0.0) return kInf;  // a neighbor is left without consistent states
        after += std::log(zj_after);
    }

    // Complexity lost by the clamp: positive when it destroys warning
    // overlap around `var`, +inf when the neighborhood contradicts it,
    // ~zero for a frozen variable whose clauses it already satisfies.
    const double delta = after - before;
    if (std::isnan(delta)) return kInf;  // contradictory on both sides
    return delta;
}

Outcome run_sid(const Formula& original, const Config& cfg) {
    Outcome out;
    Formula current = original;
    Assignment fixed(original.n_vars());
    sp::EdgeState warm;
    bool have_warm = false;
    std::uint32_t neg_streak = 0;
    Rng tie_rng(derive_seed(cfg.seed, 0x71e));

    auto n_residual = [&] {
        return static_cast<std::uint32_t>(original.n_vars() - fixed.n_set());
    };

    auto finish_with_walksat = [&](Status on_failure) {
        out.fallback_used = current.n_clauses() > 0;
        walksat::Config wcfg = cfg.fallback;
        wcfg.seed = derive_seed(cfg.seed, 0x3a17, out.steps);
        auto wres = walksat::solve(current, wcfg, &fixed);
        if (!wres.solved || !evaluate_formula(original, wres.assignment)) {
            out.status = on_failure;
            return;
        }
        out.status = Status::Solved;
        out.assignment = wres.assignment;
    };

    for (std::uint32_t round = 0;; ++round) {
        if (cfg.max_steps && out.steps >= cfg.max_steps) {
            out.status = Status::NonConvergence;
            return out;
        }
        if (current.n_clauses() == 0) {
            finish_with_walksat(Status::NonConvergence);
            return out;
        }

        sp::Engine engine(current);
        sp::Config scfg = cfg.sp;
        scfg.seed = derive_seed(cfg.seed, 0x5b, round);
        const sp::Result sres = engine.run(scfg, have_warm ? &warm : nullptr);
        if (sres.contradiction) {
            // A vanishing message denominator. Messages on loopy graphs can
            // zero out even when the residual problem is satisfiable, so
            // only report Contradiction after local search also fails.
            finish_with_walksat(Status::Contradiction);
            return out;
        }
        if (!sres.converged) {
            out.status = Status::NonConvergence;
            return out;
        }
        if (sres.trivial) {
            finish_with_walksat(Status::NonConvergence);
            return out;
        }

        const double density = sres.complexity / std::max(1u, n_residual());
        if (density < -3.0 * cfg.density_err_floor) {
            if (++neg_streak >= 2) {
                out.status = Status::NegativeComplexity;
                return out;
            }
        } else {
            neg_streak = 0;
        }

        std::vector<VariableBias> biases;
        try {
            biases = compute_biases(current, engine.edges(), engine.state());
        } catch (const ContradictionError&) {
            finish_with_walksat(Status::Contradiction);
            return out;
        }

        // Rank candidates by the local complexity-loss estimate.
        struct Candidate {
            double delta;
            double strength;
            VarId var;
        };
        std::vector<Candidate> candidates;
        for (VarId v = 0; v < current.n_vars(); ++v) {
            if (fixed.is_set(v) || current.degree(v) == 0) continue;
            const double strength = std::abs(biases[v].bias());
            if (strength < cfg.bias_floor) continue;
            candidates.push_back(
                {delta_estimate(current, engine.edges(), engine.state(), biases[v], v),
                 strength, v});
        }
        if (candidates.empty()) {
            finish_with_walksat(Status::NonConvergence);
            return out;
        }
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            if (a.delta != b.delta) return a.delta < b.delta;
            if (a.strength != b.strength) return a.strength > b.strength;
            return a.var < b.var;
        });

        const auto batch = static_cast<std::size_t>(
            std::max<double>(1.0, std::floor(cfg.batch_fraction * n_residual())));
        const std::size_t n_fix = std::min(batch, candidates.size());

        for (std::size_t k = 0; k < n_fix; ++k) {
            const Candidate& cand = candidates[k];
            const VariableBias& b = biases[cand.var];
            bool value;
            if (b.wt > b.wf)
                value = true;
            else if (b.wf > b.wt)
                value = false;
            else
                value = tie_rng.coin();
            fixed.set(cand.var, value);
            ++out.steps;
            out.trace.push_back({out.steps, cand.var, value, cand.delta, density, 0});
        }

        SimplifyResult simp = simplify(current, fixed);
        if (simp.status == SimplifyStatus::Contradiction) {
            out.status = Status::Contradiction;
            return out;
        }
        fixed = simp.assignment;
        for (std::size_t k = out.trace.size() - n_fix; k < out.trace.size(); ++k)
            out.trace[k].n_residual = n_residual();

        // Warm-start the next solve from the surviving edges.
        const EdgeIndex& old_idx = engine.edges();
        EdgeIndex new_idx = EdgeIndex::build(simp.formula);
        warm.u.assign(new_idx.n_edges(), Survey3{0.0, 1.0, 0.0});
        warm.s.assign(new_idx.n_edges(), Survey3{0.0, 1.0, 0.0});
        for (std::size_t c = 0; c < simp.formula.n_clauses(); ++c) {
            const std::uint32_t oc = simp.clause_origin[c];
            const auto& new_lits = simp.formula.clause(c).lits;
            const auto& old_lits = current.clause(oc).lits;
            for (std::size_t j = 0; j < new_lits.size(); ++j) {
                for (std::size_t j2 = 0; j2 < old_lits.size(); ++j2) {
                    if (old_lits[j2].var == new_lits[j].var) {
                        warm.u[new_idx.clause_begin[c] + j] =
                            engine.state().u[old_idx.clause_begin[oc] + j2];
                        break;
                    }
                }
            }
        }
        have_warm = true;
        current = std::move(simp.formula);
    }
}

}  // namespace cavsat::sid
