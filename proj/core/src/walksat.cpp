#include "cavsat/walksat.hpp"

#include <algorithm>

#include "cavsat/rng.hpp"

namespace cavsat::walksat {

namespace {

/// Occurrence lists plus satisfied-literal counters, maintained per flip.
struct State {
    const Formula& f;
    std::vector<std::uint8_t> value;        // current candidate values
    std::vector<std::uint8_t> frozen;       // never flipped
    std::vector<std::uint32_t> n_true;      // per clause: satisfied literals
    std::vector<std::uint32_t> unsat;       // stack of unsatisfied clause ids
    std::vector<std::uint32_t> unsat_pos;   // clause id -> stack slot or npos
    static constexpr std::uint32_t npos = 0xffffffffu;

    explicit State(const Formula& formula)
        : f(formula),
          value(formula.n_vars(), 0),
          frozen(formula.n_vars(), 0),
          n_true(formula.n_clauses(), 0),
          unsat_pos(formula.n_clauses(), npos) {}

    bool lit_true(const Literal& lit) const { return (value[lit.var] != 0) != lit.negated; }

    void mark_unsat(std::uint32_t c) {
        if (unsat_pos[c] != npos) return;
        unsat_pos[c] = static_cast<std::uint32_t>(unsat.size());
        unsat.push_back(c);
    }

    void mark_sat(std::uint32_t c) {
        const std::uint32_t pos = unsat_pos[c];
        if (pos == npos) return;
        const std::uint32_t last = unsat.back();
        unsat[pos] = last;
        unsat_pos[last] = pos;
        unsat.pop_back();
        unsat_pos[c] = npos;
    }

    void rebuild() {
        unsat.clear();
        std::fill(unsat_pos.begin(), unsat_pos.end(), npos);
        for (std::uint32_t c = 0; c < f.n_clauses(); ++c) {
            std::uint32_t k = 0;
            for (const Literal& lit : f.clause(c).lits) k += lit_true(lit);
            n_true[c] = k;
            if (k == 0) mark_unsat(c);
        }
    }

    /// Clauses that become unsatisfied if `v` is flipped.
    std::uint32_t break_count(VarId v) const {
        std::uint32_t breaks = 0;
        for (const auto& occ : f.occurrences(v)) {
            const Literal& lit = f.clause(occ.clause).lits[occ.pos];
            if (lit_true(lit) && n_true[occ.clause] == 1) ++breaks;
        }
        return breaks;
    }

    void flip(VarId v) {
        value[v] ^= 1;
        for (const auto& occ : f.occurrences(v)) {
            const Literal& lit = f.clause(occ.clause).lits[occ.pos];
            if (lit_true(lit)) {
                if (++n_true[occ.clause] == 1) mark_sat(occ.clause);
            } else {
                if (--n_true[occ.clause] == 0) mark_unsat(occ.clause);
            }
        }
    }
};

}  // namespace

Result solve(const Formula& f, const Config& cfg, const Assignment* fixed) {
    Result res;
    State st(f);
    Rng rng(derive_seed(cfg.seed, 0x3a));

    std::uint32_t n_free = 0;
    for (VarId v = 0; v < f.n_vars(); ++v) {
        if (fixed && fixed->is_set(v)) {
            st.frozen[v] = 1;
            st.value[v] = fixed->value(v) ? 1 : 0;
        } else {
            ++n_free;
        }
    }

    const std::uint64_t flips_per_try =
        cfg.max_flips_per_try ? cfg.max_flips_per_try
                              : 100 * std::max<std::uint64_t>(1, n_free);

    for (std::uint32_t attempt = 0; attempt < cfg.tries; ++attempt) {
        res.tries_used = attempt + 1;
        for (VarId v = 0; v < f.n_vars(); ++v)
            if (!st.frozen[v]) st.value[v] = rng.coin() ? 1 : 0;
        st.rebuild();

        for (std::uint64_t step = 0; step < flips_per_try && !st.unsat.empty(); ++step) {
            const std::uint32_t c = st.unsat[rng.index(st.unsat.size())];
            const auto& lits = f.clause(c).lits;

            // Free move if some variable breaks nothing; otherwise noise
            // picks a random literal, greed picks the min-break one.
            VarId choice = lits[0].var;
            std::uint32_t best_break = State::npos;
            std::uint32_t n_candidates = 0;
            for (const Literal& lit : lits) {
                if (st.frozen[lit.var]) continue;
                const std::uint32_t b = st.break_count(lit.var);
                if (b < best_break) {
                    best_break = b;
                    choice = lit.var;
                    n_candidates = 1;
                } else if (b == best_break) {
                    ++n_candidates;
                    if (rng.below(n_candidates) == 0) choice = lit.var;
                }
            }
            if (best_break == State::npos) break;  // clause fully frozen: restart
            if (best_break > 0 && rng.uniform() < cfg.noise) {
                std::uint32_t pick = rng.below(static_cast<std::uint32_t>(lits.size()));
                for (std::uint32_t tries = 0; st.frozen[lits[pick].var] && tries < 8; ++tries)
                    pick = rng.below(static_cast<std::uint32_t>(lits.size()));
                if (!st.frozen[lits[pick].var]) choice = lits[pick].var;
            }
            st.flip(choice);
            ++res.flips;
        }

        if (st.unsat.empty()) {
            res.solved = true;
            res.assignment = Assignment(f.n_vars());
            for (VarId v = 0; v < f.n_vars(); ++v) res.assignment.set(v, st.value[v] != 0);
            // The search keeps its own truth of "satisfied"; re-check from
            // scratch before reporting.
            if (evaluate_formula(f, res.assignment)) return res;
            res.solved = false;
        }
    }
    return res;
}

}  // namespace cavsat::walksat
