#include "cavsat/formula.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "cavsat/rng.hpp"

namespace cavsat {

Formula::Formula(VarId n_vars, std::vector<Clause> clauses)
    : n_vars_(n_vars), clauses_(std::move(clauses)) {
    adjacency_.assign(n_vars_, {});
    for (std::uint32_t c = 0; c < clauses_.size(); ++c) {
        const auto& lits = clauses_[c].lits;
        for (std::uint32_t j = 0; j < lits.size(); ++j) {
            if (lits[j].var >= n_vars_)
                throw InvalidInstanceError("clause variable out of range");
            for (std::uint32_t k = 0; k < j; ++k)
                if (lits[k].var == lits[j].var)
                    throw InvalidInstanceError("repeated variable inside a clause");
            adjacency_[lits[j].var].push_back({c, j});
        }
    }
}

std::uint32_t EdgeIndex::clause_of(std::uint32_t edge) const {
    auto it = std::upper_bound(clause_begin.begin(), clause_begin.end(), edge);
    return static_cast<std::uint32_t>(it - clause_begin.begin()) - 1;
}

EdgeIndex EdgeIndex::build(const Formula& f) {
    EdgeIndex idx;
    const std::size_t m = f.n_clauses();
    idx.clause_begin.resize(m + 1);
    std::uint32_t e = 0;
    for (std::size_t c = 0; c < m; ++c) {
        idx.clause_begin[c] = e;
        e += static_cast<std::uint32_t>(f.clause(c).width());
    }
    idx.clause_begin[m] = e;

    idx.edge_var.resize(e);
    idx.edge_negated.resize(e);
    for (std::size_t c = 0; c < m; ++c) {
        const auto& lits = f.clause(c).lits;
        for (std::size_t j = 0; j < lits.size(); ++j) {
            const std::uint32_t id = idx.clause_begin[c] + static_cast<std::uint32_t>(j);
            idx.edge_var[id] = lits[j].var;
            idx.edge_negated[id] = lits[j].negated ? 1 : 0;
        }
    }

    idx.var_begin.assign(f.n_vars() + 1, 0);
    for (std::uint32_t id = 0; id < e; ++id) idx.var_begin[idx.edge_var[id] + 1]++;
    for (std::size_t v = 0; v < f.n_vars(); ++v) idx.var_begin[v + 1] += idx.var_begin[v];
    idx.var_edges.resize(e);
    std::vector<std::uint32_t> fill(idx.var_begin.begin(), idx.var_begin.end() - 1);
    for (std::uint32_t id = 0; id < e; ++id) idx.var_edges[fill[idx.edge_var[id]]++] = id;
    return idx;
}

Formula generate_random(VarId n, double alpha, std::uint64_t seed) {
    if (n < 3) throw InvalidInstanceError("random 3-SAT needs at least 3 variables");
    if (!(alpha > 0.0)) throw InvalidInstanceError("clause density must be positive");
    const auto m = static_cast<std::size_t>(std::llround(alpha * static_cast<double>(n)));

    Rng rng(seed);
    std::vector<Clause> clauses(m);
    for (auto& cl : clauses) {
        cl.lits.resize(3);
        VarId v0 = rng.below(n);
        VarId v1 = v0;
        while (v1 == v0) v1 = rng.below(n);
        VarId v2 = v0;
        while (v2 == v0 || v2 == v1) v2 = rng.below(n);
        cl.lits[0].var = v0;
        cl.lits[1].var = v1;
        cl.lits[2].var = v2;
        for (auto& lit : cl.lits) lit.negated = rng.coin();
    }
    return Formula(n, std::move(clauses));
}

bool evaluate_clause(const Clause& c, const Assignment& a) {
    for (const Literal& lit : c.lits) {
        if (!a.is_set(lit.var))
            throw IncompleteAssignmentError("clause evaluated with unset variable " +
                                            std::to_string(lit.var));
        if (a.value(lit.var) != lit.negated) return true;
    }
    return false;
}

bool evaluate_formula(const Formula& f, const Assignment& a) {
    for (const Clause& c : f.clauses())
        if (!evaluate_clause(c, a)) return false;
    return true;
}

SimplifyResult simplify(const Formula& f, const Assignment& partial) {
    SimplifyResult res;
    res.assignment = partial;
    if (res.assignment.size() != f.n_vars()) res.assignment = Assignment(f.n_vars());

    // Unit propagation works on a mutable copy of the clause list; clauses
    // are never widened, so literal vectors are edited in place.
    std::vector<Clause> work(f.clauses().begin(), f.clauses().end());
    std::vector<std::uint32_t> origin(work.size());
    for (std::uint32_t c = 0; c < origin.size(); ++c) origin[c] = c;
    std::vector<bool> satisfied(work.size(), false);

    auto& assign = res.assignment;
    bool contradiction = false;
    bool changed = true;
    while (changed && !contradiction) {
        changed = false;
        for (std::size_t c = 0; c < work.size() && !contradiction; ++c) {
            if (satisfied[c]) continue;
            auto& lits = work[c].lits;
            std::size_t keep = 0;
            bool sat = false;
            for (const Literal& lit : lits) {
                if (!assign.is_set(lit.var)) {
                    lits[keep++] = lit;
                } else if (assign.value(lit.var) != lit.negated) {
                    sat = true;
                    break;
                }
                // falsified literals are dropped
            }
            if (sat) {
                satisfied[c] = true;
                changed = true;
                continue;
            }
            if (keep != lits.size()) {
                lits.resize(keep);
                changed = true;
            }
            if (lits.empty()) {
                contradiction = true;
            } else if (lits.size() == 1) {
                assign.set(lits[0].var, !lits[0].negated);
                satisfied[c] = true;
                changed = true;
            }
        }
    }

    res.status = contradiction ? SimplifyStatus::Contradiction : SimplifyStatus::Reduced;
    std::vector<Clause> kept;
    std::vector<std::uint32_t> kept_origin;
    if (!contradiction) {
        for (std::size_t c = 0; c < work.size(); ++c) {
            if (satisfied[c]) continue;
            kept.push_back(std::move(work[c]));
            kept_origin.push_back(origin[c]);
        }
    }
    res.formula = Formula(f.n_vars(), std::move(kept));
    res.clause_origin = std::move(kept_origin);
    return res;
}

}  // namespace cavsat
