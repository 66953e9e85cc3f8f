#include "cavsat/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <unordered_map>

namespace cavsat::oracle {

namespace {

void check_guard(const Formula& f) {
    if (f.n_vars() > kMaxEnumerationVars)
        throw EnumerationGuardError("enumeration limited to " +
                                    std::to_string(kMaxEnumerationVars) + " variables, got " +
                                    std::to_string(f.n_vars()));
}

/// Recursive DPLL counter over a scratch assignment. Free variables (unset
/// and absent from every active clause) contribute a factor 2^free.
class DpllCounter {
  public:
    DpllCounter(const Formula& f, std::vector<std::uint64_t>* sink, std::uint64_t cap)
        : f_(f), sink_(sink), cap_(cap) {}

    std::uint64_t run(Assignment a) {
        count_ = 0;
        overflowed_ = false;
        descend(std::move(a));
        return count_;
    }

    bool materialization_overflowed() const { return overflowed_; }

  private:
    // Returns: 0 = some clause falsified, 1 = all clauses satisfied,
    // 2 = undecided; unit clauses extend `a` until fixpoint.
    int propagate(Assignment& a) const {
        bool changed = true;
        while (changed) {
            changed = false;
            bool all_sat = true;
            for (const Clause& c : f_.clauses()) {
                bool sat = false;
                int n_unset = 0;
                const Literal* unit = nullptr;
                for (const Literal& lit : c.lits) {
                    if (!a.is_set(lit.var)) {
                        ++n_unset;
                        unit = &lit;
                    } else if (a.value(lit.var) != lit.negated) {
                        sat = true;
                        break;
                    }
                }
                if (sat) continue;
                if (n_unset == 0) return 0;
                all_sat = false;
                if (n_unset == 1) {
                    a.set(unit->var, !unit->negated);
                    changed = true;
                }
            }
            if (all_sat) return 1;
        }
        return 2;
    }

    // Variable occurring in the most active (unsatisfied) clauses.
    VarId pick_branch(const Assignment& a) const {
        std::vector<std::uint32_t> score(f_.n_vars(), 0);
        for (const Clause& c : f_.clauses()) {
            bool sat = false;
            for (const Literal& lit : c.lits)
                if (a.is_set(lit.var) && a.value(lit.var) != lit.negated) {
                    sat = true;
                    break;
                }
            if (sat) continue;
            for (const Literal& lit : c.lits)
                if (!a.is_set(lit.var)) ++score[lit.var];
        }
        VarId best = 0;
        std::uint32_t best_score = 0;
        for (VarId v = 0; v < f_.n_vars(); ++v)
            if (!a.is_set(v) && score[v] > best_score) {
                best = v;
                best_score = score[v];
            }
        return best;  // score > 0 guaranteed for undecided states
    }

    void descend(Assignment a) {
        const int state = propagate(a);
        if (state == 0) return;
        if (state == 1) {
            emit(a);
            return;
        }
        const VarId v = pick_branch(a);
        Assignment left = a;
        left.set(v, false);
        descend(std::move(left));
        a.set(v, true);
        descend(std::move(a));
    }

    void emit(const Assignment& a) {
        std::vector<VarId> free;
        for (VarId v = 0; v < f_.n_vars(); ++v)
            if (!a.is_set(v)) free.push_back(v);
        count_ += std::uint64_t{1} << free.size();
        if (!sink_) return;
        if (count_ > cap_) {
            overflowed_ = true;
            sink_ = nullptr;
            return;
        }
        std::uint64_t base = 0;
        for (VarId v = 0; v < f_.n_vars(); ++v)
            if (a.is_set(v) && a.value(v)) base |= std::uint64_t{1} << v;
        const std::uint64_t n_free = std::uint64_t{1} << free.size();
        for (std::uint64_t mask = 0; mask < n_free; ++mask) {
            std::uint64_t s = base;
            for (std::size_t j = 0; j < free.size(); ++j)
                if (mask & (std::uint64_t{1} << j)) s |= std::uint64_t{1} << free[j];
            sink_->push_back(s);
        }
    }

    const Formula& f_;
    std::vector<std::uint64_t>* sink_;
    std::uint64_t cap_;
    std::uint64_t count_ = 0;
    bool overflowed_ = false;
};

}  // namespace

EnumerationResult enumerate(const Formula& f, std::uint64_t cap, const Assignment* partial) {
    check_guard(f);
    Assignment start = partial ? *partial : Assignment(f.n_vars());
    if (start.size() != f.n_vars())
        throw InvalidInstanceError("partial assignment has wrong length");

    std::vector<std::uint64_t> sols;
    DpllCounter counter(f, &sols, cap);
    EnumerationResult res;
    res.count = counter.run(start);
    if (!counter.materialization_overflowed() && res.count <= cap) {
        std::sort(sols.begin(), sols.end());
        res.solutions = std::move(sols);
    }
    res.entropy = res.count > 0 ? std::log(static_cast<double>(res.count)) : 0.0;
    return res;
}

std::uint64_t count_models(const Formula& f, const Assignment& partial) {
    check_guard(f);
    DpllCounter counter(f, nullptr, 0);
    return counter.run(partial);
}

std::uint64_t count_exhaustive(const Formula& f, unsigned n_threads) {
    check_guard(f);
    const VarId n = f.n_vars();
    struct Mask {
        std::uint64_t vars, bad;
    };
    std::vector<Mask> masks;
    masks.reserve(f.n_clauses());
    for (const Clause& c : f.clauses()) {
        Mask m{0, 0};
        for (const Literal& lit : c.lits) {
            m.vars |= std::uint64_t{1} << lit.var;
            if (lit.negated) m.bad |= std::uint64_t{1} << lit.var;
        }
        masks.push_back(m);
    }

    const std::uint64_t total = std::uint64_t{1} << n;
    auto count_range = [&masks](std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t count = 0;
        for (std::uint64_t x = lo; x < hi; ++x) {
            bool ok = true;
            for (const Mask& m : masks)
                if ((x & m.vars) == m.bad) {  // every literal falsified
                    ok = false;
                    break;
                }
            count += ok;
        }
        return count;
    };

    if (n_threads <= 1 || total < 1024) return count_range(0, total);

    const std::uint64_t chunk = total / n_threads;
    std::vector<std::uint64_t> partial(n_threads, 0);
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < n_threads; ++t) {
        const std::uint64_t lo = t * chunk;
        const std::uint64_t hi = (t + 1 == n_threads) ? total : lo + chunk;
        workers.emplace_back([&, t, lo, hi] { partial[t] = count_range(lo, hi); });
    }
    for (auto& w : workers) w.join();
    std::uint64_t sum = 0;
    for (std::uint64_t p : partial) sum += p;
    return sum;
}

ClusterDecomposition decompose_clusters(const std::vector<std::uint64_t>& solutions,
                                        VarId n_vars, std::uint32_t radius) {
    ClusterDecomposition dec;
    dec.radius = radius;
    const std::size_t s = solutions.size();
    if (s == 0) return dec;

    std::vector<std::uint32_t> comp(s, 0xffffffffu);
    std::uint32_t n_comp = 0;

    if (radius >= n_vars) {
        comp.assign(s, 0);
        n_comp = 1;
    } else if (radius == 1) {
        // Neighbor lookup by single-bit flips.
        std::unordered_map<std::uint64_t, std::uint32_t> id;
        id.reserve(s * 2);
        for (std::uint32_t i = 0; i < s; ++i) id.emplace(solutions[i], i);
        std::vector<std::uint32_t> stack;
        for (std::uint32_t i = 0; i < s; ++i) {
            if (comp[i] != 0xffffffffu) continue;
            comp[i] = n_comp;
            stack.assign(1, i);
            while (!stack.empty()) {
                const std::uint32_t cur = stack.back();
                stack.pop_back();
                for (VarId v = 0; v < n_vars; ++v) {
                    auto it = id.find(solutions[cur] ^ (std::uint64_t{1} << v));
                    if (it != id.end() && comp[it->second] == 0xffffffffu) {
                        comp[it->second] = n_comp;
                        stack.push_back(it->second);
                    }
                }
            }
            ++n_comp;
        }
    } else {
        // General radius: pairwise union-find on popcount distance.
        std::vector<std::uint32_t> parent(s);
        for (std::uint32_t i = 0; i < s; ++i) parent[i] = i;
        auto find = [&parent](std::uint32_t x) {
            while (parent[x] != x) {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            return x;
        };
        for (std::uint32_t i = 0; i < s; ++i)
            for (std::uint32_t j = i + 1; j < s; ++j)
                if (std::popcount(solutions[i] ^ solutions[j]) <= static_cast<int>(radius)) {
                    const auto a = find(i), b = find(j);
                    if (a != b) parent[a] = b;
                }
        std::unordered_map<std::uint32_t, std::uint32_t> remap;
        for (std::uint32_t i = 0; i < s; ++i) {
            const auto root = find(i);
            auto [it, inserted] = remap.emplace(root, n_comp);
            if (inserted) ++n_comp;
            comp[i] = it->second;
        }
    }

    dec.clusters.assign(n_comp, {});
    for (std::uint32_t i = 0; i < s; ++i) dec.clusters[comp[i]].push_back(i);

    dec.backbones.resize(n_comp);
    for (std::uint32_t k = 0; k < n_comp; ++k) {
        std::uint64_t conj = ~std::uint64_t{0};
        std::uint64_t disj = 0;
        for (std::uint32_t i : dec.clusters[k]) {
            conj &= solutions[i];
            disj |= solutions[i];
        }
        for (VarId v = 0; v < n_vars; ++v) {
            const std::uint64_t bit = std::uint64_t{1} << v;
            if (conj & bit)
                dec.backbones[k].push_back({v, true});
            else if (!(disj & bit))
                dec.backbones[k].push_back({v, false});
        }
    }
    return dec;
}

double exact_delta(const Formula& f, VarId var, bool value, std::uint32_t radius,
                   std::uint64_t cap) {
    auto base = enumerate(f, cap);
    if (!base.solutions)
        throw EnumerationGuardError("exact_delta needs materialized solutions (cap too small)");
    if (base.count == 0) throw InvalidInstanceError("exact_delta on an unsatisfiable formula");

    Assignment clamp(f.n_vars());
    clamp.set(var, value);
    auto clamped = enumerate(f, cap, &clamp);
    if (clamped.count == 0) return std::numeric_limits<double>::infinity();
    if (!clamped.solutions)
        throw EnumerationGuardError("exact_delta needs materialized solutions (cap too small)");

    const auto before = decompose_clusters(*base.solutions, f.n_vars(), radius);
    const auto after = decompose_clusters(*clamped.solutions, f.n_vars(), radius);
    return std::log(static_cast<double>(before.clusters.size())) -
           std::log(static_cast<double>(after.clusters.size()));
}

double exact_marginal(const Formula& f, VarId var) {
    const std::uint64_t total = count_models(f, Assignment(f.n_vars()));
    if (total == 0) throw InvalidInstanceError("marginal of an unsatisfiable formula");
    Assignment a(f.n_vars());
    a.set(var, true);
    const std::uint64_t with_true = count_models(f, a);
    return static_cast<double>(with_true) / static_cast<double>(total);
}

}  // namespace cavsat::oracle
