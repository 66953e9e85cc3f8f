#include "cavsat/bp.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "cavsat/rng.hpp"

namespace cavsat::bp {

Belief2 clause_message(std::span<const double> falsify, bool receiver_negated) {
    double prod = 1.0;
    for (double x : falsify) prod *= x;
    const double z = 2.0 - prod;
    const double sat = 1.0 / z;
    const double unsat = (1.0 - prod) / z;
    return receiver_negated ? Belief2{unsat, sat} : Belief2{sat, unsat};
}

Belief2 clause_message(const Belief2& p2, const Belief2& p3, bool neg1, bool neg2, bool neg3) {
    const double falsify[2] = {neg2 ? p2.pt : p2.pf, neg3 ? p3.pt : p3.pf};
    return clause_message(falsify, neg1);
}

Belief2 variable_message(std::span<const Belief2> incoming) {
    Belief2 prod{1.0, 1.0};
    for (const Belief2& m : incoming) prod = belief_product(prod, m);
    if (!prod.normalize())
        throw ContradictionError("conflicting hard messages: zero-norm belief product");
    return prod;
}

Engine::Engine(const Formula& f) : f_(f), idx_(EdgeIndex::build(f)) {}

bool Engine::cavity(VarId var, std::uint32_t excluded, const std::vector<Belief2>& u,
                    Belief2& out) const {
    Belief2 prod{1.0, 1.0};
    for (std::uint32_t k = idx_.var_begin[var]; k < idx_.var_begin[var + 1]; ++k) {
        const std::uint32_t e = idx_.var_edges[k];
        if (e == excluded) continue;
        prod = belief_product(prod, u[e]);
    }
    out = prod;
    return out.normalize();
}

double Engine::update_edge(std::uint32_t e, const std::vector<Belief2>& in,
                           std::vector<Belief2>& out, double damping,
                           bool& contradiction) const {
    const std::uint32_t c = idx_.clause_of(e);
    const std::uint32_t begin = idx_.clause_begin[c];
    const std::uint32_t end = idx_.clause_begin[c + 1];

    double prod = 1.0;
    for (std::uint32_t e2 = begin; e2 < end; ++e2) {
        if (e2 == e) continue;
        Belief2 cav;
        if (!cavity(idx_.edge_var[e2], e2, in, cav)) {
            contradiction = true;
            return 0.0;
        }
        prod *= idx_.edge_negated[e2] ? cav.pt : cav.pf;
    }
    const double z = 2.0 - prod;
    Belief2 fresh = idx_.edge_negated[e] ? Belief2{(1.0 - prod) / z, 1.0 / z}
                                         : Belief2{1.0 / z, (1.0 - prod) / z};
    Belief2 next{(1.0 - damping) * fresh.pt + damping * in[e].pt,
                 (1.0 - damping) * fresh.pf + damping * in[e].pf};
    next.normalize();
    const double change = std::abs(next.pt - in[e].pt);
    out[e] = next;
    return change;
}

void Engine::refresh_cavities() {
    for (std::uint32_t e = 0; e < idx_.n_edges(); ++e) {
        Belief2 cav;
        if (!cavity(idx_.edge_var[e], e, state_.u, cav))
            throw ContradictionError("zero-norm cavity belief");
        state_.p[e] = cav;
    }
}

Result Engine::run(const Config& cfg, const EdgeState* init) {
    const std::uint32_t n_edges = idx_.n_edges();
    Result res;

    constexpr std::uint64_t kInitTag = 0xb1;
    constexpr std::uint64_t kOrderTag = 0x0d;

    if (init) {
        state_ = *init;
    } else {
        state_.u.assign(n_edges, Belief2{});
        Rng rng(derive_seed(cfg.seed, kInitTag));
        for (auto& u : state_.u) {
            const double eps = cfg.init_noise * (2.0 * rng.uniform() - 1.0);
            u = Belief2{0.5 + eps, 0.5 - eps};
            u.normalize();
        }
    }
    state_.p.assign(n_edges, Belief2{});

    std::vector<std::uint32_t> order(n_edges);
    for (std::uint32_t e = 0; e < n_edges; ++e) order[e] = e;

    const unsigned n_threads =
        cfg.n_threads ? cfg.n_threads : std::max(1u, std::thread::hardware_concurrency());

    std::vector<Belief2> back;
    for (std::uint32_t sweep = 0; sweep < cfg.max_iters; ++sweep) {
        if (cfg.order == UpdateOrder::RandomPermutationPerSweep && !cfg.parallel) {
            Rng perm_rng(derive_seed(cfg.seed, kOrderTag, sweep));
            perm_rng.shuffle(order);
        }
        double residual = 0.0;
        bool contradiction = false;

        if (!cfg.parallel) {
            for (std::uint32_t e : order) {
                residual = std::max(
                    residual, update_edge(e, state_.u, state_.u, cfg.damping, contradiction));
                if (contradiction) break;
            }
        } else {
            back = state_.u;
            std::vector<double> part(n_threads, 0.0);
            std::vector<std::uint8_t> contra(n_threads, 0);
            std::vector<std::thread> pool;
            const std::uint32_t chunk = (n_edges + n_threads - 1) / n_threads;
            for (unsigned t = 0; t < n_threads; ++t) {
                pool.emplace_back([&, t] {
                    bool bad = false;
                    double r = 0.0;
                    const std::uint32_t lo = t * chunk;
                    const std::uint32_t hi = std::min(n_edges, lo + chunk);
                    for (std::uint32_t e = lo; e < hi && !bad; ++e)
                        r = std::max(r, update_edge(e, back, state_.u, cfg.damping, bad));
                    part[t] = r;
                    contra[t] = bad;
                });
            }
            for (auto& th : pool) th.join();
            for (unsigned t = 0; t < n_threads; ++t) {
                residual = std::max(residual, part[t]);
                contradiction |= contra[t] != 0;
            }
        }

        res.iters = sweep + 1;
        res.residual = residual;
        if (contradiction) {
            res.contradiction = true;
            return res;
        }
        if (residual <= cfg.tol) {
            res.converged = true;
            break;
        }
    }

    if (res.converged) {
        try {
            refresh_cavities();
            res.entropy = bethe_entropy(f_, idx_, state_);
            res.marginals = marginals(f_, idx_, state_);
        } catch (const ContradictionError&) {
            res.contradiction = true;
        }
    }
    return res;
}

double bethe_entropy(const Formula& f, const EdgeIndex& idx, const EdgeState& state) {
    double entropy = 0.0;

    // Variable terms: log-norm of the full incoming product.
    for (VarId v = 0; v < f.n_vars(); ++v) {
        Belief2 prod{1.0, 1.0};
        for (std::uint32_t k = idx.var_begin[v]; k < idx.var_begin[v + 1]; ++k)
            prod = belief_product(prod, state.u[idx.var_edges[k]]);
        const double z = prod.norm();
        if (z <= 0.0) throw ContradictionError("nonpositive variable normalizer");
        entropy += std::log(z);
    }

    // Clause terms: probability the clause is satisfied under its cavity
    // beliefs, in the multilinear form (sum over configurations minus the
    // all-falsified one) so the stationarity of the entropy holds for
    // unnormalized perturbations too; edge terms: overlap of the two
    // messages on the edge.
    for (std::size_t c = 0; c < f.n_clauses(); ++c) {
        double falsify_all = 1.0;
        double norm_all = 1.0;
        for (std::uint32_t e = idx.clause_begin[c]; e < idx.clause_begin[c + 1]; ++e) {
            const Belief2& p = state.p[e];
            falsify_all *= idx.edge_negated[e] ? p.pt : p.pf;
            norm_all *= p.norm();
            const double zedge = p.pt * state.u[e].pt + p.pf * state.u[e].pf;
            if (zedge <= 0.0) throw ContradictionError("nonpositive edge normalizer");
            entropy -= std::log(zedge);
        }
        const double zc = norm_all - falsify_all;
        if (zc <= 0.0) throw ContradictionError("nonpositive clause normalizer");
        entropy += std::log(zc);
    }
    return entropy;
}

std::vector<Belief2> marginals(const Formula& f, const EdgeIndex& idx, const EdgeState& state) {
    std::vector<Belief2> out(f.n_vars());
    for (VarId v = 0; v < f.n_vars(); ++v) {
        Belief2 prod{1.0, 1.0};
        for (std::uint32_t k = idx.var_begin[v]; k < idx.var_begin[v + 1]; ++k)
            prod = belief_product(prod, state.u[idx.var_edges[k]]);
        if (!prod.normalize())
            throw ContradictionError("zero-norm marginal at variable " + std::to_string(v));
        out[v] = prod;
    }
    return out;
}

}  // namespace cavsat::bp
