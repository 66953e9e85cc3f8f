#include "cavsat/sp.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "cavsat/rng.hpp"

namespace cavsat::sp {

Survey3 clause_message(std::span<const double> violate, bool receiver_negated) {
    double warn = 1.0;
    for (double v : violate) warn *= v;
    return receiver_negated ? Survey3{0.0, 1.0 - warn, warn} : Survey3{warn, 1.0 - warn, 0.0};
}

Survey3 clause_message(const Survey3& s2, const Survey3& s3, bool neg1, bool neg2, bool neg3) {
    const double violate[2] = {neg2 ? s2.st : s2.sf, neg3 ? s3.st : s3.sf};
    return clause_message(violate, neg1);
}

Survey3 variable_message(std::span<const Survey3> incoming) {
    Survey3 prod{0.0, 1.0, 0.0};
    for (const Survey3& m : incoming) prod = survey_product(prod, m);
    if (!prod.normalize())
        throw ContradictionError("conflicting warnings: zero-norm survey product");
    prod.apply_floor();
    return prod;
}

Engine::Engine(const Formula& f) : f_(f), idx_(EdgeIndex::build(f)) {}

EdgeState Engine::trivial_state(const EdgeIndex& idx) {
    EdgeState st;
    st.u.assign(idx.n_edges(), Survey3{0.0, 1.0, 0.0});
    st.s.assign(idx.n_edges(), Survey3{0.0, 1.0, 0.0});
    return st;
}

bool Engine::cavity(VarId var, std::uint32_t excluded, const std::vector<Survey3>& u,
                    Survey3& out) const {
    Survey3 prod{0.0, 1.0, 0.0};
    for (std::uint32_t k = idx_.var_begin[var]; k < idx_.var_begin[var + 1]; ++k) {
        const std::uint32_t e = idx_.var_edges[k];
        if (e == excluded) continue;
        prod = survey_product(prod, u[e]);
    }
    out = prod;
    if (!out.normalize()) return false;
    out.apply_floor();
    return true;
}

double Engine::update_edge(std::uint32_t e, const std::vector<Survey3>& in,
                           std::vector<Survey3>& out, double damping,
                           bool& contradiction) const {
    const std::uint32_t c = idx_.clause_of(e);
    const std::uint32_t begin = idx_.clause_begin[c];
    const std::uint32_t end = idx_.clause_begin[c + 1];

    double warn = 1.0;
    for (std::uint32_t e2 = begin; e2 < end; ++e2) {
        if (e2 == e) continue;
        Survey3 cav;
        if (!cavity(idx_.edge_var[e2], e2, in, cav)) {
            contradiction = true;
            return 0.0;
        }
        warn *= idx_.edge_negated[e2] ? cav.st : cav.sf;
    }
    Survey3 fresh = idx_.edge_negated[e] ? Survey3{0.0, 1.0 - warn, warn}
                                         : Survey3{warn, 1.0 - warn, 0.0};
    // Damping never mixes mass into the structurally-zero component, so
    // u_t * u_f stays exactly zero.
    Survey3 next{(1.0 - damping) * fresh.st + damping * in[e].st,
                 (1.0 - damping) * fresh.si + damping * in[e].si,
                 (1.0 - damping) * fresh.sf + damping * in[e].sf};
    next.normalize();
    const double change = std::max({std::abs(next.st - in[e].st), std::abs(next.si - in[e].si),
                                    std::abs(next.sf - in[e].sf)});
    out[e] = next;
    return change;
}

void Engine::refresh_cavities() {
    for (std::uint32_t e = 0; e < idx_.n_edges(); ++e) {
        Survey3 cav;
        if (!cavity(idx_.edge_var[e], e, state_.u, cav))
            throw ContradictionError("zero-norm cavity survey");
        state_.s[e] = cav;
    }
}

Result Engine::run(const Config& cfg, const EdgeState* init) {
    constexpr std::uint64_t kInitTag = 0x51;
    constexpr std::uint64_t kOrderTag = 0x50;

    const std::uint32_t n_edges = idx_.n_edges();
    Result res;

    if (init) {
        state_ = *init;
    } else {
        state_.u.assign(n_edges, Survey3{});
        Rng rng(derive_seed(cfg.seed, kInitTag));
        for (std::uint32_t e = 0; e < n_edges; ++e) {
            const double warn = cfg.init_polar_max * rng.uniform();
            state_.u[e] = idx_.edge_negated[e] ? Survey3{0.0, 1.0 - warn, warn}
                                               : Survey3{warn, 1.0 - warn, 0.0};
        }
    }
    state_.s.assign(n_edges, Survey3{0.0, 1.0, 0.0});

    std::vector<std::uint32_t> order(n_edges);
    for (std::uint32_t e = 0; e < n_edges; ++e) order[e] = e;

    const unsigned n_threads =
        cfg.n_threads ? cfg.n_threads : std::max(1u, std::thread::hardware_concurrency());

    std::vector<Survey3> back;
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
    if (n_edges == 0) res.converged = true;

    if (res.converged) {
        double max_polar = 0.0;
        for (const Survey3& u : state_.u) max_polar = std::max(max_polar, u.polarized());
        res.trivial = max_polar <= kTrivialFloor;
        try {
            refresh_cavities();
            res.complexity = complexity(f_, idx_, state_);
            res.complexity_density =
                f_.n_vars() > 0 ? res.complexity / static_cast<double>(f_.n_vars()) : 0.0;
            res.polarization = polarization(f_, idx_, state_);
        } catch (const ContradictionError&) {
            res.contradiction = true;
        }
    }
    return res;
}

double complexity(const Formula& f, const EdgeIndex& idx, const EdgeState& state) {
    double total = 0.0;

    for (VarId v = 0; v < f.n_vars(); ++v) {
        Survey3 prod{0.0, 1.0, 0.0};
        for (std::uint32_t k = idx.var_begin[v]; k < idx.var_begin[v + 1]; ++k)
            prod = survey_product(prod, state.u[idx.var_edges[k]]);
        const double z = prod.norm();
        if (z <= 0.0) throw ContradictionError("nonpositive variable normalizer");
        total += std::log(z);
    }

    for (std::size_t c = 0; c < f.n_clauses(); ++c) {
        double violate_all = 1.0;
        for (std::uint32_t e = idx.clause_begin[c]; e < idx.clause_begin[c + 1]; ++e) {
            const Survey3& s = state.s[e];
            violate_all *= idx.edge_negated[e] ? s.st : s.sf;
            const double zedge = survey_product(s, state.u[e]).norm();
            if (zedge <= 0.0) throw ContradictionError("nonpositive edge normalizer");
            total -= std::log(zedge);
        }
        const double zc = 1.0 - violate_all;
        if (zc <= 0.0) throw ContradictionError("nonpositive clause normalizer");
        total += std::log(zc);
    }
    return total;
}

std::vector<double> polarization(const Formula& f, const EdgeIndex& idx, const EdgeState& state) {
    std::vector<double> out(f.n_vars(), 0.0);
    for (VarId v = 0; v < f.n_vars(); ++v) {
        Survey3 prod{0.0, 1.0, 0.0};
        for (std::uint32_t k = idx.var_begin[v]; k < idx.var_begin[v + 1]; ++k)
            prod = survey_product(prod, state.u[idx.var_edges[k]]);
        if (!prod.normalize())
            throw ContradictionError("zero-norm bias at variable " + std::to_string(v));
        out[v] = prod.st - prod.sf;
    }
    return out;
}

}  // namespace cavsat::sp
