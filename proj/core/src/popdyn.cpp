#include "cavsat/popdyn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>

#include "cavsat/errors.hpp"
#include "cavsat/formula.hpp"
#include "cavsat/rng.hpp"

namespace cavsat::popdyn {

namespace {

constexpr std::uint32_t kMaxResamples = 1000;

/// Two-population disagreement, in pooled batch-error units, above which
/// the stationary distribution is considered non-reproducible.
constexpr double kDivergenceThreshold = 8.0;

/// Cavity survey at a random variable: the fused warnings of a Poisson
/// number of neighbors, each drawn from the population in a random frame.
/// Returns false when every resample attempt came out contradictory.
bool draw_cavity_survey(const std::vector<Survey3>& pop, double degree_mean, Rng& rng,
                        Survey3& out, std::uint64_t& contradictions, std::uint64_t& attempts) {
    for (std::uint32_t tries = 0; tries < kMaxResamples; ++tries) {
        ++attempts;
        const std::uint32_t d = rng.poisson(degree_mean);
        Survey3 prod{0.0, 1.0, 0.0};
        for (std::uint32_t k = 0; k < d; ++k) {
            Survey3 u = pop[rng.index(pop.size())];
            if (rng.coin()) u = u.swapped();
            prod = survey_product(prod, u);
        }
        if (prod.normalize()) {
            prod.apply_floor();
            out = prod;
            return true;
        }
        ++contradictions;
    }
    return false;
}

bool draw_cavity_belief(const std::vector<Belief2>& pop, double degree_mean, Rng& rng,
                        Belief2& out, std::uint64_t& contradictions, std::uint64_t& attempts) {
    for (std::uint32_t tries = 0; tries < kMaxResamples; ++tries) {
        ++attempts;
        const std::uint32_t d = rng.poisson(degree_mean);
        Belief2 prod{1.0, 1.0};
        for (std::uint32_t k = 0; k < d; ++k) {
            Belief2 u = pop[rng.index(pop.size())];
            if (rng.coin()) std::swap(u.pt, u.pf);
            prod = belief_product(prod, u);
        }
        if (prod.normalize()) {
            out = prod;
            return true;
        }
        ++contradictions;
    }
    return false;
}

Survey3 fresh_survey_message(const std::vector<Survey3>& pop, double degree_mean, Rng& rng,
                             std::uint64_t& contradictions, std::uint64_t& attempts) {
    Survey3 s2, s3;
    if (!draw_cavity_survey(pop, degree_mean, rng, s2, contradictions, attempts) ||
        !draw_cavity_survey(pop, degree_mean, rng, s3, contradictions, attempts))
        throw ContradictionError("population draw kept contradicting itself");
    const double v2 = rng.coin() ? s2.st : s2.sf;
    const double v3 = rng.coin() ? s3.st : s3.sf;
    const double warn = v2 * v3;
    return rng.coin() ? Survey3{0.0, 1.0 - warn, warn} : Survey3{warn, 1.0 - warn, 0.0};
}

Belief2 fresh_belief_message(const std::vector<Belief2>& pop, double degree_mean, Rng& rng,
                             std::uint64_t& contradictions, std::uint64_t& attempts) {
    Belief2 p2, p3;
    if (!draw_cavity_belief(pop, degree_mean, rng, p2, contradictions, attempts) ||
        !draw_cavity_belief(pop, degree_mean, rng, p3, contradictions, attempts))
        throw ContradictionError("population draw kept contradicting itself");
    const double f2 = rng.coin() ? p2.pt : p2.pf;
    const double f3 = rng.coin() ? p3.pt : p3.pf;
    const double prod = f2 * f3;
    const double z = 2.0 - prod;
    Belief2 u{1.0 / z, (1.0 - prod) / z};
    if (rng.coin()) std::swap(u.pt, u.pf);
    return u;
}

struct MomentSet {
    double complexity_density = 0.0;
    double frozen_fraction = 0.0;
    double polarized_mass = 0.0;
    double node_term = 0.0;
};

}  // namespace

Population make_population(const Config& cfg, const EnsembleSpec& spec) {
    (void)spec;
    Population pop;
    pop.mode = cfg.mode;
    Rng rng(derive_seed(cfg.seed, 0x9091));
    if (cfg.mode == Mode::Sp) {
        pop.surveys.resize(cfg.pop_size);
        for (auto& s : pop.surveys) {
            switch (cfg.init) {
                case Init::Trivial: s = Survey3{0.0, 1.0, 0.0}; break;
                case Init::Polarized: {
                    // Strongly polarized but never exactly hard: exact unit
                    // warnings make early cavity draws contradict almost
                    // surely at high degree.
                    const double warn = 0.5 + 0.45 * rng.uniform();
                    s = rng.coin() ? Survey3{0.0, 1.0 - warn, warn}
                                   : Survey3{warn, 1.0 - warn, 0.0};
                    break;
                }
                case Init::Mild: {
                    const double warn = cfg.init_polar_max * rng.uniform();
                    s = rng.coin() ? Survey3{0.0, 1.0 - warn, warn}
                                   : Survey3{warn, 1.0 - warn, 0.0};
                    break;
                }
            }
        }
    } else {
        pop.beliefs.resize(cfg.pop_size);
        for (auto& b : pop.beliefs) {
            switch (cfg.init) {
                case Init::Trivial: b = Belief2{0.5, 0.5}; break;
                case Init::Polarized: {
                    const double p = 0.75 + 0.24 * rng.uniform();
                    b = rng.coin() ? Belief2{p, 1.0 - p} : Belief2{1.0 - p, p};
                    break;
                }
                case Init::Mild: {
                    const double eps = 0.01 * (2.0 * rng.uniform() - 1.0);
                    b = Belief2{0.5 + eps, 0.5 - eps};
                    break;
                }
            }
        }
    }
    return pop;
}

void sweep(Population& pop, const EnsembleSpec& spec, Rng& rng, std::uint64_t& contradictions,
           std::uint64_t& attempts) {
    const double mean = spec.degree_mean();
    const std::size_t n = pop.size();
    if (pop.mode == Mode::Sp) {
        for (std::size_t k = 0; k < n; ++k)
            pop.surveys[rng.index(n)] =
                fresh_survey_message(pop.surveys, mean, rng, contradictions, attempts);
    } else {
        for (std::size_t k = 0; k < n; ++k)
            pop.beliefs[rng.index(n)] =
                fresh_belief_message(pop.beliefs, mean, rng, contradictions, attempts);
    }
}

void sweep_blocks(Population& pop, const EnsembleSpec& spec, std::uint64_t seed,
                  std::uint32_t sweep_index, std::uint32_t blocks, unsigned n_threads,
                  std::uint64_t& contradictions, std::uint64_t& attempts) {
    const double mean = spec.degree_mean();
    const std::size_t n = pop.size();
    const Population snapshot = pop;
    std::vector<std::uint64_t> contra(blocks, 0), tries(blocks, 0);

    auto run_block = [&](std::uint32_t b) {
        Rng rng(derive_seed(seed, sweep_index, b));
        const std::size_t lo = n * b / blocks;
        const std::size_t hi = n * (b + 1) / blocks;
        for (std::size_t k = lo; k < hi; ++k) {
            if (pop.mode == Mode::Sp)
                pop.surveys[k] =
                    fresh_survey_message(snapshot.surveys, mean, rng, contra[b], tries[b]);
            else
                pop.beliefs[k] =
                    fresh_belief_message(snapshot.beliefs, mean, rng, contra[b], tries[b]);
        }
    };

    if (n_threads <= 1) {
        for (std::uint32_t b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        const unsigned width = std::min<unsigned>(n_threads, blocks);
        for (unsigned t = 0; t < width; ++t)
            pool.emplace_back([&, t] {
                for (std::uint32_t b = t; b < blocks; b += width) run_block(b);
            });
        for (auto& th : pool) th.join();
    }
    for (std::uint32_t b = 0; b < blocks; ++b) {
        contradictions += contra[b];
        attempts += tries[b];
    }
}

namespace {

/// One measurement pass: local-neighborhood Monte Carlo for the density
/// observables, resampled from the current population.
MomentSet measure(const Population& pop, const EnsembleSpec& spec, Rng& rng,
                  std::size_t n_probes, std::uint64_t& contradictions, std::uint64_t& attempts) {
    MomentSet m;
    const double mean = spec.degree_mean();
    double node_sum = 0.0, clause_sum = 0.0, frozen_sum = 0.0;
    std::size_t node_kept = 0, clause_kept = 0;

    if (pop.mode == Mode::Sp) {
        for (std::size_t k = 0; k < n_probes; ++k) {
            // Variable term: full-degree fusion, without normalization.
            for (std::uint32_t tries = 0; tries < kMaxResamples; ++tries) {
                ++attempts;
                const std::uint32_t d = rng.poisson(mean);
                Survey3 prod{0.0, 1.0, 0.0};
                for (std::uint32_t j = 0; j < d; ++j) {
                    Survey3 u = pop.surveys[rng.index(pop.surveys.size())];
                    if (rng.coin()) u = u.swapped();
                    prod = survey_product(prod, u);
                }
                const double z = prod.norm();
                if (z > 0.0) {
                    node_sum += std::log(z);
                    frozen_sum += (prod.st + prod.sf) / z;
                    ++node_kept;
                    break;
                }
                ++contradictions;
            }
            // Clause term: three fresh cavity surveys.
            Survey3 s1, s2, s3;
            if (draw_cavity_survey(pop.surveys, mean, rng, s1, contradictions, attempts) &&
                draw_cavity_survey(pop.surveys, mean, rng, s2, contradictions, attempts) &&
                draw_cavity_survey(pop.surveys, mean, rng, s3, contradictions, attempts)) {
                const double v1 = rng.coin() ? s1.st : s1.sf;
                const double v2 = rng.coin() ? s2.st : s2.sf;
                const double v3 = rng.coin() ? s3.st : s3.sf;
                const double zc = 1.0 - v1 * v2 * v3;
                if (zc > 0.0) {
                    clause_sum += std::log(zc);
                    ++clause_kept;
                }
            }
        }
        double pol = 0.0;
        for (const Survey3& s : pop.surveys) pol += s.polarized();
        m.polarized_mass = pol / static_cast<double>(pop.surveys.size());
    } else {
        for (std::size_t k = 0; k < n_probes; ++k) {
            for (std::uint32_t tries = 0; tries < kMaxResamples; ++tries) {
                ++attempts;
                const std::uint32_t d = rng.poisson(mean);
                Belief2 prod{1.0, 1.0};
                for (std::uint32_t j = 0; j < d; ++j) {
                    Belief2 u = pop.beliefs[rng.index(pop.beliefs.size())];
                    if (rng.coin()) std::swap(u.pt, u.pf);
                    prod = belief_product(prod, u);
                }
                const double z = prod.norm();
                if (z > 0.0) {
                    node_sum += std::log(z);
                    const double pt = prod.pt / z;
                    frozen_sum += (pt <= 1e-6 || pt >= 1.0 - 1e-6) ? 1.0 : 0.0;
                    ++node_kept;
                    break;
                }
                ++contradictions;
            }
            // Clause and edge terms of the Bethe entropy density, sampled
            // from one clause realization in matched literal frames.
            Belief2 p1, p2, p3;
            if (draw_cavity_belief(pop.beliefs, mean, rng, p1, contradictions, attempts) &&
                draw_cavity_belief(pop.beliefs, mean, rng, p2, contradictions, attempts) &&
                draw_cavity_belief(pop.beliefs, mean, rng, p3, contradictions, attempts)) {
                const bool neg1 = rng.coin();
                const double f1 = neg1 ? p1.pt : p1.pf;
                const double f2 = rng.coin() ? p2.pt : p2.pf;
                const double f3 = rng.coin() ? p3.pt : p3.pf;
                const double zc = 1.0 - f1 * f2 * f3;
                const double prod23 = f2 * f3;
                const double zmsg = 2.0 - prod23;
                const Belief2 u = neg1 ? Belief2{(1.0 - prod23) / zmsg, 1.0 / zmsg}
                                       : Belief2{1.0 / zmsg, (1.0 - prod23) / zmsg};
                const double zedge = p1.pt * u.pt + p1.pf * u.pf;
                if (zc > 0.0 && zedge > 0.0) {
                    clause_sum += std::log(zc) - 3.0 * std::log(zedge);
                    ++clause_kept;
                }
            }
        }
        double pol = 0.0;
        for (const Belief2& b : pop.beliefs)
            pol += (b.pt <= 1e-6 || b.pt >= 1.0 - 1e-6) ? 1.0 : 0.0;
        m.polarized_mass = pol / static_cast<double>(pop.beliefs.size());
    }

    m.node_term = node_kept ? node_sum / static_cast<double>(node_kept) : 0.0;
    const double clause_term = clause_kept ? clause_sum / static_cast<double>(clause_kept) : 0.0;
    if (pop.mode == Mode::Sp)
        m.complexity_density = m.node_term - 2.0 * spec.alpha * clause_term;
    else
        m.complexity_density = m.node_term + spec.alpha * clause_term;
    m.frozen_fraction = node_kept ? frozen_sum / static_cast<double>(node_kept) : 0.0;
    return m;
}

}  // namespace

Result estimate_complexity_density(const EnsembleSpec& spec, const Config& cfg,
                                   const Population* init, Population* final) {
    Population pop = init ? *init : make_population(cfg, spec);
    if (init && init->mode != cfg.mode)
        throw InvalidInstanceError("checkpoint mode does not match the configured mode");
    Rng rng(derive_seed(cfg.seed, 0xd1));
    std::uint64_t contradictions = 0, attempts = 0;

    for (std::uint32_t s = 0; s < cfg.burn_in; ++s) {
        if (cfg.blocks > 0)
            sweep_blocks(pop, spec, cfg.seed, s, cfg.blocks, cfg.n_threads, contradictions,
                         attempts);
        else
            sweep(pop, spec, rng, contradictions, attempts);
    }

    const std::uint32_t n_sweeps = std::max(1u, cfg.measure_sweeps);
    const std::size_t probes = std::max<std::size_t>(64, cfg.pop_size / 4);
    std::vector<MomentSet> samples;
    samples.reserve(n_sweeps);
    for (std::uint32_t s = 0; s < n_sweeps; ++s) {
        if (cfg.blocks > 0)
            sweep_blocks(pop, spec, cfg.seed, cfg.burn_in + s, cfg.blocks, cfg.n_threads,
                         contradictions, attempts);
        else
            sweep(pop, spec, rng, contradictions, attempts);
        samples.push_back(measure(pop, spec, rng, probes, contradictions, attempts));
    }

    Result res;
    res.sweeps_used = cfg.burn_in + n_sweeps;
    res.contradiction_rate =
        attempts > 0 ? static_cast<double>(contradictions) / static_cast<double>(attempts) : 0.0;

    const std::uint32_t n_batches = std::min<std::uint32_t>(cfg.batches, n_sweeps);
    std::vector<double> batch_density(n_batches, 0.0);
    std::vector<std::uint32_t> batch_count(n_batches, 0);
    double frozen = 0.0, pol = 0.0;
    for (std::uint32_t s = 0; s < n_sweeps; ++s) {
        const std::uint32_t b = s * n_batches / n_sweeps;
        batch_density[b] += samples[s].complexity_density;
        batch_count[b]++;
        frozen += samples[s].frozen_fraction;
        pol += samples[s].polarized_mass;
    }
    double mean = 0.0;
    for (std::uint32_t b = 0; b < n_batches; ++b) {
        batch_density[b] /= std::max(1u, batch_count[b]);
        mean += batch_density[b];
    }
    mean /= n_batches;
    double var = 0.0;
    for (std::uint32_t b = 0; b < n_batches; ++b) {
        const double d = batch_density[b] - mean;
        var += d * d;
    }
    res.complexity_density = mean;
    res.complexity_err =
        n_batches > 1 ? std::sqrt(var / (n_batches * (n_batches - 1.0))) : std::abs(mean);
    res.frozen_fraction = frozen / n_sweeps;
    res.polarized_mass = pol / n_sweeps;

    // Stationarity check: first and second half agree within errors.
    double m1 = 0.0, m2 = 0.0;
    const std::uint32_t half = n_batches / 2;
    if (half > 0) {
        for (std::uint32_t b = 0; b < half; ++b) m1 += batch_density[b];
        for (std::uint32_t b = half; b < n_batches; ++b) m2 += batch_density[b];
        m1 /= half;
        m2 /= (n_batches - half);
        res.converged = std::abs(m1 - m2) <= 6.0 * res.complexity_err + 1e-12;
    } else {
        res.converged = true;
    }
    if (final) *final = std::move(pop);
    return res;
}

ThresholdEstimate find_alpha_c(const Config& cfg, double lo, double hi, double target_width) {
    auto density = [&cfg](double alpha) {
        Config c = cfg;
        c.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(alpha * 1e6));
        return estimate_complexity_density(EnsembleSpec{alpha}, c);
    };
    Result rlo = density(lo);
    Result rhi = density(hi);
    if (rlo.complexity_density <= 0.0 || rhi.complexity_density >= 0.0)
        throw BracketingError("complexity density does not change sign on [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    double err = std::max(rlo.complexity_err, rhi.complexity_err);
    while (hi - lo > target_width) {
        const double mid = 0.5 * (lo + hi);
        const Result r = density(mid);
        err = r.complexity_err;
        if (std::abs(r.complexity_density) <= r.complexity_err) {
            // Noise-dominated: tighten symmetrically around the midpoint.
            const double w = 0.5 * (hi - lo);
            return {mid, 0.5 * w, err};
        }
        if (r.complexity_density > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return {0.5 * (lo + hi), 0.5 * (hi - lo), err};
}

namespace {

ThresholdEstimate bisect_onset(const Config& cfg, double lo, double hi, double target_width,
                               bool use_frozen) {
    auto probe = [&](double alpha) {
        Config c = cfg;
        c.init = Init::Polarized;
        c.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(alpha * 1e6) + 7);
        const Result r = estimate_complexity_density(EnsembleSpec{alpha}, c);
        return use_frozen ? r.frozen_fraction : r.polarized_mass;
    };
    constexpr double kOnsetFloor = 1e-4;
    const double plo = probe(lo);
    const double phi = probe(hi);
    if (plo > kOnsetFloor || phi <= kOnsetFloor)
        throw BracketingError("no onset inside the bracket [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
    while (hi - lo > target_width) {
        const double mid = 0.5 * (lo + hi);
        if (probe(mid) > kOnsetFloor)
            hi = mid;
        else
            lo = mid;
    }
    return {0.5 * (lo + hi), 0.5 * (hi - lo), kOnsetFloor};
}

}  // namespace

ThresholdEstimate find_sp_onset(const Config& cfg, double lo, double hi, double target_width) {
    return bisect_onset(cfg, lo, hi, target_width, /*use_frozen=*/false);
}

ThresholdEstimate find_alpha_b(const Config& cfg, double lo, double hi, double target_width) {
    return bisect_onset(cfg, lo, hi, target_width, /*use_frozen=*/true);
}

ThresholdEstimate find_alpha_u(const Config& cfg, double lo, double hi, double target_width) {
    // Divergence of two independently seeded populations, in units of their
    // pooled batch errors.
    auto distance = [&cfg](double alpha) {
        Config a = cfg;
        Config b = cfg;
        a.init = b.init = Init::Polarized;
        a.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(alpha * 1e6), 1);
        b.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(alpha * 1e6), 2);
        const Result ra = estimate_complexity_density(EnsembleSpec{alpha}, a);
        const Result rb = estimate_complexity_density(EnsembleSpec{alpha}, b);
        const double pooled =
            std::sqrt(ra.complexity_err * ra.complexity_err + rb.complexity_err * rb.complexity_err) +
            1e-12;
        double d = std::abs(ra.complexity_density - rb.complexity_density) / pooled;
        if (!ra.converged || !rb.converged) d = std::max(d, kDivergenceThreshold + 1.0);
        return d;
    };
    const double dlo = distance(lo);
    const double dhi = distance(hi);
    if (dlo > kDivergenceThreshold || dhi <= kDivergenceThreshold)
        throw BracketingError("no divergence onset inside the bracket [" + std::to_string(lo) +
                              ", " + std::to_string(hi) + "]");
    double err = 0.0;
    while (hi - lo > target_width) {
        const double mid = 0.5 * (lo + hi);
        const double d = distance(mid);
        err = d;
        if (d > kDivergenceThreshold)
            hi = mid;
        else
            lo = mid;
    }
    return {0.5 * (lo + hi), 0.5 * (hi - lo), err};
}

double bp_convergence_fraction(double alpha, const AlphaDConfig& cfg) {
    std::vector<std::uint8_t> converged(cfg.seeds_per_point, 0);
    std::vector<std::thread> pool;
    const unsigned jobs = std::max(1u, cfg.jobs);
    for (unsigned t = 0; t < jobs; ++t) {
        pool.emplace_back([&, t] {
            for (std::uint32_t k = t; k < cfg.seeds_per_point; k += jobs) {
                const std::uint64_t seed =
                    derive_seed(cfg.seed, static_cast<std::uint64_t>(alpha * 1e6), k);
                const Formula f = generate_random(cfg.n, alpha, seed);
                bp::Engine engine(f);
                bp::Config bcfg = cfg.bp;
                bcfg.seed = derive_seed(seed, 0xbc);
                converged[k] = engine.run(bcfg).converged ? 1 : 0;
            }
        });
    }
    for (auto& th : pool) th.join();
    std::uint32_t n_conv = 0;
    for (auto c : converged) n_conv += c;
    return static_cast<double>(n_conv) / static_cast<double>(cfg.seeds_per_point);
}

ThresholdEstimate find_alpha_d(const AlphaDConfig& cfg) {
    double lo = cfg.lo, hi = cfg.hi;
    const double flo = bp_convergence_fraction(lo, cfg);
    const double fhi = bp_convergence_fraction(hi, cfg);
    if (flo < 0.5 || fhi >= 0.5)
        throw BracketingError("BP convergence fraction does not cross 1/2 on the bracket");
    while (hi - lo > cfg.target_width) {
        const double mid = 0.5 * (lo + hi);
        if (bp_convergence_fraction(mid, cfg) >= 0.5)
            lo = mid;
        else
            hi = mid;
    }
    const double half = 0.5 * (hi - lo);
    return {0.5 * (lo + hi), half, 0.5 / cfg.seeds_per_point};
}

void save_population(const Population& pop, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open checkpoint for writing: " + path);
    const char magic[8] = {'C', 'V', 'P', 'O', 'P', '0', '0', '1'};
    out.write(magic, sizeof(magic));
    const std::uint32_t mode = pop.mode == Mode::Sp ? 1 : 0;
    const std::uint64_t n = pop.size();
    out.write(reinterpret_cast<const char*>(&mode), sizeof(mode));
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    if (pop.mode == Mode::Sp)
        out.write(reinterpret_cast<const char*>(pop.surveys.data()),
                  static_cast<std::streamsize>(n * sizeof(Survey3)));
    else
        out.write(reinterpret_cast<const char*>(pop.beliefs.data()),
                  static_cast<std::streamsize>(n * sizeof(Belief2)));
}

Population load_population(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open checkpoint: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, "CVPOP001", 8) != 0)
        throw ParseError("bad checkpoint header in " + path);
    std::uint32_t mode = 0;
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&mode), sizeof(mode));
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    if (!in || mode > 1) throw ParseError("bad checkpoint metadata in " + path);
    Population pop;
    pop.mode = mode == 1 ? Mode::Sp : Mode::Bp;
    if (pop.mode == Mode::Sp) {
        pop.surveys.resize(n);
        in.read(reinterpret_cast<char*>(pop.surveys.data()),
                static_cast<std::streamsize>(n * sizeof(Survey3)));
    } else {
        pop.beliefs.resize(n);
        in.read(reinterpret_cast<char*>(pop.beliefs.data()),
                static_cast<std::streamsize>(n * sizeof(Belief2)));
    }
    if (!in) throw ParseError("truncated checkpoint: " + path);
    return pop;
}

}  // namespace cavsat::popdyn
