#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cavsat/belief.hpp"
#include "cavsat/bp.hpp"
#include "cavsat/rng.hpp"

namespace cavsat::popdyn {

enum class Mode { Bp, Sp };

/// Random-formula ensemble seen from a message: clause width fixed to 3,
/// variable (and cavity) degrees Poisson with mean 3*alpha.
struct EnsembleSpec {
    double alpha = 4.0;
    double degree_mean() const { return 3.0 * alpha; }
};

enum class Init { Polarized, Mild, Trivial };

struct Config {
    Mode mode = Mode::Sp;
    std::size_t pop_size = 100000;
    std::uint32_t burn_in = 100;         // full-turnover sweeps before measuring
    std::uint32_t measure_sweeps = 50;   // sweeps interleaved with sampling
    std::uint32_t batches = 10;          // batch means for the error bars
    Init init = Init::Polarized;
    std::uint64_t seed = 1;
    double init_polar_max = 0.5;         // Mild init warning-mass bracket
    std::uint32_t blocks = 0;            // >0: deterministic block-parallel sweeps
    unsigned n_threads = 2;
};

/// Sample of messages standing in for the distribution over the random
/// tree ensemble. Exactly one of the two vectors is populated.
struct Population {
    Mode mode = Mode::Sp;
    std::vector<Belief2> beliefs;
    std::vector<Survey3> surveys;

    std::size_t size() const { return mode == Mode::Bp ? beliefs.size() : surveys.size(); }
};

struct Result {
    double complexity_density = 0.0;  // Sp: cluster log-count per variable;
                                      // Bp: Bethe entropy density (nats)
    double complexity_err = 0.0;
    double frozen_fraction = 0.0;     // mass of fully polarized variables
    bool converged = false;           // first/second half means agree
    std::uint32_t sweeps_used = 0;
    double contradiction_rate = 0.0;  // resampled draws per attempted draw
    double polarized_mass = 0.0;      // mean frozen mass of the samples
};

Population make_population(const Config& cfg, const EnsembleSpec& spec);

/// One full population turnover: |pop| single-slot replacements.
/// Contradictory draws are resampled and counted in `contradictions`.
void sweep(Population& pop, const EnsembleSpec& spec, Rng& rng, std::uint64_t& contradictions,
           std::uint64_t& attempts);

/// Deterministic block-parallel variant: replacements read the previous
/// sweep's population and write their own block. Results depend on
/// (seed, blocks) but not on thread count.
void sweep_blocks(Population& pop, const EnsembleSpec& spec, std::uint64_t seed,
                  std::uint32_t sweep_index, std::uint32_t blocks, unsigned n_threads,
                  std::uint64_t& contradictions, std::uint64_t& attempts);

/// Equilibrates a population and Monte-Carlo averages the complexity
/// density (Sp) or Bethe entropy density (Bp) over resampled local
/// neighborhoods, with batch-mean errors. `init` resumes from an existing
/// population (e.g. a checkpoint); `final` receives the equilibrated one.
Result estimate_complexity_density(const EnsembleSpec& spec, const Config& cfg,
                                   const Population* init = nullptr,
                                   Population* final = nullptr);

struct ThresholdEstimate {
    double alpha = 0.0;
    double half_width = 0.0;      // half of the final bracket
    double observable_err = 0.0;  // statistical error of the decisive probe
};

/// Zero crossing of the complexity density (bisection). Throws
/// BracketingError when the bracket endpoints have the same sign.
ThresholdEstimate find_alpha_c(const Config& cfg, double lo = 4.1, double hi = 4.4,
                               double target_width = 0.01);

/// Onset of a self-sustaining nontrivial survey population (polarized
/// initialization; the observable is the stationary polarized mass).
ThresholdEstimate find_sp_onset(const Config& cfg, double lo = 3.7, double hi = 4.1,
                                double target_width = 0.02);

/// Onset of a nonzero frozen-variable fraction in the stationary surveys.
ThresholdEstimate find_alpha_b(const Config& cfg, double lo = 3.7, double hi = 4.1,
                               double target_width = 0.02);

/// Onset where two independently seeded populations stop agreeing on
/// their stationary moments (the survey fixed point stops being unique).
ThresholdEstimate find_alpha_u(const Config& cfg, double lo = 4.2, double hi = 4.5,
                               double target_width = 0.02);

/// Per-instance belief-propagation convergence probe used by
/// find_alpha_d: fraction of random instances on which the iteration
/// converges.
struct AlphaDConfig {
    VarId n = 20000;
    std::uint32_t seeds_per_point = 6;
    bp::Config bp{};
    double lo = 3.6;
    double hi = 4.1;
    double target_width = 0.025;
    std::uint64_t seed = 1;
    unsigned jobs = 2;
};

double bp_convergence_fraction(double alpha, const AlphaDConfig& cfg);

/// Clustering onset: the point where single-instance belief propagation
/// stops converging on half of the instances (bisection on the
/// convergence fraction). The survey-population onset (find_sp_onset)
/// serves as the ensemble-side cross-check.
ThresholdEstimate find_alpha_d(const AlphaDConfig& cfg);

/// Flat binary checkpoints with a versioned header.
void save_population(const Population& pop, const std::string& path);
Population load_population(const std::string& path);

}  // namespace cavsat::popdyn
