#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "cavsat/belief.hpp"
#include "cavsat/formula.hpp"

namespace cavsat::bp {

enum class UpdateOrder { RandomPermutationPerSweep, Fixed };

struct Config {
    double damping = 0.0;        // fraction of the old message kept
    double tol = 1e-9;           // max L-inf change of clause->var messages
    std::uint32_t max_iters = 1000;
    UpdateOrder order = UpdateOrder::RandomPermutationPerSweep;
    std::uint64_t seed = 1;
    double init_noise = 0.01;    // messages start uniform +- U(-noise, noise)
    bool parallel = false;       // Jacobi sweeps on a double buffer
    unsigned n_threads = 0;      // 0: hardware concurrency
};

/// Messages on the directed factor-graph edges, indexed by EdgeIndex ids:
/// u = clause->variable, p = variable->clause (cavity beliefs).
struct EdgeState {
    std::vector<Belief2> u;
    std::vector<Belief2> p;
};

struct Result {
    bool converged = false;
    bool contradiction = false;
    std::uint32_t iters = 0;
    double residual = std::numeric_limits<double>::infinity();
    double entropy = std::numeric_limits<double>::quiet_NaN();  // nats
    std::vector<Belief2> marginals;  // per variable; empty unless converged
};

/// Message a clause sends to one of its variables, given the cavity
/// beliefs of the other literals. `falsify` holds, for each other literal,
/// the cavity probability that its variable falsifies it. The receiving
/// literal's satisfying side gets 1/(2-P), the other (1-P)/(2-P) with
/// P = prod(falsify); the denominator never vanishes.
Belief2 clause_message(std::span<const double> falsify, bool receiver_negated);

/// Width-3 form: cavity beliefs of the two other variables plus the three
/// literal signatures (receiver first).
Belief2 clause_message(const Belief2& p2, const Belief2& p3, bool neg1, bool neg2, bool neg3);

/// Normalized componentwise product of incoming clause->variable messages.
/// The empty product is the uniform belief. Throws ContradictionError when
/// the norm vanishes (conflicting hard messages).
Belief2 variable_message(std::span<const Belief2> incoming);

/// Bethe entropy (nats) in the standard message form: sum of per-variable
/// and per-clause log-normalizers minus the per-edge ones, evaluated on the
/// state exactly as given. Exact on trees at a fixed point. Throws
/// ContradictionError on a nonpositive normalizer.
double bethe_entropy(const Formula& f, const EdgeIndex& idx, const EdgeState& state);

/// Per-variable marginals from the full incoming products.
std::vector<Belief2> marginals(const Formula& f, const EdgeIndex& idx, const EdgeState& state);

/// Damped fixed-point iteration. Returns the result and leaves the final
/// messages in state(); pass init to resume from a previous state.
class Engine {
  public:
    explicit Engine(const Formula& f);

    Result run(const Config& cfg, const EdgeState* init = nullptr);

    const EdgeState& state() const { return state_; }
    const EdgeIndex& edges() const { return idx_; }

  private:
    /// Cavity belief of `var` toward edge `excluded`; false on zero norm.
    bool cavity(VarId var, std::uint32_t excluded, const std::vector<Belief2>& u,
                Belief2& out) const;
    double update_edge(std::uint32_t e, const std::vector<Belief2>& in, std::vector<Belief2>& out,
                       double damping, bool& contradiction) const;
    void refresh_cavities();

    const Formula& f_;
    EdgeIndex idx_;
    EdgeState state_;
};

}  // namespace cavsat::bp
