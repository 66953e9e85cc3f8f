#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "cavsat/belief.hpp"
#include "cavsat/formula.hpp"

namespace cavsat::sp {

enum class UpdateOrder { RandomPermutationPerSweep, Fixed };

/// Polarized mass below this is the trivial (all-unfrozen) fixed point.
inline constexpr double kTrivialFloor = 1e-6;

struct Config {
    double damping = 0.0;
    double tol = 1e-7;
    std::uint32_t max_iters = 1000;
    UpdateOrder order = UpdateOrder::RandomPermutationPerSweep;
    std::uint64_t seed = 1;
    /// Initial warning mass is drawn uniformly from [0, init_polar_max].
    double init_polar_max = 0.5;
    bool parallel = false;
    unsigned n_threads = 0;
};

/// u = clause->variable warnings (one frozen component identically zero),
/// s = variable->clause cavity surveys, indexed by EdgeIndex ids.
struct EdgeState {
    std::vector<Survey3> u;
    std::vector<Survey3> s;
};

struct Result {
    bool converged = false;
    bool trivial = false;
    bool contradiction = false;
    std::uint32_t iters = 0;
    double residual = std::numeric_limits<double>::infinity();
    double complexity = std::numeric_limits<double>::quiet_NaN();          // nats
    double complexity_density = std::numeric_limits<double>::quiet_NaN();  // nats per variable
    std::vector<double> polarization;  // per variable, W_T - W_F; empty unless converged
};

/// Warning a clause sends to one of its variables. `violate` holds, for
/// each other literal, the survey mass on its variable being frozen to
/// violate it; the warning mass P = prod(violate) lands on the component
/// that satisfies the receiving literal, 1-P stays unfrozen, and the
/// opposite frozen component is exactly zero.
Survey3 clause_message(std::span<const double> violate, bool receiver_negated);

/// Width-3 form (receiver first, then the two other surveys).
Survey3 clause_message(const Survey3& s2, const Survey3& s3, bool neg1, bool neg2, bool neg3);

/// Normalized survey_product fold of incoming warnings with the component
/// floor applied. Empty product is {0,1,0}. Throws ContradictionError when
/// the norm vanishes.
Survey3 variable_message(std::span<const Survey3> incoming);

/// Bethe estimate of the log-number of message-passing fixed points
/// ("clusters"), in the standard variable + clause - edge form evaluated on
/// the state as given. Zero at the trivial fixed point. Throws
/// ContradictionError on a nonpositive normalizer.
double complexity(const Formula& f, const EdgeIndex& idx, const EdgeState& state);

/// Per-variable bias W_T - W_F of the full (non-cavity) warning product.
std::vector<double> polarization(const Formula& f, const EdgeIndex& idx, const EdgeState& state);

class Engine {
  public:
    explicit Engine(const Formula& f);

    Result run(const Config& cfg, const EdgeState* init = nullptr);

    const EdgeState& state() const { return state_; }
    const EdgeIndex& edges() const { return idx_; }

    /// Messages all exactly {0,1,0}; an exact fixed point for any formula.
    static EdgeState trivial_state(const EdgeIndex& idx);

  private:
    bool cavity(VarId var, std::uint32_t excluded, const std::vector<Survey3>& u,
                Survey3& out) const;
    double update_edge(std::uint32_t e, const std::vector<Survey3>& in, std::vector<Survey3>& out,
                       double damping, bool& contradiction) const;
    void refresh_cavities();

    const Formula& f_;
    EdgeIndex idx_;
    EdgeState state_;
};

}  // namespace cavsat::sp
