#pragma once

#include <cstdint>
#include <vector>

#include "cavsat/formula.hpp"
#include "cavsat/sp.hpp"
#include "cavsat/walksat.hpp"

namespace cavsat::sid {

struct Config {
    sp::Config sp{};
    /// Fraction of the residual variables fixed per survey re-solve.
    /// Values at or below 1/n (including 0) fix exactly one variable,
    /// the strict decimation schedule.
    double batch_fraction = 0.0;
    /// Minimum |w_t - w_f| for a variable to be eligible for fixing.
    double bias_floor = 0.0;
    std::uint32_t max_steps = 0;  // 0: unbounded
    walksat::Config fallback{};
    std::uint64_t seed = 1;
    /// Numerical-error scale of the complexity density; decimation stops
    /// with NegativeComplexity when the density stays below -3x this floor
    /// for two consecutive rounds.
    double density_err_floor = 1e-3;
};

enum class Status { Solved, Contradiction, NegativeComplexity, NonConvergence };

const char* to_string(Status s);

/// Full (non-cavity) warning product at a variable, normalized.
struct VariableBias {
    double wt = 0.0;
    double wi = 1.0;
    double wf = 0.0;
    double bias() const { return wt - wf; }
};

struct TraceRow {
    std::uint32_t step = 0;
    VarId var = 0;
    bool value = false;
    double delta_hat = 0.0;
    /// Density of the residual problem at the time the variable was chosen.
    double complexity_density = 0.0;
    std::uint32_t n_residual = 0;  // unset variables after this step
};

struct Outcome {
    Status status = Status::NonConvergence;
    Assignment assignment;  // complete and verified iff status == Solved
    std::uint32_t steps = 0;
    bool fallback_used = false;
    std::vector<TraceRow> trace;
};

/// Per-variable biases from a converged survey state. Throws
/// ContradictionError on a zero-norm product.
std::vector<VariableBias> compute_biases(const Formula& f, const EdgeIndex& idx,
                                         const sp::EdgeState& state);

/// Local estimate of the complexity lost by clamping `var` to its majority
/// polarization: the variable/clause/edge complexity terms of the radius-1
/// neighborhood, recomputed with the clamp applied, minus their current
/// values. Returns +infinity when the clamp contradicts the neighborhood.
double delta_estimate(const Formula& f, const EdgeIndex& idx, const sp::EdgeState& state,
                      const VariableBias& bias, VarId var);

/// Survey decimation: iterate the survey engine, fix minimal-delta
/// variables, simplify, and hand the residual formula to local search once
/// the surveys trivialize. Solved assignments are verified against the
/// original formula before being returned.
Outcome run_sid(const Formula& f, const Config& cfg);

}  // namespace cavsat::sid
