#pragma once

#include <cstdint>

#include "cavsat/formula.hpp"

namespace cavsat::walksat {

struct Config {
    double noise = 0.5;                      // probability of a random walk move
    std::uint64_t max_flips_per_try = 0;     // 0: 100 * n_unset
    std::uint32_t tries = 20;                // restarts before giving up
    std::uint64_t seed = 1;
};

struct Result {
    bool solved = false;
    Assignment assignment;  // complete when solved
    std::uint64_t flips = 0;
    std::uint32_t tries_used = 0;
};

/// Stochastic local search (WalkSAT with break-count greediness). Variables
/// already set in `fixed` are kept at their value and never flipped; the
/// formula must not contain clauses falsified by `fixed` alone. Returns a
/// verified assignment or solved=false after the budget.
Result solve(const Formula& f, const Config& cfg, const Assignment* fixed = nullptr);

}  // namespace cavsat::walksat
