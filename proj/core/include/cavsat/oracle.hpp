#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cavsat/formula.hpp"

namespace cavsat::oracle {

/// Hard guard on exhaustive/DPLL enumeration.
inline constexpr VarId kMaxEnumerationVars = 30;

struct EnumerationResult {
    std::uint64_t count = 0;
    /// Assignments packed as bitmasks (bit v = value of variable v),
    /// materialized iff count <= cap.
    std::optional<std::vector<std::uint64_t>> solutions;
    double entropy = 0.0;  // ln(count); meaningful only when count > 0

    bool unsat() const { return count == 0; }
};

/// Exact model count by DPLL-pruned search, optionally under a partial
/// assignment. Solutions are materialized iff count <= cap.
EnumerationResult enumerate(const Formula& f, std::uint64_t cap = 1'000'000,
                            const Assignment* partial = nullptr);

/// Exact model count under a partial assignment (no materialization).
std::uint64_t count_models(const Formula& f, const Assignment& partial);

/// Independent second method: sweeps all 2^n assignments against clause
/// bitmasks. n_threads > 1 partitions the space; the merged sum is
/// deterministic regardless of the partitioning.
std::uint64_t count_exhaustive(const Formula& f, unsigned n_threads = 1);

struct ClusterDecomposition {
    /// Indices into the solution list, one vector per cluster.
    std::vector<std::vector<std::uint32_t>> clusters;
    std::uint32_t radius = 1;
    /// Per cluster: the variables frozen across it, with their value.
    std::vector<std::vector<std::pair<VarId, bool>>> backbones;
};

/// Connected components of the solution set under Hamming-distance <=
/// radius adjacency, with per-cluster backbones.
ClusterDecomposition decompose_clusters(const std::vector<std::uint64_t>& solutions,
                                        VarId n_vars, std::uint32_t radius);

/// ln(#clusters of f) - ln(#clusters of f with var clamped to value).
/// Returns +infinity when the clamped formula is unsatisfiable.
double exact_delta(const Formula& f, VarId var, bool value, std::uint32_t radius,
                   std::uint64_t cap = 1'000'000);

/// Exact marginal P(var = true) over the solution set. Requires count > 0.
double exact_marginal(const Formula& f, VarId var);

}  // namespace cavsat::oracle
