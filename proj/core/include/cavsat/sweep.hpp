#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cavsat/bp.hpp"
#include "cavsat/decimate.hpp"
#include "cavsat/sp.hpp"

namespace cavsat::sweep {

inline constexpr int kSchemaVersion = 1;

enum class Mode { Bp, Sp, Sid };

const char* to_string(Mode m);

/// Grid of (alpha, replicate) cells, each fully reproducible from the
/// spec: cell seed = hash(base_seed, alpha index, replicate index).
struct Spec {
    Mode mode = Mode::Bp;
    std::vector<double> alphas;
    VarId n = 1000;
    std::uint32_t seeds = 1;
    std::uint64_t base_seed = 1;
    unsigned jobs = 1;
    bp::Config bp{};
    sp::Config sp{};
    sid::Config sid{};
    std::string csv_out;  // streamed row by row when nonempty
};

struct Row {
    double alpha = 0.0;
    std::uint32_t alpha_index = 0;
    VarId n = 0;
    std::uint64_t seed = 0;
    std::uint32_t replicate = 0;
    bool converged = false;
    double value = 0.0;  // bp: entropy, sp: complexity density, sid: unused
    std::string sid_status;
    double wall_time_s = 0.0;
    bool failed = false;  // harness-level failure (exception), recorded not raised
    std::string error;
};

struct Result {
    Spec spec;
    std::vector<Row> rows;
};

struct Aggregate {
    double alpha = 0.0;
    std::uint32_t cells = 0;
    std::uint32_t failed = 0;
    double convergence_fraction = 0.0;
    double success_fraction = 0.0;  // sid: Solved fraction
    double value_mean = 0.0;
    double value_sem = 0.0;
    std::uint32_t value_count = 0;
};

std::uint64_t cell_seed(std::uint64_t base_seed, std::uint32_t alpha_index,
                        std::uint32_t replicate);

/// "lo:hi:step" (inclusive endpoints, step > 0) or a single value.
std::vector<double> parse_alpha_range(const std::string& text);

/// Runs the whole grid on a worker pool. Per-cell failures are recorded in
/// their rows; only harness errors throw. Rows are appended (and flushed)
/// to spec.csv_out as they complete, in deterministic grid order.
Result run_sweep(const Spec& spec);

std::vector<Aggregate> aggregate(const Result& result);

std::string rows_csv(const Result& result);
std::string summary_json(const Result& result);

/// One columnar file per observable: alpha, mean, sem, count, flagged.
/// Returns the file names written.
std::vector<std::string> emit_plotdata(const Result& result, const std::string& prefix);

}  // namespace cavsat::sweep
