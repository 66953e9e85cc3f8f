#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "cavsat/sweep.hpp"

using namespace cavsat;

namespace {

sweep::Spec quick_spec() {
    sweep::Spec spec;
    spec.mode = sweep::Mode::Bp;
    spec.alphas = {2.0, 3.0};
    spec.n = 60;
    spec.seeds = 4;
    spec.base_seed = 7;
    spec.jobs = 2;
    spec.bp.tol = 1e-7;
    spec.bp.max_iters = 200;
    return spec;
}

std::string strip_wall_time(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        // Column 7 holds the wall time; blank it.
        std::size_t pos = 0;
        int commas = 0;
        std::string rebuilt;
        std::size_t field_start = 0;
        for (pos = 0; pos <= line.size(); ++pos) {
            if (pos == line.size() || line[pos] == ',') {
                const std::string field = line.substr(field_start, pos - field_start);
                rebuilt += (commas == 6) ? "X" : field;
                if (pos != line.size()) rebuilt += ',';
                field_start = pos + 1;
                ++commas;
            }
        }
        out << rebuilt << '\n';
    }
    return out.str();
}

}  // namespace

TEST_CASE("cell seeds decouple alpha points and replicates") {
    std::set<std::uint64_t> seen;
    for (std::uint32_t a = 0; a < 10; ++a)
        for (std::uint32_t r = 0; r < 10; ++r) seen.insert(sweep::cell_seed(1, a, r));
    CHECK(seen.size() == 100);
    CHECK(sweep::cell_seed(1, 2, 3) == sweep::cell_seed(1, 2, 3));
    CHECK(sweep::cell_seed(1, 2, 3) != sweep::cell_seed(2, 2, 3));
}

TEST_CASE("alpha range parsing") {
    CHECK(sweep::parse_alpha_range("4.2") == std::vector<double>{4.2});
    const auto r = sweep::parse_alpha_range("3.5:4.0:0.25");
    REQUIRE(r.size() == 3);
    CHECK(r[0] == doctest::Approx(3.5));
    CHECK(r[2] == doctest::Approx(4.0));
    CHECK_THROWS_AS(sweep::parse_alpha_range("4.0:3.0:0.1"), ParseError);
    CHECK_THROWS_AS(sweep::parse_alpha_range("abc"), ParseError);
}

TEST_CASE("replaying a sweep reproduces the CSV modulo wall time") {
    const auto a = sweep::run_sweep(quick_spec());
    const auto b = sweep::run_sweep(quick_spec());
    CHECK(strip_wall_time(sweep::rows_csv(a)) == strip_wall_time(sweep::rows_csv(b)));
}

TEST_CASE("sweeps are deterministic regardless of pool width") {
    sweep::Spec one = quick_spec();
    one.jobs = 1;
    sweep::Spec many = quick_spec();
    many.jobs = 4;
    const auto a = sweep::run_sweep(one);
    const auto b = sweep::run_sweep(many);
    CHECK(strip_wall_time(sweep::rows_csv(a)) == strip_wall_time(sweep::rows_csv(b)));
}

TEST_CASE("aggregates recomputed from rows match the summary") {
    const auto result = sweep::run_sweep(quick_spec());
    const auto aggs = sweep::aggregate(result);
    REQUIRE(aggs.size() == 2);
    for (const auto& agg : aggs) {
        double sum = 0.0;
        std::uint32_t count = 0, conv = 0, cells = 0;
        for (const auto& row : result.rows) {
            if (row.alpha != agg.alpha) continue;
            ++cells;
            if (row.failed) continue;
            if (row.converged) ++conv;
            sum += row.value;
            ++count;
        }
        CHECK(cells == agg.cells);
        CHECK(count == agg.value_count);
        CHECK(agg.value_mean == doctest::Approx(sum / count).epsilon(1e-12));
        CHECK(agg.convergence_fraction ==
              doctest::Approx(static_cast<double>(conv) / cells).epsilon(1e-12));
    }
    // The emitted JSON round-trips the same numbers.
    const std::string json_text = sweep::summary_json(result);
    CHECK(json_text.find("\"aggregates\"") != std::string::npos);
}

TEST_CASE("empty grids succeed with no rows") {
    sweep::Spec spec = quick_spec();
    spec.alphas.clear();
    const auto result = sweep::run_sweep(spec);
    CHECK(result.rows.empty());
    CHECK(sweep::aggregate(result).empty());
}

TEST_CASE("plot data carries mean, sem and flags") {
    const std::string prefix = "sweep_plot_test";
    SUBCASE("single cell has zero sem") {
        sweep::Spec spec = quick_spec();
        spec.alphas = {2.5};
        spec.seeds = 1;
        const auto result = sweep::run_sweep(spec);
        const auto files = sweep::emit_plotdata(result, prefix);
        REQUIRE(!files.empty());
        std::ifstream in(files[0]);
        std::string header, row;
        std::getline(in, header);
        std::getline(in, row);
        std::istringstream is(row);
        double alpha, mean, sem;
        int count, flagged;
        is >> alpha >> mean >> sem >> count >> flagged;
        CHECK(alpha == doctest::Approx(2.5));
        CHECK(sem == doctest::Approx(0.0));
        CHECK(count == 1);
        CHECK(flagged == 0);
        for (const auto& fpath : files) std::remove(fpath.c_str());
    }
    SUBCASE("sem over replicates matches the standard error") {
        sweep::Spec spec = quick_spec();
        spec.alphas = {2.0};
        spec.seeds = 10;
        const auto result = sweep::run_sweep(spec);
        const auto aggs = sweep::aggregate(result);
        double sum = 0.0, sum2 = 0.0;
        for (const auto& row : result.rows) {
            sum += row.value;
            sum2 += row.value * row.value;
        }
        const double mean = sum / 10.0;
        const double sem = std::sqrt((sum2 - 10.0 * mean * mean) / 9.0 / 10.0);
        CHECK(aggs[0].value_sem == doctest::Approx(sem).epsilon(1e-9));
    }
}

TEST_CASE("csv streaming writes rows in grid order") {
    sweep::Spec spec = quick_spec();
    spec.csv_out = "sweep_stream_test.csv";
    const auto result = sweep::run_sweep(spec);
    std::ifstream in(spec.csv_out);
    REQUIRE(in.good());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(strip_wall_time(text) == strip_wall_time(sweep::rows_csv(result)));
    std::remove(spec.csv_out.c_str());
}
