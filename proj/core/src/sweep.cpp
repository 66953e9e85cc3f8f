#include "cavsat/sweep.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "cavsat/rng.hpp"

#include "json.hpp"

namespace cavsat::sweep {

const char* to_string(Mode m) {
    switch (m) {
        case Mode::Bp: return "bp";
        case Mode::Sp: return "sp";
        case Mode::Sid: return "sid";
    }
    return "unknown";
}

std::uint64_t cell_seed(std::uint64_t base_seed, std::uint32_t alpha_index,
                        std::uint32_t replicate) {
    return derive_seed(base_seed, alpha_index, replicate);
}

std::vector<double> parse_alpha_range(const std::string& text) {
    std::vector<double> out;
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) {
        try {
            out.push_back(std::stod(text));
        } catch (const std::exception&) {
            throw ParseError("bad alpha value: " + text);
        }
        return out;
    }
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ParseError("alpha range must be lo:hi:step, got " + text);
    double lo = 0, hi = 0, step = 0;
    try {
        lo = std::stod(text.substr(0, c1));
        hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        step = std::stod(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw ParseError("bad alpha range: " + text);
    }
    if (step <= 0 || hi < lo) throw ParseError("bad alpha range: " + text);
    for (double a = lo; a <= hi + 1e-12; a += step) out.push_back(a);
    return out;
}

namespace {

Row run_cell(const Spec& spec, std::uint32_t alpha_index, std::uint32_t replicate) {
    Row row;
    row.alpha = spec.alphas[alpha_index];
    row.alpha_index = alpha_index;
    row.n = spec.n;
    row.replicate = replicate;
    row.seed = cell_seed(spec.base_seed, alpha_index, replicate);

    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Formula f = generate_random(spec.n, row.alpha, row.seed);
        switch (spec.mode) {
            case Mode::Bp: {
                bp::Engine engine(f);
                bp::Config cfg = spec.bp;
                cfg.seed = derive_seed(row.seed, 0x10);
                const auto res = engine.run(cfg);
                row.converged = res.converged && !res.contradiction;
                row.value = res.entropy;
                break;
            }
            case Mode::Sp: {
                sp::Engine engine(f);
                sp::Config cfg = spec.sp;
                cfg.seed = derive_seed(row.seed, 0x20);
                const auto res = engine.run(cfg);
                row.converged = res.converged && !res.contradiction;
                row.value = res.complexity_density;
                break;
            }
            case Mode::Sid: {
                sid::Config cfg = spec.sid;
                cfg.seed = derive_seed(row.seed, 0x30);
                const auto out = sid::run_sid(f, cfg);
                row.converged = out.status == sid::Status::Solved;
                row.sid_status = sid::to_string(out.status);
                row.value = static_cast<double>(out.steps);
                break;
            }
        }
    } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
    }
    row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

void write_row(std::ostream& os, const Row& row) {
    os << std::setprecision(17) << row.alpha << ',' << row.n << ',' << row.seed << ','
       << (row.converged ? 1 : 0) << ',' << row.value << ','
       << (row.sid_status.empty() ? "-" : row.sid_status) << ',' << std::setprecision(6)
       << row.wall_time_s << ',' << (row.failed ? 1 : 0) << ','
       << (row.error.empty() ? "-" : row.error) << '\n';
}

}  // namespace

Result run_sweep(const Spec& spec) {
    Result result;
    result.spec = spec;
    const std::size_t n_cells = spec.alphas.size() * spec.seeds;
    result.rows.resize(n_cells);

    std::ofstream csv;
    if (!spec.csv_out.empty()) {
        csv.open(spec.csv_out);
        if (!csv) throw ParseError("cannot open CSV output: " + spec.csv_out);
        csv << "# cavsat sweep schema_version=" << kSchemaVersion
            << " mode=" << to_string(spec.mode) << "\n";
        csv << "alpha,n,seed,converged,value,sid_status,wall_time_s,failed,error\n";
        csv.flush();
    }

    std::mutex mu;
    std::size_t next_cell = 0;   // next cell to hand out
    std::size_t next_write = 0;  // next cell to persist, in grid order
    std::vector<std::uint8_t> done(n_cells, 0);

    auto worker = [&] {
        for (;;) {
            std::size_t cell;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next_cell >= n_cells) return;
                cell = next_cell++;
            }
            const auto alpha_index = static_cast<std::uint32_t>(cell / spec.seeds);
            const auto replicate = static_cast<std::uint32_t>(cell % spec.seeds);
            Row row = run_cell(spec, alpha_index, replicate);
            {
                std::lock_guard<std::mutex> lock(mu);
                result.rows[cell] = std::move(row);
                done[cell] = 1;
                while (next_write < n_cells && done[next_write]) {
                    if (csv.is_open()) {
                        write_row(csv, result.rows[next_write]);
                        csv.flush();
                    }
                    ++next_write;
                }
            }
        }
    };

    const unsigned jobs = std::max(1u, spec.jobs);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return result;
}

std::vector<Aggregate> aggregate(const Result& result) {
    std::vector<Aggregate> out;
    for (std::uint32_t ai = 0; ai < result.spec.alphas.size(); ++ai) {
        Aggregate agg;
        agg.alpha = result.spec.alphas[ai];
        double sum = 0.0, sum2 = 0.0;
        std::uint32_t solved = 0;
        for (const Row& row : result.rows) {
            if (row.alpha_index != ai) continue;
            agg.cells++;
            if (row.failed) {
                agg.failed++;
                continue;
            }
            if (row.converged) agg.convergence_fraction += 1.0;
            if (row.sid_status == "solved") ++solved;
            if (std::isfinite(row.value)) {
                sum += row.value;
                sum2 += row.value * row.value;
                agg.value_count++;
            }
        }
        const std::uint32_t ok = agg.cells - agg.failed;
        agg.convergence_fraction = ok ? agg.convergence_fraction / ok : 0.0;
        agg.success_fraction = ok ? static_cast<double>(solved) / ok : 0.0;
        if (agg.value_count > 0) {
            agg.value_mean = sum / agg.value_count;
            if (agg.value_count > 1) {
                const double var =
                    (sum2 - sum * sum / agg.value_count) / (agg.value_count - 1.0);
                agg.value_sem = std::sqrt(std::max(0.0, var) / agg.value_count);
            }
        }
        out.push_back(agg);
    }
    return out;
}

std::string rows_csv(const Result& result) {
    std::ostringstream os;
    os << "# cavsat sweep schema_version=" << kSchemaVersion
       << " mode=" << to_string(result.spec.mode) << "\n";
    os << "alpha,n,seed,converged,value,sid_status,wall_time_s,failed,error\n";
    for (const Row& row : result.rows) write_row(os, row);
    return os.str();
}

std::string summary_json(const Result& result) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["mode"] = to_string(result.spec.mode);
    j["n"] = result.spec.n;
    j["seeds"] = result.spec.seeds;
    j["base_seed"] = result.spec.base_seed;
    j["cells"] = result.rows.size();
    j["aggregates"] = nlohmann::json::array();
    for (const Aggregate& a : aggregate(result)) {
        nlohmann::json ja;
        ja["alpha"] = a.alpha;
        ja["cells"] = a.cells;
        ja["failed"] = a.failed;
        ja["convergence_fraction"] = a.convergence_fraction;
        ja["success_fraction"] = a.success_fraction;
        ja["value_mean"] = a.value_mean;
        ja["value_sem"] = a.value_sem;
        ja["value_count"] = a.value_count;
        j["aggregates"].push_back(ja);
    }
    return j.dump(2);
}

std::vector<std::string> emit_plotdata(const Result& result, const std::string& prefix) {
    const auto aggs = aggregate(result);
    std::vector<std::string> files;

    auto emit = [&](const std::string& name, auto value, auto err, auto count) {
        const std::string path = prefix + "_" + name + ".dat";
        std::ofstream out(path);
        if (!out) throw ParseError("cannot open plot data file: " + path);
        out << "# alpha " << name << " err count flagged (schema_version=" << kSchemaVersion
            << ")\n";
        for (const Aggregate& a : aggs) {
            const bool flagged = a.failed > 0 || count(a) == 0;
            out << std::setprecision(12) << a.alpha << ' ' << value(a) << ' ' << err(a) << ' '
                << count(a) << ' ' << (flagged ? 1 : 0) << '\n';
        }
        files.push_back(path);
    };

    emit(
        "value", [](const Aggregate& a) { return a.value_mean; },
        [](const Aggregate& a) { return a.value_sem; },
        [](const Aggregate& a) { return a.value_count; });
    emit(
        "convergence", [](const Aggregate& a) { return a.convergence_fraction; },
        [](const Aggregate& a) {
            const std::uint32_t ok = a.cells - a.failed;
            if (ok == 0) return 0.0;
            const double p = a.convergence_fraction;
            return std::sqrt(std::max(0.0, p * (1.0 - p) / ok));
        },
        [](const Aggregate& a) { return a.cells - a.failed; });
    if (result.spec.mode == Mode::Sid)
        emit(
            "success", [](const Aggregate& a) { return a.success_fraction; },
            [](const Aggregate& a) {
                const std::uint32_t ok = a.cells - a.failed;
                if (ok == 0) return 0.0;
                const double p = a.success_fraction;
                return std::sqrt(std::max(0.0, p * (1.0 - p) / ok));
            },
            [](const Aggregate& a) { return a.cells - a.failed; });
    return files;
}

}  // namespace cavsat::sweep
