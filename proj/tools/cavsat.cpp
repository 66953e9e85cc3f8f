// Command line front end: instance generation, single-instance message
// passing, survey decimation, population dynamics, exact enumeration, and
// alpha sweeps, with machine-readable CSV/JSON output.

#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cavsat/decimate.hpp"
#include "cavsat/dimacs.hpp"
#include "cavsat/oracle.hpp"
#include "cavsat/popdyn.hpp"
#include "cavsat/sweep.hpp"

namespace {

using nlohmann::json;
using namespace cavsat;

void write_text(const std::string& path, const std::string& text) {
    if (path == "-" || path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << text;
}

json histogram(const std::vector<double>& values, double lo, double hi, int bins) {
    std::vector<std::uint64_t> counts(bins, 0);
    for (double v : values) {
        int b = static_cast<int>((v - lo) / (hi - lo) * bins);
        b = std::min(std::max(b, 0), bins - 1);
        counts[static_cast<std::size_t>(b)]++;
    }
    json edges = json::array();
    for (int b = 0; b <= bins; ++b) edges.push_back(lo + (hi - lo) * b / bins);
    return json{{"edges", edges}, {"counts", counts}};
}

std::string assignment_string(const Assignment& a) {
    std::string s(a.size(), '-');
    for (VarId v = 0; v < a.size(); ++v)
        if (a.is_set(v)) s[v] = a.value(v) ? '1' : '0';
    return s;
}

int cmd_gen(VarId n, double alpha, std::uint64_t seed, const std::string& out_path) {
    const Formula f = generate_random(n, alpha, seed);
    std::ostringstream comment;
    comment << "random 3-SAT n=" << n << " alpha=" << alpha << " seed=" << seed;
    write_text(out_path, write_dimacs(f, comment.str()));
    return 0;
}

int cmd_bp(const std::string& cnf, bp::Config cfg, const std::string& json_out) {
    const Formula f = read_dimacs_file(cnf);
    bp::Engine engine(f);
    const bp::Result res = engine.run(cfg);

    json j;
    j["schema_version"] = sweep::kSchemaVersion;
    j["converged"] = res.converged;
    j["contradiction"] = res.contradiction;
    j["iters"] = res.iters;
    j["residual"] = res.residual;
    j["entropy"] = res.entropy;
    if (!res.marginals.empty()) {
        std::vector<double> pt;
        pt.reserve(res.marginals.size());
        for (const auto& m : res.marginals) pt.push_back(m.pt);
        j["marginal_histogram"] = histogram(pt, 0.0, 1.0, 20);
    }
    write_text(json_out, j.dump(2) + "\n");
    return res.converged && !res.contradiction ? 0 : 1;
}

int cmd_sp(const std::string& cnf, sp::Config cfg, const std::string& json_out) {
    const Formula f = read_dimacs_file(cnf);
    sp::Engine engine(f);
    const sp::Result res = engine.run(cfg);

    json j;
    j["schema_version"] = sweep::kSchemaVersion;
    j["converged"] = res.converged;
    j["contradiction"] = res.contradiction;
    j["trivial"] = res.trivial;
    j["iters"] = res.iters;
    j["residual"] = res.residual;
    j["complexity"] = res.complexity;
    j["complexity_density"] = res.complexity_density;
    if (!res.polarization.empty())
        j["polarization_histogram"] = histogram(res.polarization, -1.0, 1.0, 20);
    write_text(json_out, j.dump(2) + "\n");
    return res.converged && !res.contradiction ? 0 : 1;
}

int cmd_sid(const std::string& cnf, sid::Config cfg, const std::string& trace_out,
            const std::string& json_out) {
    const Formula f = read_dimacs_file(cnf);
    const sid::Outcome out = sid::run_sid(f, cfg);

    if (!trace_out.empty()) {
        std::ostringstream os;
        os << "step,var,value,delta_hat,complexity_density,n_residual\n";
        for (const auto& row : out.trace)
            os << row.step << ',' << row.var << ',' << (row.value ? 1 : 0) << ','
               << std::setprecision(12) << row.delta_hat << ',' << row.complexity_density << ','
               << row.n_residual << '\n';
        write_text(trace_out, os.str());
    }

    json j;
    j["schema_version"] = sweep::kSchemaVersion;
    j["status"] = sid::to_string(out.status);
    j["steps"] = out.steps;
    j["fallback_used"] = out.fallback_used;
    if (out.status == sid::Status::Solved) {
        j["verified"] = true;  // run_sid only reports Solved after verification
        j["assignment"] = assignment_string(out.assignment);
    }
    write_text(json_out, j.dump(2) + "\n");
    return out.status == sid::Status::Solved ? 0 : 1;
}

int cmd_oracle(const std::string& cnf, bool clusters, std::uint32_t radius, std::uint64_t cap,
               const std::string& json_out) {
    const Formula f = read_dimacs_file(cnf);
    const auto res = oracle::enumerate(f, cap);

    json j;
    j["schema_version"] = sweep::kSchemaVersion;
    j["count"] = res.count;
    j["unsat"] = res.unsat();
    if (res.count > 0) j["entropy"] = res.entropy;
    if (clusters) {
        if (!res.solutions)
            throw EnumerationGuardError("clusters need materialized solutions; raise --cap");
        const auto dec = oracle::decompose_clusters(*res.solutions, f.n_vars(), radius);
        j["radius"] = radius;
        j["clusters"] = dec.clusters.size();
        json sizes = json::array(), backbones = json::array();
        for (const auto& c : dec.clusters) sizes.push_back(c.size());
        for (const auto& b : dec.backbones) backbones.push_back(b.size());
        j["cluster_sizes"] = sizes;
        j["backbone_sizes"] = backbones;
    }
    write_text(json_out, j.dump(2) + "\n");
    return 0;
}

struct PopdynCli {
    std::string mode = "sp";
    std::string alpha;
    std::string scan;
    std::string find;
    std::size_t pop_size = 100000;
    std::uint32_t burn_in = 100;
    std::uint32_t measure = 50;
    std::uint64_t seed = 1;
    std::string csv_out;
    std::string checkpoint_out;
    std::string checkpoint_in;
    std::string init = "polarized";
};

int cmd_popdyn(const PopdynCli& cli) {
    popdyn::Config cfg;
    cfg.mode = cli.mode == "bp" ? popdyn::Mode::Bp : popdyn::Mode::Sp;
    cfg.pop_size = cli.pop_size;
    cfg.burn_in = cli.burn_in;
    cfg.measure_sweeps = cli.measure;
    cfg.seed = cli.seed;
    if (cli.init == "mild")
        cfg.init = popdyn::Init::Mild;
    else if (cli.init == "trivial")
        cfg.init = popdyn::Init::Trivial;

    if (!cli.find.empty()) {
        popdyn::ThresholdEstimate est;
        if (cli.find == "alpha_c")
            est = popdyn::find_alpha_c(cfg);
        else if (cli.find == "alpha_d")
            est = popdyn::find_alpha_d(popdyn::AlphaDConfig{.seed = cli.seed});
        else if (cli.find == "alpha_b")
            est = popdyn::find_alpha_b(cfg);
        else if (cli.find == "alpha_u")
            est = popdyn::find_alpha_u(cfg);
        else if (cli.find == "sp_onset")
            est = popdyn::find_sp_onset(cfg);
        else
            throw ParseError("unknown threshold: " + cli.find);
        json j{{"schema_version", sweep::kSchemaVersion},
               {"threshold", cli.find},
               {"alpha", est.alpha},
               {"half_width", est.half_width},
               {"observable_err", est.observable_err}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    std::vector<double> alphas;
    if (!cli.scan.empty())
        alphas = sweep::parse_alpha_range(cli.scan);
    else if (!cli.alpha.empty())
        alphas = sweep::parse_alpha_range(cli.alpha);
    else
        throw ParseError("popdyn needs --alpha, --scan, or --find");

    popdyn::Population resumed;
    const popdyn::Population* init = nullptr;
    if (!cli.checkpoint_in.empty()) {
        resumed = popdyn::load_population(cli.checkpoint_in);
        init = &resumed;
    }

    std::ostringstream os;
    os << "# cavsat popdyn schema_version=" << sweep::kSchemaVersion << " mode=" << cli.mode
       << "\n";
    os << "alpha,complexity_density,err,frozen_fraction,converged\n";
    popdyn::Population last;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        popdyn::Config c = cfg;
        c.seed = derive_seed(cfg.seed, i);
        const auto res = popdyn::estimate_complexity_density(popdyn::EnsembleSpec{alphas[i]}, c,
                                                             init, &last);
        os << std::setprecision(12) << alphas[i] << ',' << res.complexity_density << ','
           << res.complexity_err << ',' << res.frozen_fraction << ','
           << (res.converged ? 1 : 0) << '\n';
    }
    if (!cli.checkpoint_out.empty() && last.size() > 0)
        popdyn::save_population(last, cli.checkpoint_out);
    write_text(cli.csv_out, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cavity-method analysis of random 3-SAT"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random 3-SAT instance");
    VarId gen_n = 100;
    double gen_alpha = 4.267;
    std::uint64_t gen_seed = 1;
    std::string gen_out = "-";
    gen->add_option("--n", gen_n, "number of variables")->required();
    gen->add_option("--alpha", gen_alpha, "clause density M/N");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output path (default stdout)");

    // bp
    auto* bpc = app.add_subcommand("bp", "belief propagation on a CNF instance");
    std::string bp_cnf, bp_json = "-";
    bp::Config bp_cfg;
    bp_cfg.tol = 1e-7;
    bpc->add_option("--cnf", bp_cnf, "DIMACS CNF input")->required();
    bpc->add_option("--tol", bp_cfg.tol, "convergence threshold");
    bpc->add_option("--damping", bp_cfg.damping, "damping factor in [0,1)");
    bpc->add_option("--max-iters", bp_cfg.max_iters, "sweep cap");
    bpc->add_option("--seed", bp_cfg.seed, "seed for init and update order");
    bpc->add_flag("--parallel", bp_cfg.parallel, "Jacobi-style parallel sweeps");
    bpc->add_option("--json-out", bp_json, "result JSON path (default stdout)");

    // sp
    auto* spc = app.add_subcommand("sp", "survey propagation on a CNF instance");
    std::string sp_cnf, sp_json = "-";
    sp::Config sp_cfg;
    sp_cfg.tol = 1e-7;
    spc->add_option("--cnf", sp_cnf, "DIMACS CNF input")->required();
    spc->add_option("--tol", sp_cfg.tol, "convergence threshold");
    spc->add_option("--damping", sp_cfg.damping, "damping factor in [0,1)");
    spc->add_option("--max-iters", sp_cfg.max_iters, "sweep cap");
    spc->add_option("--seed", sp_cfg.seed, "seed for init and update order");
    spc->add_flag("--parallel", sp_cfg.parallel, "Jacobi-style parallel sweeps");
    spc->add_option("--json-out", sp_json, "result JSON path (default stdout)");

    // sid
    auto* sidc = app.add_subcommand("sid", "survey decimation solver");
    std::string sid_cnf, sid_trace, sid_json = "-";
    sid::Config sid_cfg;
    sid_cfg.sp.tol = 1e-4;
    sid_cfg.sp.max_iters = 300;
    sidc->add_option("--cnf", sid_cnf, "DIMACS CNF input")->required();
    sidc->add_option("--seed", sid_cfg.seed, "decimation seed");
    sidc->add_option("--batch-fraction", sid_cfg.batch_fraction,
                     "fraction of residual variables fixed per re-solve (0: one variable)")
        ->check(CLI::Range(0.0, 1.0));
    sidc->add_option("--max-steps", sid_cfg.max_steps, "cap on fixed variables (0: none)");
    sidc->add_option("--sp-tol", sid_cfg.sp.tol, "survey convergence threshold");
    sidc->add_option("--sp-max-iters", sid_cfg.sp.max_iters, "survey sweep cap");
    sidc->add_option("--bias-floor", sid_cfg.bias_floor, "minimum |w_t-w_f| to fix a variable");
    sidc->add_option("--trace-out", sid_trace, "decimation trace CSV path");
    sidc->add_option("--json-out", sid_json, "outcome JSON path (default stdout)");

    // oracle
    auto* orc = app.add_subcommand("oracle", "exact enumeration (small N)");
    std::string or_cnf, or_json = "-";
    bool or_clusters = false;
    std::uint32_t or_radius = 1;
    std::uint64_t or_cap = 1000000;
    orc->add_option("--cnf", or_cnf, "DIMACS CNF input")->required();
    orc->add_flag("--clusters", or_clusters, "decompose the solution set into clusters");
    orc->add_option("--radius", or_radius, "Hamming adjacency radius");
    orc->add_option("--cap", or_cap, "solution materialization cap");
    orc->add_option("--json-out", or_json, "result JSON path (default stdout)");

    // popdyn
    auto* pdc = app.add_subcommand("popdyn", "population dynamics on the random-tree ensemble");
    PopdynCli pd;
    pdc->add_option("--mode", pd.mode, "bp or sp")->check(CLI::IsMember({"bp", "sp"}));
    pdc->add_option("--alpha", pd.alpha, "single clause density");
    pdc->add_option("--scan", pd.scan, "alpha range lo:hi:step");
    pdc->add_option("--find", pd.find, "threshold: alpha_c|alpha_d|alpha_b|alpha_u|sp_onset");
    pdc->add_option("--pop-size", pd.pop_size, "population size");
    pdc->add_option("--burn-in", pd.burn_in, "equilibration sweeps");
    pdc->add_option("--measure", pd.measure, "measurement sweeps");
    pdc->add_option("--seed", pd.seed, "population seed");
    pdc->add_option("--init", pd.init, "polarized|mild|trivial")
        ->check(CLI::IsMember({"polarized", "mild", "trivial"}));
    pdc->add_option("--csv-out", pd.csv_out, "CSV output path (default stdout)");
    pdc->add_option("--checkpoint-out", pd.checkpoint_out, "binary population checkpoint");
    pdc->add_option("--checkpoint-in", pd.checkpoint_in, "resume from a checkpoint");

    // sweep
    auto* swc = app.add_subcommand("sweep", "grid of (alpha, seed) cells");
    std::string sw_mode = "bp", sw_alpha = "4.0", sw_csv, sw_json, sw_plot;
    sweep::Spec sw;
    swc->add_option("--mode", sw_mode, "bp|sp|sid")->check(CLI::IsMember({"bp", "sp", "sid"}));
    swc->add_option("--alpha", sw_alpha, "alpha value or lo:hi:step")->required();
    swc->add_option("--n", sw.n, "variables per instance")->required();
    swc->add_option("--seeds", sw.seeds, "replicates per alpha");
    swc->add_option("--base-seed", sw.base_seed, "base seed for the cell hash");
    swc->add_option("--jobs", sw.jobs, "worker threads");
    swc->add_option("--csv-out", sw_csv, "rows CSV path");
    swc->add_option("--json-out", sw_json, "summary JSON path");
    swc->add_option("--plot-prefix", sw_plot, "write per-observable plot data files");
    swc->add_option("--tol", sw.bp.tol, "bp/sp convergence threshold");
    swc->add_option("--max-iters", sw.bp.max_iters, "bp/sp sweep cap");
    swc->add_option("--batch-fraction", sw.sid.batch_fraction, "sid batch fraction");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_n, gen_alpha, gen_seed, gen_out);
        if (bpc->parsed()) return cmd_bp(bp_cnf, bp_cfg, bp_json);
        if (spc->parsed()) return cmd_sp(sp_cnf, sp_cfg, sp_json);
        if (sidc->parsed()) return cmd_sid(sid_cnf, sid_cfg, sid_trace, sid_json);
        if (orc->parsed()) return cmd_oracle(or_cnf, or_clusters, or_radius, or_cap, or_json);
        if (pdc->parsed()) return cmd_popdyn(pd);
        if (swc->parsed()) {
            sw.mode = sw_mode == "sp" ? sweep::Mode::Sp
                                      : (sw_mode == "sid" ? sweep::Mode::Sid : sweep::Mode::Bp);
            sw.alphas = sweep::parse_alpha_range(sw_alpha);
            sw.sp.tol = sw.bp.tol;
            sw.sp.max_iters = sw.bp.max_iters;
            sw.sid.sp.tol = 1e-4;
            sw.sid.sp.max_iters = 300;
            sw.csv_out = sw_csv;
            const auto result = sweep::run_sweep(sw);
            if (!sw_json.empty()) write_text(sw_json, sweep::summary_json(result) + "\n");
            if (!sw_plot.empty()) sweep::emit_plotdata(result, sw_plot);
            if (sw_csv.empty() && sw_json.empty()) std::cout << sweep::summary_json(result) << "\n";
            return 0;  // per-cell failures live in the rows, not the exit code
        }
    } catch (const std::exception& e) {
        std::cerr << "cavsat: error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
