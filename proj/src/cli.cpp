#include "mb/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "mb/config.hpp"
#include "mb/error.hpp"
#include "mb/estimates_lab.hpp"
#include "mb/io.hpp"
#include "mb/nonlinear.hpp"
#include "mb/norms.hpp"
#include "mb/oracle.hpp"
#include "mb/resonance.hpp"
#include "mb/utm_linear.hpp"
#include "mb/validation.hpp"

namespace mb::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
    std::string config;
    std::string out = "mb_out";
    std::uint64_t seed = 7;
    int threads = 0;
};

struct SolveOpts {
    std::vector<std::string> plots;
    std::size_t snapshot_index = 0;
};

struct LinearOpts {
    std::string method = "utm";
};

struct ResonanceOpts {
    double alpha_min = 0.2, alpha_max = 6.0;
    std::size_t steps = 30;
};

struct CounterOpts {
    double alpha = 4.0, s = 0.0, b = 0.0;
    std::vector<double> N{16, 32, 64, 128};
};

struct NormsOpts {
    std::string solution = "linear";
};

struct ValidateOpts {
    std::string suite = "all";
};

RunConfig load_checked(const Globals& g) {
    if (g.config.empty()) fail(ErrorKind::ParameterOutOfRange, "config", "this subcommand needs --config PATH");
    RunConfig c = load_config(g.config);
    c.validate();
    return c;
}

IterationConfig iteration_config(const RunConfig& c, const Globals& g) {
    IterationConfig it;
    it.T_star = c.solver.T_star;
    it.max_iters = c.solver.max_iters;
    it.tol = c.solver.tol;
    it.c0 = c.solver.c0;
    it.coupling = {c.solver.coupling_u, c.solver.coupling_v};
    it.indices = c.indices;
    it.parallel = g.threads != 1;
    return it;
}

void finish(const Globals& g, const std::string& sub, const std::vector<std::string>& args,
            const std::vector<fs::path>& written) {
    io::RunManifest m;
    m.subcommand = sub;
    m.config_path = g.config;
    m.out_dir = g.out;
    m.seed = g.seed;
    m.threads = g.threads;
    m.timestamp = io::utc_timestamp();
    m.args = args;
    const fs::path mp = fs::path(g.out) / "manifest.json";
    io::write_text(mp, io::json_text(m.to_json()));
    std::vector<fs::path> seen;
    for (const auto& p : written) {
        if (std::find(seen.begin(), seen.end(), p) != seen.end()) continue;
        seen.push_back(p);
        std::cout << p.string() << "\n";
    }
    std::cout << mp.string() << "\n";
}

// ---- subcommands; each returns the files it wrote

std::vector<fs::path> run_solve(const Globals& g, const SolveOpts& o) {
    const RunConfig c = load_checked(g);
    const IterationConfig it = iteration_config(c, g);
    const SolutionField sol = picard_solve(c.params, c.grid, c.data(), it);
    const fs::path dir(g.out);
    std::vector<fs::path> w{dir / "solution.csv", dir / "conserved.csv", dir / "meta.json", dir / "config.toml"};
    const ConservedSeries cs = conserved_quantities(sol, c.params.alpha);
    json meta = sol.meta;
    meta["conserved_drift"] = {{"E_relative", std::abs(cs.E.back() - cs.E.front()) / std::max(cs.E.front(), 1e-300)},
                               {"mass_u", std::abs(cs.mass_u.back() - cs.mass_u.front())},
                               {"mass_v", std::abs(cs.mass_v.back() - cs.mass_v.front())},
                               {"H", std::abs(cs.H.back() - cs.H.front())}};
    io::write_text(w[0], io::solution_csv(sol));
    io::write_text(w[1], io::conserved_csv(cs));
    io::write_text(w[2], io::json_text(meta));
    save_config(c, w[3]);
    for (const auto& k : o.plots) {
        const auto extra = io::emit_plotdata(sol, io::parse_plot_kind(k), dir, c.params.alpha, o.snapshot_index);
        w.insert(w.end(), extra.begin(), extra.end());
    }
    return w;
}

std::vector<fs::path> run_linear(const Globals& g, const LinearOpts& o) {
    const RunConfig c = load_checked(g);
    const ProblemData d = c.data();
    const LinearProblem pu = LinearProblem::u_equation(c.params, c.grid, d);
    const LinearProblem pv = LinearProblem::v_equation(c.params, c.grid, d);
    auto solve = [&](const LinearProblem& p) {
        if (o.method == "utm") return solve_linear(p);
        if (o.method == "superposition") return solve_forced_by_superposition(p);
        if (o.method == "oracle") return oracle_linear(p);
        fail(ErrorKind::ParameterOutOfRange, "method", "expected utm, superposition or oracle");
    };
    FieldSlice su = solve(pu), sv = solve(pv);
    SolutionField sol;
    sol.grid = c.grid;
    sol.u = std::move(su.values);
    sol.v = std::move(sv.values);
    const json meta = {{"method", o.method}, {"u", su.meta}, {"v", sv.meta}};
    const fs::path dir(g.out);
    std::vector<fs::path> w{dir / "solution.csv", dir / "meta.json"};
    io::write_text(w[0], io::solution_csv(sol));
    io::write_text(w[1], io::json_text(meta));
    return w;
}

std::vector<fs::path> run_resonance(const Globals& g, const ResonanceOpts& o) {
    std::vector<std::vector<double>> rows;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const ResonanceRow& r : resonance_sweep(o.alpha_min, o.alpha_max, o.steps)) {
        const auto& geo = r.geom;
        rows.push_back({r.alpha, r.sc.value, r.sc.inclusive ? 1.0 : 0.0, geo.r1.real(), geo.r1.imag(), geo.r2.real(),
                        geo.r2.imag(), geo.p1.value_or(nan), geo.p2.value_or(nan), geo.q.value_or(nan), geo.delta});
    }
    const fs::path p = fs::path(g.out) / "resonance.csv";
    io::write_text(p, io::csv_table({"alpha", "s_c", "s_c_inclusive", "r1_re", "r1_im", "r2_re", "r2_im", "p1", "p2",
                                     "q", "delta"},
                                    rows));
    return {p};
}

std::vector<fs::path> run_counterexample(const Globals& g, const CounterOpts& o) {
    const ScalingResult r = counterexample_scaling(o.alpha, o.s, o.N, o.b);
    std::vector<std::vector<double>> rows;
    for (const ScalingRow& row : r.rows) rows.push_back({row.N, row.theta_norm, row.cf_norm, row.ratio, row.local_slope});
    const fs::path dir(g.out);
    std::vector<fs::path> w{dir / "counterexample.csv", dir / "meta.json"};
    io::write_text(w[0], io::csv_table({"N", "theta_norm", "cf_norm", "ratio", "local_slope"}, rows));
    const json meta = {{"alpha", r.alpha},           {"s", r.s},         {"b", r.b},
                       {"construction", int(r.construction)}, {"slope", r.slope}, {"ratio_slope", r.ratio_slope}};
    io::write_text(w[1], io::json_text(meta));
    return w;
}

json field_norms(const Field2D& f, const GridSpec& grid, const SobolevIndices& ix, double alpha) {
    const SpaceTimeSample w = canonical_extension(f, grid.dx(), grid.dt(), grid.L / 4.0);
    return {{"bourgain", bourgain_norm(w, ix.s, ix.b, alpha)},
            {"modified_bourgain", modified_bourgain_norm(w, ix.s, ix.b, ix.theta, alpha)},
            {"temporal", temporal_norm(w, ix.s, ix.b, alpha)},
            {"spectral_tail_ratio", spectral_tail_ratio(w)}};
}

std::vector<fs::path> run_norms(const Globals& g, const NormsOpts& o) {
    const RunConfig c = load_checked(g);
    const ProblemData d = c.data();
    const double s = c.indices.s;
    const double sb = c.params.boundary == BoundaryKind::Dirichlet ? (s + 1.0) / 3.0 : s / 3.0;
    json out = {{"indices", {{"s", s}, {"b", c.indices.b}, {"theta", c.indices.theta}}},
                {"data",
                 {{"u0_Hs", sobolev_norm(d.u0, c.grid.dx(), s)},
                  {"v0_Hs", sobolev_norm(d.v0, c.grid.dx(), s)},
                  {"bdry_u", sobolev_norm(d.bdry_u, c.grid.dt(), sb)},
                  {"bdry_v", sobolev_norm(d.bdry_v, c.grid.dt(), sb)},
                  {"boundary_index", sb}}},
                {"suggested_T_star",
                 suggest_lifespan(d, c.grid, c.params.boundary, s, c.solver.c0, c.indices.beta())}};
    if (o.solution != "none") {
        SolutionField sol;
        if (o.solution == "linear") {
            sol.grid = c.grid;
            sol.u = solve_linear(LinearProblem::u_equation(c.params, c.grid, d)).values;
            sol.v = solve_linear(LinearProblem::v_equation(c.params, c.grid, d)).values;
        } else if (o.solution == "nonlinear") {
            sol = picard_solve(c.params, c.grid, d, iteration_config(c, g));
        } else {
            fail(ErrorKind::ParameterOutOfRange, "solution", "expected linear, nonlinear or none");
        }
        out["solution"] = {{"kind", o.solution},
                           {"u", field_norms(sol.u, c.grid, c.indices, 1.0)},
                           {"v", field_norms(sol.v, c.grid, c.indices, c.params.alpha)}};
    }
    const fs::path p = fs::path(g.out) / "norms.json";
    io::write_text(p, io::json_text(out));
    return {p};
}

std::vector<fs::path> run_validate(const Globals& g, const ValidateOpts& o, bool& all_passed) {
    const std::vector<CheckResult> results = run_suite(o.suite, g.seed);
    json report = json::array();
    all_passed = true;
    for (const CheckResult& r : results) {
        std::cout << summary_line(r) << "\n";
        report.push_back(to_json(r));
        all_passed = all_passed && r.passed;
    }
    const fs::path p = fs::path(g.out) / "validate.json";
    io::write_text(p, io::json_text(json{{"suite", o.suite}, {"seed", g.seed}, {"checks", report}}));
    return {p};
}

void error_line(const std::string& kind, const std::string& field, const std::string& message) {
    std::cerr << json{{"error", kind}, {"field", field}, {"message", message}}.dump() << std::endl;
}

// `--manifest PATH [--out DIR]` reruns the recorded command line.
std::vector<std::string> expand_manifest(const std::vector<std::string>& args) {
    std::string path, out;
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--manifest" && k + 1 < args.size()) path = args[++k];
        else if (args[k] == "--out" && k + 1 < args.size()) out = args[++k];
        else if (args[k].rfind("--manifest=", 0) == 0) path = args[k].substr(11);
        else if (args[k].rfind("--out=", 0) == 0) out = args[k].substr(6);
        else fail(ErrorKind::ParameterOutOfRange, args[k], "--manifest accepts only --out alongside it");
    }
    const io::RunManifest m = io::load_manifest(path);
    std::vector<std::string> rerun;
    for (std::size_t k = 0; k < m.args.size(); ++k) {
        if (m.args[k] == "--out") {
            ++k;
            continue;
        }
        if (m.args[k].rfind("--out=", 0) == 0) continue;
        rerun.push_back(m.args[k]);
    }
    rerun.insert(rerun.begin(), {"--out", out.empty() ? m.out_dir : out});
    return rerun;
}

}  // namespace

int run(const std::vector<std::string>& raw_args) {
    std::vector<std::string> args = raw_args;
    try {
        for (const auto& a : raw_args)
            if (a == "--manifest" || a.rfind("--manifest=", 0) == 0) {
                args = expand_manifest(raw_args);
                break;
            }
    } catch (const Error& e) {
        std::cerr << e.record() << std::endl;
        return 1;
    }

    CLI::App app{"Majda-Biello half-line solver and analysis lab", "mb"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "run configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", g.out, "output directory")->capture_default_str();
    app.add_option("--seed", g.seed, "seed for randomized sweeps")->capture_default_str();
    app.add_option("--threads", g.threads, "1 runs serially, 0 picks automatically")->check(CLI::NonNegativeNumber);
    std::string manifest_path;  // consumed by expand_manifest before parsing
    app.add_option("--manifest", manifest_path, "rerun from a manifest.json (accepts --out alongside)");
    app.fallthrough();

    SolveOpts so;
    auto* solve = app.add_subcommand("solve", "nonlinear system by Picard iteration");
    solve->add_option("--plot", so.plots, "snapshot, waterfall or conserved (repeatable)");
    solve->add_option("--snapshot-index", so.snapshot_index, "time index for the snapshot plot");

    LinearOpts lo;
    auto* linear = app.add_subcommand("linear", "both linear equations with the configured data");
    linear->add_option("--method", lo.method, "utm, superposition or oracle")->capture_default_str();

    ResonanceOpts ro;
    auto* reson = app.add_subcommand("resonance", "critical exponent and resonance geometry over an alpha sweep");
    reson->add_option("--alpha-min", ro.alpha_min)->capture_default_str();
    reson->add_option("--alpha-max", ro.alpha_max)->capture_default_str();
    reson->add_option("--steps", ro.steps)->capture_default_str();

    CounterOpts co;
    auto* counter = app.add_subcommand("counterexample", "norm scaling of the bilinear counterexamples");
    counter->add_option("--alpha", co.alpha)->capture_default_str();
    counter->add_option("--s", co.s)->capture_default_str();
    counter->add_option("--b", co.b)->capture_default_str();
    counter->add_option("--N", co.N, "frequency scale (repeatable)")->take_all();

    NormsOpts no;
    auto* norms = app.add_subcommand("norms", "data norms, lifespan hint and space-time norms of a solution");
    norms->add_option("--solution", no.solution, "linear, nonlinear or none")->capture_default_str();

    ValidateOpts vo;
    auto* validate = app.add_subcommand("validate", "end-to-end checks; exit 2 when one fails");
    validate->add_option("--suite", vo.suite)->check(CLI::IsMember(suite_names()))->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << app.help() << std::flush;
        error_line("UsageError", "", e.what());
        return 1;
    }

    try {
        std::vector<fs::path> written;
        bool passed = true;
        std::string sub = app.get_subcommands().front()->get_name();
        if (solve->parsed()) written = run_solve(g, so);
        else if (linear->parsed()) written = run_linear(g, lo);
        else if (reson->parsed()) written = run_resonance(g, ro);
        else if (counter->parsed()) written = run_counterexample(g, co);
        else if (norms->parsed()) written = run_norms(g, no);
        else written = run_validate(g, vo, passed);
        finish(g, sub, args, written);
        return passed ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << e.record() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        error_line("InternalError", "", e.what());
        return 1;
    }
}

}  // namespace mb::cli
