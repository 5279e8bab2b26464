// plgs command line: ground states, mountain-pass solutions, thresholds,
// epsilon sweeps and boundary-layer profiles from a JSON config.
//
// Exit codes: 0 ok, 2 config error, 3 non-convergence, 4 internal numerical error
// (a failing `check` also exits with 4).

#include "check.hpp"
#include "config.hpp"
#include "report.hpp"

#include "plgs/asymptotics.hpp"
#include "plgs/errors.hpp"
#include "plgs/rayleigh.hpp"
#include "plgs/solver.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace plgs;
using namespace plgs::cli;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNotConverged = 3;
constexpr int kNumericalError = 4;

struct Flags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    bool svg = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON experiment config (defaults: 1D model a = b = 1, p,q,gamma = 2,3,4)");
    cmd->add_option("--out", f.out, "output directory (overrides output.dir)");
    cmd->add_option("--seed", f.seed, "random seed for restarts and sampling");
    cmd->add_option("--threads", f.threads, "worker threads for sweep rows")->check(CLI::PositiveNumber);
    cmd->add_flag("--svg", f.svg, "emit SVG charts (sweep)");
}

ExperimentConfig resolve(const Flags& f) {
    ExperimentConfig cfg = f.config.empty() ? parse_config("{}") : load_config(f.config);
    if (f.seed) {
        set_seed(cfg, *f.seed);
    }
    if (!f.out.empty()) {
        cfg.output_dir = f.out;
    }
    cfg.sweep.threads = f.threads;
    fs::create_directories(cfg.output_dir);
    return cfg;
}

std::string path_in(const ExperimentConfig& cfg, const char* name) {
    return (fs::path(cfg.output_dir) / name).string();
}

void write_json(const ExperimentConfig& cfg, const char* name, const ojson& j) {
    write_file(path_in(cfg, name), j.dump(2) + "\n");
}

ojson header(const ExperimentConfig& cfg, const ProblemSpec& spec) {
    ojson j;
    j["config"] = to_json(cfg);
    j["mesh"] = mesh_json(spec.mesh());
    j["epsilon"] = spec.epsilon();
    return j;
}

int cmd_solve(const ExperimentConfig& cfg) {
    const ProblemSpec spec = make_problem(cfg);
    const SolveReport rep = solve_ground_state(spec, std::nullopt, cfg.solver);
    std::optional<NehariDiagnostics> diag;
    if (!rep.trivial) {
        diag = nehari_diagnostics(rep.field, spec);
    }
    ojson j = header(cfg, spec);
    j["ground_state"] = solve_json(rep, diag ? &*diag : nullptr);
    write_json(cfg, "solve.json", j);
    write_file(path_in(cfg, "ground_state.csv"), field_csv(rep.field));
    write_json(cfg, "ground_state_field.json", field_snapshot_json(rep.field));
    write_file(path_in(cfg, "trace.csv"), trace_csv(rep.trace));
    std::cout << "energy " << num(rep.energy) << "  residual " << num(rep.residual_norm) << "  nehari "
              << num(rep.nehari_residual) << (rep.trivial ? "  (zero field)" : "")
              << (rep.converged ? "" : "  NOT CONVERGED") << '\n';
    return rep.converged ? kOk : kNotConverged;
}

int cmd_second(const ExperimentConfig& cfg) {
    const ProblemSpec spec = make_problem(cfg);
    const SolveReport gs = solve_ground_state(spec, std::nullopt, cfg.solver);
    ojson j = header(cfg, spec);
    j["ground_state"] = solve_json(gs, nullptr);
    if (!gs.converged || gs.trivial || !(gs.energy < 0.0)) {
        j["mountain_pass"] = nullptr;
        j["reason"] = "no ground state with negative energy at this eps";
        write_json(cfg, "second.json", j);
        std::cout << "no ground state with negative energy; mountain pass skipped\n";
        return kNotConverged;
    }
    const MountainPassReport mp = solve_mountain_pass(spec, gs.field, cfg.mountain_pass);
    const BarrierReport barrier = barrier_check(spec, cfg.barrier_samples, cfg.solver.seed);
    j["mountain_pass"] = mountain_pass_json(mp);
    j["barrier"] = barrier_json(barrier);
    write_json(cfg, "second.json", j);
    write_file(path_in(cfg, "ground_state.csv"), field_csv(gs.field));
    write_file(path_in(cfg, "second_solution.csv"), field_csv(mp.field));
    std::cout << "ground energy " << num(gs.energy) << "  mountain-pass energy " << num(mp.energy)
              << "  barrier delta " << num(barrier.delta) << (mp.converged ? "" : "  NOT CONVERGED") << '\n';
    return mp.converged ? kOk : kNotConverged;
}

int cmd_thresholds(const ExperimentConfig& cfg) {
    const ProblemSpec spec = make_problem(cfg);
    const ThresholdEstimate est = estimate_thresholds(spec, cfg.thresholds);
    ojson j = header(cfg, spec);
    j["thresholds"] = thresholds_json(est, extremal_constants(cfg.exponents));
    j["maximizer"] = field_snapshot_json(est.maximizer);
    write_json(cfg, "thresholds.json", j);
    write_file(path_in(cfg, "maximizer.csv"), field_csv(est.maximizer));
    std::cout << "eps_star " << num(est.eps_star) << "  eps_e_star " << num(est.eps_e_star) << '\n';
    return kOk;
}

int cmd_sweep(const ExperimentConfig& cfg, bool svg) {
    if (cfg.eps_list.empty()) {
        throw ConfigIssue("/eps_list: sweep needs a non-empty eps_list", cfg.line_of("/eps_list"));
    }
    if (!(make_coefficient(cfg.a, cfg).lower > 0.0)) {
        throw ConfigIssue("/a: asymptotics requires a >= sigma_a > 0", cfg.line_of("/a"));
    }
    const ProblemSpec spec = make_problem(cfg);
    SweepOptions opt = cfg.sweep;
    opt.solver = cfg.solver;
    const SweepReport rep = epsilon_sweep(spec, cfg.eps_list, opt);
    write_file(path_in(cfg, "sweep.csv"), sweep_csv(rep));
    if (svg) {
        write_file(path_in(cfg, "sweep.svg"), sweep_svg(rep));
    }
    ojson j = header(cfg, spec);
    j["J_limit"] = rep.J_limit;
    j["eta"] = rep.eta;
    ojson rows = ojson::array();
    bool all_converged = true;
    for (const auto& row : rep.rows) {
        ojson r;
        r["eps"] = row.eps;
        r["energy"] = row.metrics.energy;
        r["energy_gap"] = row.metrics.energy_gap;
        r["J_gap"] = row.metrics.J_gap;
        r["measure_bad"] = row.metrics.measure_bad;
        ojson lr = ojson::array();
        for (const auto& [rr, v] : row.metrics.lr_errors) {
            lr.push_back({{"r", rr}, {"error", v}});
        }
        r["lr_errors"] = lr;
        r["linf_interior_err"] = row.metrics.linf_interior_err;
        r["converged"] = row.converged;
        r["trivial"] = row.trivial;
        r["above_threshold"] = row.above_threshold;
        r["iterations"] = row.iterations;
        rows.push_back(r);
        all_converged = all_converged && row.converged;
        std::cout << "eps " << num(row.eps) << "  gap " << num(row.metrics.energy_gap) << "  meas "
                  << num(row.metrics.measure_bad) << (row.converged ? "" : "  NOT CONVERGED") << '\n';
    }
    j["rows"] = rows;
    write_json(cfg, "sweep.json", j);
    return all_converged ? kOk : kNotConverged;
}

int cmd_layer(const ExperimentConfig& cfg) {
    if (cfg.exponents.p != 2.0) {
        throw ConfigIssue("/exponents/p: the boundary-layer profile is defined for p = 2 only",
                          cfg.line_of("/exponents/p"));
    }
    const LayerProfile prof = layer_profile_1d(cfg.exponents.q, cfg.exponents.gamma, cfg.layer_xi_max, cfg.layer_points);
    write_file(path_in(cfg, "layer.csv"), layer_csv(prof));
    ojson j;
    j["config"] = to_json(cfg);
    j["q"] = prof.q;
    j["gamma"] = prof.gamma;
    j["xi_max"] = cfg.layer_xi_max;
    j["points"] = cfg.layer_points;
    j["deficit_at_xi_max"] = prof.deficit.back();
    const DomainConfig& d = cfg.domain;
    int status = kOk;
    if (d.type == "interval" && d.x0 == 0.0 && d.x1 == 1.0) {
        const ProblemSpec spec = make_problem(cfg);
        const SolveReport gs = solve_ground_state(spec, std::nullopt, cfg.solver);
        const DiscreteField comp = composite_approx_1d(cfg.epsilon, spec.mesh_ptr(), prof);
        double diff = 0.0;
        std::ostringstream csv;
        csv << "x,composite,u\n";
        for (std::size_t i = 0; i < comp.size(); ++i) {
            diff = std::max(diff, std::abs(comp[i] - gs.field[i]));
            csv << num(spec.mesh().node(i).x) << ',' << num(comp[i]) << ',' << num(gs.field[i]) << '\n';
        }
        write_file(path_in(cfg, "composite.csv"), csv.str());
        j["composite"] = {{"epsilon", cfg.epsilon},
                          {"xi_needed", 1.0 / std::sqrt(cfg.epsilon)},
                          {"max_abs_diff", diff},
                          {"ground_state_converged", gs.converged}};
        std::cout << "composite vs ground state: max |diff| " << num(diff) << '\n';
        status = gs.converged ? kOk : kNotConverged;
    }
    write_json(cfg, "layer.json", j);
    std::cout << "1 - U(xi_max) = " << num(prof.deficit.back()) << '\n';
    return status;
}

int cmd_check(const ExperimentConfig& cfg) {
    const int failures = run_checks(std::cout, cfg.solver.seed);
    std::cout << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed") << '\n';
    return failures == 0 ? kOk : kNumericalError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational solver and verification toolkit for -eps Delta_p u = a u^{q-1} - b u^{gamma-1}"};
    app.require_subcommand(1);
    Flags flags;
    auto* solve = app.add_subcommand("solve", "ground state and Nehari diagnostics");
    auto* second = app.add_subcommand("second", "mountain-pass solution and barrier check");
    auto* thresholds = app.add_subcommand("thresholds", "estimate eps* and eps_e*");
    auto* sweep = app.add_subcommand("sweep", "ground states along eps_list with convergence metrics");
    auto* layer = app.add_subcommand("layer", "boundary-layer profile and composite comparison");
    auto* check = app.add_subcommand("check", "run the invariant suite");
    for (auto* cmd : {solve, second, thresholds, sweep, layer, check}) {
        add_flags(cmd, flags);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        const ExperimentConfig cfg = resolve(flags);
        if (solve->parsed()) {
            return cmd_solve(cfg);
        }
        if (second->parsed()) {
            return cmd_second(cfg);
        }
        if (thresholds->parsed()) {
            return cmd_thresholds(cfg);
        }
        if (sweep->parsed()) {
            return cmd_sweep(cfg, flags.svg);
        }
        if (layer->parsed()) {
            return cmd_layer(cfg);
        }
        return cmd_check(cfg);
    } catch (const ConfigIssue& e) {
        std::cerr << "config error";
        if (e.line() > 0) {
            std::cerr << " (line " << e.line() << ")";
        }
        std::cerr << ": " << e.what() << '\n';
        return kConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumericalError;
    }
}
