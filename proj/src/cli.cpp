// Copyright 2026 The qpt-fgd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qpt/cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qpt/harness.hpp"
#include "qpt/io.hpp"

namespace qpt {

namespace {

using nlohmann::json;

/// Raw flag values. Only flags that were given on the command line override the config.
struct Flags {
    int n = 2;
    std::string basis;
    std::vector<std::string> optimizers;
    std::size_t rank = 1;
    double lambda = 1.0;
    double eta_scale = 1.0;
    std::string step_mode;
    int max_iters = 10000;
    double rel_tol = 1e-9;
    int record_stride = 10;
    std::vector<std::string> noise;
    std::vector<double> xi;
    std::vector<std::size_t> measurements;
    std::vector<double> scale_c;
    int runs = 1;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string config;
    std::string trace;
    std::string target;
    bool no_trace = false;
    bool quick = false;
};

struct Registered {
    CLI::Option *n = nullptr;
    CLI::Option *basis = nullptr;
    CLI::Option *optimizer = nullptr;
    CLI::Option *rank = nullptr;
    CLI::Option *lambda = nullptr;
    CLI::Option *eta_scale = nullptr;
    CLI::Option *step_mode = nullptr;
    CLI::Option *max_iters = nullptr;
    CLI::Option *rel_tol = nullptr;
    CLI::Option *record_stride = nullptr;
    CLI::Option *noise = nullptr;
    CLI::Option *xi = nullptr;
    CLI::Option *measurements = nullptr;
    CLI::Option *scale_c = nullptr;
    CLI::Option *runs = nullptr;
    CLI::Option *seed = nullptr;
    CLI::Option *out_dir = nullptr;
    CLI::Option *config = nullptr;
};

bool given(const CLI::Option *opt) {
    return opt != nullptr && opt->count() > 0;
}

const std::vector<std::string> kNoiseNames{"none", "gaussian", "depolarizing", "coherent", "incoherent"};

Registered add_run_flags(CLI::App *app, Flags &f, bool sweep) {
    Registered r;
    r.n = app->add_option("--n", f.n, "Number of qubits")->check(CLI::Range(1, 3));
    r.basis = app->add_option("--basis", f.basis, "Operator basis")
                  ->check(CLI::IsMember({"pauli", "gellmann", "gell-mann"}));
    if (sweep) {
        r.optimizer = app->add_option("--optimizer", f.optimizers, "Optimizers (repeatable)")
                          ->check(CLI::IsMember({"gd", "fgd"}));
        r.xi = app->add_option("--xi", f.xi, "Noise strengths (repeatable)")->check(CLI::Range(0.0, 1.0));
        auto *m = app->add_option("--measurements", f.measurements, "Measurement counts (repeatable)")
                      ->check(CLI::PositiveNumber);
        auto *c = app->add_option("--scale-c", f.scale_c, "Budgets as C in m = C*r*2^d (repeatable)")
                      ->check(CLI::PositiveNumber);
        m->excludes(c);
        r.measurements = m;
        r.scale_c = c;
        r.runs = app->add_option("--runs", f.runs, "Repetitions per cell")->check(CLI::PositiveNumber);
        app->add_flag("--no-trace", f.no_trace, "Do not write per-run trace files");
    } else {
        f.optimizers = {"fgd"};
        f.xi = {0.0};
        r.optimizer = app->add_option("--optimizer", f.optimizers, "Optimizer")
                          ->expected(1)
                          ->check(CLI::IsMember({"gd", "fgd"}));
        r.xi = app->add_option("--xi", f.xi, "Noise strength")->expected(1)->check(CLI::Range(0.0, 1.0));
        auto *m = app->add_option("--measurements", f.measurements, "Measurement count")
                      ->expected(1)
                      ->check(CLI::PositiveNumber);
        auto *c = app->add_option("--scale-c", f.scale_c, "Budget as C in m = C*r*2^d")
                      ->expected(1)
                      ->check(CLI::PositiveNumber);
        m->excludes(c);
        r.measurements = m;
        r.scale_c = c;
        app->add_option("--trace", f.trace, "Write the iteration trace CSV to this path");
        app->add_option("--target", f.target, "JSON file {d, re, im} with the target unitary");
    }
    r.noise = app->add_option("--noise", f.noise, sweep ? "Noise models (repeatable)" : "Noise model")
                  ->check(CLI::IsMember(kNoiseNames));
    if (!sweep) r.noise->expected(1);
    r.rank = app->add_option("--rank", f.rank, "Factor rank r")->check(CLI::PositiveNumber);
    r.lambda = app->add_option("--lambda", f.lambda, "TP penalty weight")->check(CLI::NonNegativeNumber);
    r.eta_scale = app->add_option("--eta-scale", f.eta_scale, "Step-size scale")->check(CLI::PositiveNumber);
    r.step_mode = app->add_option("--step-mode", f.step_mode, "Step rule")
                      ->check(CLI::IsMember({"adaptive", "fixed_lipschitz", "ratio"}));
    r.max_iters = app->add_option("--max-iters", f.max_iters, "Iteration budget")->check(CLI::NonNegativeNumber);
    r.rel_tol = app->add_option("--rel-tol", f.rel_tol, "Relative objective change for stopping")
                    ->check(CLI::PositiveNumber);
    r.record_stride = app->add_option("--record-stride", f.record_stride, "Trace recording stride")
                          ->check(CLI::PositiveNumber);
    r.seed = app->add_option("--seed", f.seed, "Master seed");
    r.out_dir = app->add_option("--out-dir", f.out_dir, "Output directory");
    r.config = app->add_option("--config", f.config, "JSON experiment config")->check(CLI::ExistingFile);
    return r;
}

/// Defaults for the subcommand, then the config file, then explicit flags.
ExperimentConfig resolve_config(const Flags &f, const Registered &r, ExperimentConfig (*defaults)(int)) {
    std::optional<json> file;
    if (given(r.config)) file = read_json_file(f.config);
    int n = 2;
    if (file && file->contains("n")) n = file->at("n").get<int>();
    if (given(r.n)) n = f.n;
    ExperimentConfig cfg = defaults(n);
    if (file) cfg = config_from_json(*file, cfg);
    cfg.n = n;
    if (given(r.basis)) cfg.basis = parse_basis_kind(f.basis);
    if (given(r.optimizer)) {
        cfg.optimizers.clear();
        for (const auto &o : f.optimizers) cfg.optimizers.push_back(parse_optimizer(o));
    }
    if (given(r.noise)) {
        cfg.noise_kinds.clear();
        for (const auto &k : f.noise) cfg.noise_kinds.push_back(parse_noise_kind(k));
    }
    if (given(r.xi)) cfg.xi_grid = f.xi;
    if (given(r.measurements)) {
        cfg.measurements = f.measurements;
        cfg.scale_c.clear();
    }
    if (given(r.scale_c)) {
        cfg.scale_c = f.scale_c;
        cfg.measurements.clear();
    }
    if (given(r.runs)) cfg.runs = f.runs;
    if (given(r.rank)) cfg.solver.rank = f.rank;
    if (given(r.lambda)) cfg.solver.lambda = f.lambda;
    if (given(r.eta_scale)) cfg.solver.eta_scale = f.eta_scale;
    if (given(r.step_mode)) cfg.solver.step_mode = parse_step_mode(f.step_mode);
    if (given(r.max_iters)) cfg.solver.max_iters = f.max_iters;
    if (given(r.rel_tol)) cfg.solver.rel_tol = f.rel_tol;
    if (given(r.record_stride)) cfg.solver.record_stride = f.record_stride;
    if (given(r.seed)) cfg.master_seed = f.seed;
    if (given(r.out_dir)) cfg.output_dir = f.out_dir;
    if (f.no_trace) cfg.write_traces = false;
    cfg.validate();
    return cfg;
}

ExperimentConfig recover_defaults(int n) {
    ExperimentConfig c;
    c.n = n;
    c.optimizers = {Optimizer::FGD};
    c.noise_kinds = {NoiseKind::None};
    c.xi_grid = {0.0};
    c.runs = 1;
    return c;
}

json summary_json(const std::vector<SummaryRow> &rows) {
    json arr = json::array();
    const auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
    for (const auto &r : rows) {
        arr.push_back({{"optimizer", to_string(r.cell.optimizer)},
                       {"noise", to_string(r.cell.noise)},
                       {"xi", r.cell.xi},
                       {"C", r.cell.scale_c},
                       {"m", r.cell.m},
                       {"runs", r.runs},
                       {"failed", r.failed},
                       {"mean_fidelity", num(r.mean_fidelity)},
                       {"std_fidelity", num(r.std_fidelity)},
                       {"min_fidelity", num(r.min_fidelity)},
                       {"max_fidelity", num(r.max_fidelity)},
                       {"mean_iterations", num(r.mean_iterations)}});
    }
    return arr;
}

int cmd_recover(const ExperimentConfig &cfg, const Flags &f, std::ostream &out, std::ostream &err) {
    const Workspace ws = make_workspace(cfg.n, cfg.basis);
    RecoveryInput in;
    in.optimizer = cfg.optimizers.front();
    in.noise = NoiseSpec{cfg.noise_kinds.front(), cfg.xi_grid.empty() ? 0.0 : cfg.xi_grid.front(), 0};
    in.noise.validate();
    const std::size_t total = ws.setting_count();
    if (!cfg.measurements.empty()) {
        in.m = cfg.measurements.front();
    } else if (!cfg.scale_c.empty()) {
        in.m = measurement_count(cfg.scale_c.front(), cfg.solver.rank, cfg.n, total);
    } else {
        in.m = total;
    }
    in.master_seed = cfg.master_seed;
    in.solver = cfg.solver;
    std::optional<CMatrix> target;
    if (!f.target.empty()) target = matrix_from_json(read_json_file(f.target));

    json result{{"optimizer", to_string(in.optimizer)},
                {"noise", to_string(in.noise.kind)},
                {"xi", in.noise.xi},
                {"n", cfg.n},
                {"basis", to_string(cfg.basis)},
                {"m", in.m},
                {"seed", cfg.master_seed}};
    const auto write_trace = [&](const RunTrace &trace) {
        if (f.trace.empty()) return;
        std::ofstream tf(f.trace);
        if (!tf) throw std::runtime_error("cannot open trace file " + f.trace);
        write_trace_csv(tf, trace);
        result["trace_file"] = f.trace;
    };
    try {
        const RecoveryOutcome res = run_recovery(ws, in, target ? &*target : nullptr);
        const TraceRecord &last = res.trace.final_record();
        result["fidelity"] = last.fidelity;
        result["objective"] = last.objective;
        result["data_term"] = last.data_term;
        result["tp_defect"] = last.tp_defect;
        result["iterations"] = res.trace.iterations;
        result["converged"] = res.trace.converged;
        result["diverged"] = false;
        write_trace(res.trace);
        if (!cfg.output_dir.empty()) {
            std::filesystem::create_directories(cfg.output_dir);
            write_json_file(cfg.output_dir / "estimate.json", process_to_json(res.estimate));
            write_json_file(cfg.output_dir / "truth.json", process_to_json(res.truth));
        }
        out << result.dump() << '\n';
        err << "recover: fidelity " << last.fidelity << " after " << res.trace.iterations << " iterations\n";
        return kExitOk;
    } catch (const DivergenceError &e) {
        result["diverged"] = true;
        result["iterations"] = e.trace().iterations;
        result["error"] = e.what();
        write_trace(e.trace());
        out << result.dump() << '\n';
        err << "recover: " << e.what() << '\n';
        return kExitNumeric;
    }
}

int cmd_sweep(const ExperimentConfig &cfg, bool measurement, std::ostream &out, std::ostream &err) {
    const SweepResult res = measurement ? run_measurement_sweep(cfg) : run_noise_sweep(cfg);
    int failed = 0;
    for (const auto &r : res.records) failed += r.failed ? 1 : 0;
    json j{{"sweep", measurement ? "measurements" : "noise"},
           {"output_dir", cfg.output_dir.string()},
           {"cells", res.cells.size()},
           {"runs", cfg.runs},
           {"failed_runs", failed},
           {"summary", summary_json(res.summary)}};
    out << j.dump() << '\n';
    err << "sweep: " << res.cells.size() << " cells, " << res.records.size() << " runs, " << failed
        << " failed\n";
    return kExitOk;
}

int cmd_check(bool quick, std::uint64_t seed, const CliHooks &hooks, std::ostream &out, std::ostream &err) {
    const std::vector<CheckResult> checks = run_self_checks(quick, seed, hooks.grad_h);
    bool all = true;
    json arr = json::array();
    for (const auto &c : checks) {
        all = all && c.passed;
        arr.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"tolerance", c.tolerance}});
        err << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << c.value << " tol=" << c.tolerance
            << '\n';
    }
    out << json{{"passed", all}, {"checks", arr}}.dump() << '\n';
    return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err, const CliHooks &hooks) {
    CLI::App app{"Quantum process tomography by projected and factored gradient descent", "qpt"};
    app.require_subcommand(1);

    Flags recover_flags;
    Flags meas_flags;
    Flags noise_flags;
    Flags check_flags;
    CLI::App *recover = app.add_subcommand("recover", "Recover one random unitary process");
    const Registered recover_reg = add_run_flags(recover, recover_flags, false);
    CLI::App *sweep_m = app.add_subcommand("sweep-measurements", "Fidelity against measurement count");
    const Registered meas_reg = add_run_flags(sweep_m, meas_flags, true);
    CLI::App *sweep_n = app.add_subcommand("sweep-noise", "Fidelity under the noise models");
    const Registered noise_reg = add_run_flags(sweep_n, noise_flags, true);
    CLI::App *check = app.add_subcommand("check", "Run the self-test battery");
    check->add_flag("--quick", check_flags.quick, "Fewer random instances");
    check->add_option("--seed", check_flags.seed, "Seed of the random instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        err << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        err << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (recover->parsed()) {
            return cmd_recover(resolve_config(recover_flags, recover_reg, &recover_defaults), recover_flags, out,
                               err);
        }
        if (sweep_m->parsed()) {
            return cmd_sweep(resolve_config(meas_flags, meas_reg, &default_measurement_sweep), true, out, err);
        }
        if (sweep_n->parsed()) {
            return cmd_sweep(resolve_config(noise_flags, noise_reg, &default_noise_sweep), false, out, err);
        }
        return cmd_check(check_flags.quick, check_flags.seed, hooks, out, err);
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const nlohmann::json::exception &e) {
        err << "error: config: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
}

}  // namespace qpt
