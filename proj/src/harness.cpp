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


#include "qpt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <thread>

#include "qpt/io.hpp"
#include "qpt/random.hpp"

namespace qpt {

namespace {

using nlohmann::json;

template <typename T>
T enum_from(const json &j, T (*parse)(std::string_view)) {
    return parse(j.get<std::string>());
}

void require_known_keys(const json &j, std::initializer_list<std::string_view> keys, const char *where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
            throw DomainError(std::string("config: unknown key '") + it.key() + "' in " + where);
        }
    }
}

SolverConfig solver_from_json(const json &j, SolverConfig s) {
    require_known_keys(j, {"lambda", "step_mode", "eta_scale", "max_iters", "rel_tol", "rank", "record_stride"},
                       "solver");
    if (j.contains("lambda")) s.lambda = j.at("lambda").get<double>();
    if (j.contains("step_mode")) s.step_mode = enum_from(j.at("step_mode"), &parse_step_mode);
    if (j.contains("eta_scale")) s.eta_scale = j.at("eta_scale").get<double>();
    if (j.contains("max_iters")) s.max_iters = j.at("max_iters").get<int>();
    if (j.contains("rel_tol")) s.rel_tol = j.at("rel_tol").get<double>();
    if (j.contains("rank")) s.rank = j.at("rank").get<std::size_t>();
    if (j.contains("record_stride")) s.record_stride = j.at("record_stride").get<int>();
    return s;
}

std::string xi_label(double xi) {
    return format_number(xi);
}

double mean_of(const std::vector<double> &v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

double population_std(const std::vector<double> &v, double mean) {
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

std::string to_string(Optimizer opt) {
    return opt == Optimizer::GD ? "gd" : "fgd";
}

Optimizer parse_optimizer(std::string_view text) {
    if (text == "gd" || text == "adaGD") return Optimizer::GD;
    if (text == "fgd" || text == "adaFGD") return Optimizer::FGD;
    throw DomainError("unknown optimizer '" + std::string(text) + "'");
}

Workspace make_workspace(int n_qubits, BasisKind kind) {
    OperatorBasis basis = make_basis(kind, n_qubits);
    PreparationSet prep = generic_input_states(basis.dim());
    Povm povm = pure_state_povm(basis.dim());
    SensingOperators ops(prep, povm, basis);
    return Workspace{n_qubits, std::move(basis), std::move(prep), std::move(povm), std::move(ops)};
}

RepSeeds derive_rep_seeds(std::uint64_t master, NoiseKind kind, std::size_t m, int rep) {
    const auto r = static_cast<std::uint64_t>(rep);
    return RepSeeds{
        derive_seed(master, {label_hash("truth"), r}),
        derive_seed(master, {label_hash("plan"), static_cast<std::uint64_t>(m), r}),
        derive_seed(master, {label_hash("init"), r}),
        derive_seed(master, {label_hash("noise"), label_hash(to_string(kind)), r}),
    };
}

RecoveryOutcome run_recovery(const Workspace &ws, const RecoveryInput &in, const CMatrix *target) {
    const std::size_t total = ws.setting_count();
    const std::size_t m = in.m == 0 ? total : in.m;
    if (m > total) {
        throw SizeError("measurement count exceeds the " + std::to_string(total) + " available settings");
    }
    const RepSeeds seeds = derive_rep_seeds(in.master_seed, in.noise.kind, m, in.rep);
    RecoveryOutcome out;
    out.truth = chi_from_unitary(target != nullptr ? *target : random_target_unitary(ws.dim(), seeds.truth),
                                 ws.basis);
    out.plan = m == total ? full_plan(ws.prep.size(), ws.povm.size())
                          : subsample_plan(ws.prep.size(), ws.povm.size(), m, seeds.plan);
    NoiseSpec noise = in.noise;
    noise.seed = seeds.noise;
    const MeasurementVector f = simulate_measurements(out.truth, ws.basis, ws.ops, out.plan, noise, seeds.noise);
    SolverConfig solver = in.solver;
    solver.seed = seeds.init;
    const Problem problem(ws.ops, out.plan, ws.basis, f.values, solver.lambda);
    if (in.optimizer == Optimizer::GD) {
        GdResult r = run_gd(problem, solver, &out.truth);
        out.estimate = std::move(r.estimate);
        out.trace = std::move(r.trace);
    } else {
        FgdResult r = run_fgd(problem, solver, &out.truth);
        out.estimate = r.estimate.process();
        out.trace = std::move(r.trace);
    }
    return out;
}

void ExperimentConfig::validate() const {
    if (n < 1 || n > 3) throw SizeError("config: n must be in [1, 3] (dense sensing operators grow as 32^n)");
    if (runs < 1) throw DomainError("config: runs must be >= 1");
    if (optimizers.empty()) throw DomainError("config: at least one optimizer is required");
    if (noise_kinds.empty()) throw DomainError("config: at least one noise kind is required");
    if (!measurements.empty() && !scale_c.empty()) {
        throw DomainError("config: give budgets as measurements or as scale_c, not both");
    }
    for (double xi : xi_grid) {
        NoiseSpec{NoiseKind::Depolarizing, xi, 0}.validate();
    }
    for (double c : scale_c) {
        if (!(c > 0.0)) throw DomainError("config: scale_c values must be > 0");
    }
    for (std::size_t m : measurements) {
        if (m < 1) throw SizeError("config: measurement counts must be >= 1");
    }
    solver.validate();
}

ExperimentConfig config_from_json(const json &j, ExperimentConfig c) {
    if (!j.is_object()) throw DomainError("config: top level must be an object");
    require_known_keys(j,
                       {"n", "basis", "optimizers", "noise", "budgets", "runs", "solver", "output_dir",
                        "master_seed", "write_traces"},
                       "config");
    if (j.contains("n")) c.n = j.at("n").get<int>();
    if (j.contains("basis")) c.basis = enum_from(j.at("basis"), &parse_basis_kind);
    if (j.contains("optimizers")) {
        c.optimizers.clear();
        for (const auto &o : j.at("optimizers")) c.optimizers.push_back(parse_optimizer(o.get<std::string>()));
    }
    if (j.contains("noise")) {
        const json &nj = j.at("noise");
        require_known_keys(nj, {"kinds", "xi"}, "noise");
        if (nj.contains("kinds")) {
            c.noise_kinds.clear();
            for (const auto &k : nj.at("kinds")) c.noise_kinds.push_back(parse_noise_kind(k.get<std::string>()));
        }
        if (nj.contains("xi")) c.xi_grid = nj.at("xi").get<std::vector<double>>();
    }
    if (j.contains("budgets")) {
        const json &bj = j.at("budgets");
        require_known_keys(bj, {"measurements", "scale_c"}, "budgets");
        if (bj.contains("measurements")) {
            c.measurements = bj.at("measurements").get<std::vector<std::size_t>>();
            c.scale_c.clear();
        }
        if (bj.contains("scale_c")) {
            c.scale_c = bj.at("scale_c").get<std::vector<double>>();
            if (!bj.contains("measurements")) c.measurements.clear();
        }
    }
    if (j.contains("runs")) c.runs = j.at("runs").get<int>();
    if (j.contains("solver")) c.solver = solver_from_json(j.at("solver"), c.solver);
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("write_traces")) c.write_traces = j.at("write_traces").get<bool>();
    return c;
}

json config_to_json(const ExperimentConfig &c) {
    json opts = json::array();
    for (Optimizer o : c.optimizers) opts.push_back(to_string(o));
    json kinds = json::array();
    for (NoiseKind k : c.noise_kinds) kinds.push_back(to_string(k));
    json budgets = json::object();
    if (!c.measurements.empty()) budgets["measurements"] = c.measurements;
    if (!c.scale_c.empty()) budgets["scale_c"] = c.scale_c;
    return json{
        {"n", c.n},
        {"basis", to_string(c.basis)},
        {"optimizers", opts},
        {"noise", {{"kinds", kinds}, {"xi", c.xi_grid}}},
        {"budgets", budgets},
        {"runs", c.runs},
        {"solver",
         {{"lambda", c.solver.lambda},
          {"step_mode", to_string(c.solver.step_mode)},
          {"eta_scale", c.solver.eta_scale},
          {"max_iters", c.solver.max_iters},
          {"rel_tol", c.solver.rel_tol},
          {"rank", c.solver.rank},
          {"record_stride", c.solver.record_stride}}},
        {"output_dir", c.output_dir.string()},
        {"master_seed", c.master_seed},
        {"write_traces", c.write_traces},
    };
}

ExperimentConfig default_measurement_sweep(int n) {
    ExperimentConfig c;
    c.n = n;
    c.noise_kinds = {NoiseKind::None};
    c.xi_grid.clear();
    const double factor = n >= 3 ? 2.0 : 1.0;
    for (int k = 1; k <= 8; ++k) c.scale_c.push_back(factor * k);
    c.runs = n == 2 ? 10 : 2;
    return c;
}

ExperimentConfig default_noise_sweep(int n) {
    ExperimentConfig c;
    c.n = n;
    c.noise_kinds = {NoiseKind::Depolarizing, NoiseKind::Gaussian, NoiseKind::Coherent, NoiseKind::Incoherent};
    if (n == 2) {
        c.measurements = {128, 96};
    } else {
        const double factor = n >= 3 ? 2.0 : 1.0;
        c.scale_c = {8.0 * factor, 6.0 * factor};
    }
    c.runs = n == 2 ? 10 : 2;
    return c;
}

std::string Cell::id() const {
    return to_string(optimizer) + "_" + to_string(noise) + "_xi" + xi_label(xi) + "_m" + std::to_string(m);
}

namespace {

struct Budget {
    double scale_c;
    std::size_t m;
};

std::vector<Budget> resolve_budgets(const ExperimentConfig &cfg, std::size_t total) {
    const double per_c = static_cast<double>(cfg.solver.rank) * std::pow(2.0, std::ldexp(1.0, cfg.n));
    std::vector<Budget> out;
    if (!cfg.scale_c.empty()) {
        for (double c : cfg.scale_c) {
            out.push_back({c, measurement_count(c, cfg.solver.rank, cfg.n, total)});
        }
    } else if (!cfg.measurements.empty()) {
        for (std::size_t m : cfg.measurements) {
            if (m > total) {
                throw SizeError("config: measurement count " + std::to_string(m) + " exceeds the " +
                                std::to_string(total) + " available settings");
            }
            out.push_back({static_cast<double>(m) / per_c, m});
        }
    } else {
        out.push_back({static_cast<double>(total) / per_c, total});
    }
    return out;
}

std::size_t total_settings(int n) {
    const std::size_t d = std::size_t{1} << n;
    return d * d * 2 * d;
}

}  // namespace

SweepResult run_measurement_sweep(const ExperimentConfig &cfg) {
    cfg.validate();
    std::vector<Cell> cells;
    for (Optimizer opt : cfg.optimizers) {
        for (const Budget &b : resolve_budgets(cfg, total_settings(cfg.n))) {
            cells.push_back(Cell{opt, NoiseKind::None, 0.0, b.scale_c, b.m});
        }
    }
    return run_cells(cfg, cells);
}

SweepResult run_noise_sweep(const ExperimentConfig &cfg) {
    cfg.validate();
    std::vector<Cell> cells;
    const std::vector<Budget> budgets = resolve_budgets(cfg, total_settings(cfg.n));
    for (Optimizer opt : cfg.optimizers) {
        for (NoiseKind kind : cfg.noise_kinds) {
            const std::vector<double> xis = kind == NoiseKind::None ? std::vector<double>{0.0} : cfg.xi_grid;
            for (double xi : xis) {
                for (const Budget &b : budgets) {
                    cells.push_back(Cell{opt, kind, xi, b.scale_c, b.m});
                }
            }
        }
    }
    return run_cells(cfg, cells);
}

unsigned resolve_thread_count(std::size_t tasks) {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("QPT_THREADS")) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) threads = static_cast<unsigned>(v);
    }
    return static_cast<unsigned>(std::clamp<std::size_t>(tasks, 1, threads));
}

SweepResult run_cells(const ExperimentConfig &cfg, const std::vector<Cell> &cells) {
    cfg.validate();
    const Workspace ws = make_workspace(cfg.n, cfg.basis);
    const bool persist = !cfg.output_dir.empty();
    if (persist) std::filesystem::create_directories(cfg.output_dir);

    SweepResult result;
    result.cells = cells;
    const std::size_t runs = static_cast<std::size_t>(cfg.runs);
    result.records.resize(cells.size() * runs);

    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (std::size_t task = next++; task < result.records.size(); task = next++) {
            const Cell &cell = cells[task / runs];
            ResultRecord &rec = result.records[task];
            rec.cell = cell;
            rec.rep = static_cast<int>(task % runs);
            RecoveryInput in;
            in.optimizer = cell.optimizer;
            in.noise = NoiseSpec{cell.noise, cell.xi, 0};
            in.m = cell.m;
            in.rep = rec.rep;
            in.master_seed = cfg.master_seed;
            in.solver = cfg.solver;
            const auto start = std::chrono::steady_clock::now();
            RunTrace trace;
            try {
                RecoveryOutcome out = run_recovery(ws, in);
                trace = std::move(out.trace);
                const TraceRecord &last = trace.final_record();
                rec.fidelity = last.fidelity;
                rec.objective = last.objective;
                rec.tp_defect = last.tp_defect;
                rec.iterations = trace.iterations;
                rec.iters_to_095 = trace.first_iter_reaching(0.95);
                rec.converged = trace.converged;
            } catch (const DivergenceError &e) {
                rec.failed = true;
                rec.error = e.what();
                trace = e.trace();
                rec.iterations = trace.iterations;
            } catch (const std::exception &e) {
                rec.failed = true;
                rec.error = e.what();
            }
            rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (persist && cfg.write_traces && !trace.records.empty()) {
                rec.trace_file = "trace_" + cell.id() + "_r" + std::to_string(rec.rep) + ".csv";
                std::ofstream f(cfg.output_dir / rec.trace_file);
                write_trace_csv(f, trace,
                                {{"optimizer", to_string(cell.optimizer)},
                                 {"noise", to_string(cell.noise)},
                                 {"xi", xi_label(cell.xi)},
                                 {"m", std::to_string(cell.m)},
                                 {"rep", std::to_string(rec.rep)}});
            }
        }
    };
    const unsigned threads = resolve_thread_count(result.records.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto &t : pool) t.join();
    }
    result.summary = aggregate(cells, result.records);
    if (persist) persist_sweep(cfg, result);
    return result;
}

SummaryRow aggregate_cell(const Cell &cell, const std::vector<ResultRecord> &records) {
    SummaryRow row;
    row.cell = cell;
    row.runs = static_cast<int>(records.size());
    std::vector<double> fid;
    std::vector<double> its;
    for (const auto &r : records) {
        if (r.failed || std::isnan(r.fidelity)) {
            ++row.failed;
            continue;
        }
        fid.push_back(r.fidelity);
        its.push_back(static_cast<double>(r.iterations));
    }
    if (!fid.empty()) {
        row.mean_fidelity = mean_of(fid);
        row.std_fidelity = population_std(fid, row.mean_fidelity);
        row.min_fidelity = *std::min_element(fid.begin(), fid.end());
        row.max_fidelity = *std::max_element(fid.begin(), fid.end());
        row.mean_iterations = mean_of(its);
        row.std_iterations = population_std(its, row.mean_iterations);
        row.min_iterations = *std::min_element(its.begin(), its.end());
        row.max_iterations = *std::max_element(its.begin(), its.end());
    }
    return row;
}

std::vector<SummaryRow> aggregate(const std::vector<Cell> &cells, const std::vector<ResultRecord> &records) {
    if (cells.empty()) throw DomainError("aggregate: no cells");
    std::vector<SummaryRow> rows;
    rows.reserve(cells.size());
    for (const Cell &cell : cells) {
        std::vector<ResultRecord> mine;
        for (const auto &r : records) {
            if (r.cell.id() == cell.id()) mine.push_back(r);
        }
        rows.push_back(aggregate_cell(cell, mine));
    }
    return rows;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_summary_csv(std::ostream &out, const std::vector<SummaryRow> &rows) {
    out << "optimizer,noise,xi,C,m,runs,failed,mean_fidelity,std_fidelity,min_fidelity,max_fidelity,"
           "mean_iterations,std_iterations,min_iterations,max_iterations\n";
    for (const auto &r : rows) {
        out << to_string(r.cell.optimizer) << ',' << to_string(r.cell.noise) << ',' << format_number(r.cell.xi)
            << ',' << format_number(r.cell.scale_c) << ',' << r.cell.m << ',' << r.runs << ',' << r.failed << ','
            << format_number(r.mean_fidelity) << ',' << format_number(r.std_fidelity) << ','
            << format_number(r.min_fidelity) << ',' << format_number(r.max_fidelity) << ','
            << format_number(r.mean_iterations) << ',' << format_number(r.std_iterations) << ','
            << format_number(r.min_iterations) << ',' << format_number(r.max_iterations) << '\n';
    }
}

void write_records_csv(std::ostream &out, const std::vector<ResultRecord> &records) {
    out << "optimizer,noise,xi,C,m,rep,failed,fidelity,objective,tp_defect,iterations,iters_to_095,converged,"
           "wall_seconds,"
           "trace_file,error\n";
    for (const auto &r : records) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        out << to_string(r.cell.optimizer) << ',' << to_string(r.cell.noise) << ',' << format_number(r.cell.xi)
            << ',' << format_number(r.cell.scale_c) << ',' << r.cell.m << ',' << r.rep << ','
            << (r.failed ? 1 : 0) << ',' << format_number(r.fidelity) << ',' << format_number(r.objective) << ','
            << format_number(r.tp_defect) << ',' << r.iterations << ',' << r.iters_to_095 << ','
            << (r.converged ? 1 : 0) << ','
            << format_number(r.wall_seconds) << ',' << r.trace_file << ',' << err << '\n';
    }
}

void persist_sweep(const ExperimentConfig &cfg, const SweepResult &result) {
    std::filesystem::create_directories(cfg.output_dir);
    {
        std::ofstream f(cfg.output_dir / "summary.csv");
        write_summary_csv(f, result.summary);
    }
    {
        std::ofstream f(cfg.output_dir / "records.csv");
        write_records_csv(f, result.records);
    }
    write_json_file(cfg.output_dir / "config.resolved.json", config_to_json(cfg));
}

}  // namespace qpt
