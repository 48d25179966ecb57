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


#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qpt/noise.hpp"
#include "qpt/operator_basis.hpp"
#include "qpt/optim.hpp"
#include "qpt/process_model.hpp"
#include "qpt/sensing.hpp"

namespace qpt {

enum class Optimizer { GD, FGD };

/// "gd" / "fgd".
std::string to_string(Optimizer opt);
Optimizer parse_optimizer(std::string_view text);

/// Basis, inputs, POVM and sensing operators for one system size. Read-only once built,
/// so one instance is shared by every worker of a sweep.
struct Workspace {
    int n_qubits;
    OperatorBasis basis;
    PreparationSet prep;
    Povm povm;
    SensingOperators ops;

    std::size_t dim() const { return basis.dim(); }
    std::size_t setting_count() const { return ops.setting_count(); }
};

Workspace make_workspace(int n_qubits, BasisKind kind);

/// Seeds of one repetition. Each stream is keyed by what it drives, so the optimizers of
/// a repetition see the same target, plan, start point and noise draw.
struct RepSeeds {
    std::uint64_t truth;
    std::uint64_t plan;
    std::uint64_t init;
    std::uint64_t noise;
};

RepSeeds derive_rep_seeds(std::uint64_t master, NoiseKind kind, std::size_t m, int rep);

struct RecoveryInput {
    Optimizer optimizer = Optimizer::FGD;
    NoiseSpec noise;
    std::size_t m = 0;
    int rep = 0;
    std::uint64_t master_seed = 0;
    SolverConfig solver;
};

struct RecoveryOutcome {
    ProcessMatrix truth;
    ProcessMatrix estimate;
    MeasurementPlan plan;
    RunTrace trace;
};

/// One end-to-end recovery: Haar target (or `target` if given), plan, simulated record,
/// solver run. solver.seed is replaced by the derived init seed.
RecoveryOutcome run_recovery(const Workspace &ws, const RecoveryInput &in, const CMatrix *target = nullptr);

struct ExperimentConfig {
    int n = 2;
    BasisKind basis = BasisKind::Pauli;
    std::vector<Optimizer> optimizers{Optimizer::GD, Optimizer::FGD};
    std::vector<NoiseKind> noise_kinds{NoiseKind::None};
    std::vector<double> xi_grid{0.01, 0.05, 0.1};
    /// Budgets as explicit measurement counts or as C values (m = C·r·2^d); at most one set.
    std::vector<std::size_t> measurements;
    std::vector<double> scale_c;
    int runs = 10;
    SolverConfig solver;
    std::filesystem::path output_dir;
    std::uint64_t master_seed = 0;
    bool write_traces = true;

    void validate() const;
};

/// Overlays the fields present in `j` onto `base`. Unknown keys throw DomainError.
ExperimentConfig config_from_json(const nlohmann::json &j, ExperimentConfig base = {});
nlohmann::json config_to_json(const ExperimentConfig &cfg);

/// Measurement-budget sweep defaults: noiseless, C ∈ {1..8} (doubled at n ≥ 3), 10 runs at n = 2, 2 otherwise.
ExperimentConfig default_measurement_sweep(int n);
/// Noise sweep defaults: all four noise models, ξ ∈ {0.01, 0.05, 0.1}, m ∈ {128, 96} at n = 2.
ExperimentConfig default_noise_sweep(int n);

struct Cell {
    Optimizer optimizer = Optimizer::GD;
    NoiseKind noise = NoiseKind::None;
    double xi = 0.0;
    /// C for this budget; m / (r·2^d) when the budget was given as a count.
    double scale_c = 0.0;
    std::size_t m = 0;

    /// File-name-safe identity, e.g. "fgd_depolarizing_xi0.05_m128".
    std::string id() const;
};

struct ResultRecord {
    Cell cell;
    int rep = 0;
    bool failed = false;
    std::string error;
    double fidelity = std::numeric_limits<double>::quiet_NaN();
    double objective = std::numeric_limits<double>::quiet_NaN();
    double tp_defect = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    /// First recorded iteration with fidelity ≥ 0.95, or -1. Exact when record_stride = 1.
    int iters_to_095 = -1;
    bool converged = false;
    double wall_seconds = 0.0;
    std::string trace_file;
};

struct SummaryRow {
    Cell cell;
    int runs = 0;
    int failed = 0;
    double mean_fidelity = std::numeric_limits<double>::quiet_NaN();
    double std_fidelity = std::numeric_limits<double>::quiet_NaN();
    double min_fidelity = std::numeric_limits<double>::quiet_NaN();
    double max_fidelity = std::numeric_limits<double>::quiet_NaN();
    double mean_iterations = std::numeric_limits<double>::quiet_NaN();
    double std_iterations = std::numeric_limits<double>::quiet_NaN();
    double min_iterations = std::numeric_limits<double>::quiet_NaN();
    double max_iterations = std::numeric_limits<double>::quiet_NaN();
};

struct SweepResult {
    std::vector<Cell> cells;
    /// Cell-major, repetitions in order.
    std::vector<ResultRecord> records;
    std::vector<SummaryRow> summary;
};

/// The measurement-count sweep: noiseless cells over optimizers × budgets.
SweepResult run_measurement_sweep(const ExperimentConfig &cfg);

/// Noise sweep over optimizers × noise kinds × ξ × budgets. A None kind yields a single
/// ξ = 0 cell per budget.
SweepResult run_noise_sweep(const ExperimentConfig &cfg);

/// Runs every (cell, repetition) pair. Solver failures are recorded, not thrown.
/// Writes outputs when cfg.output_dir is set.
SweepResult run_cells(const ExperimentConfig &cfg, const std::vector<Cell> &cells);

/// Mean, population standard deviation, min and max over the successful repetitions.
SummaryRow aggregate_cell(const Cell &cell, const std::vector<ResultRecord> &records);
std::vector<SummaryRow> aggregate(const std::vector<Cell> &cells, const std::vector<ResultRecord> &records);

/// Header `optimizer,noise,xi,C,m,runs,failed,mean_fidelity,std_fidelity,min_fidelity,
/// max_fidelity,mean_iterations,std_iterations,min_iterations,max_iterations`. Contains no
/// timing, so reruns with the same seeds are byte-identical.
void write_summary_csv(std::ostream &out, const std::vector<SummaryRow> &rows);
void write_records_csv(std::ostream &out, const std::vector<ResultRecord> &records);

/// summary.csv, records.csv and config.resolved.json under cfg.output_dir.
void persist_sweep(const ExperimentConfig &cfg, const SweepResult &result);

/// QPT_THREADS if set and positive, else the hardware concurrency; never above `tasks`.
unsigned resolve_thread_count(std::size_t tasks);

/// Shortest round-trip text of a double; "nan" for NaN.
std::string format_number(double v);

}  // namespace qpt
