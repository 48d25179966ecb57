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


#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qpt/harness.hpp"
#include "qpt/io.hpp"

namespace qpt {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string &name) {
    const fs::path p = fs::temp_directory_path() / ("qpt_harness_" + name);
    fs::remove_all(p);
    return p;
}

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.n = 1;
    c.runs = 2;
    c.solver.max_iters = 150;
    c.master_seed = 99;
    return c;
}

ResultRecord record_with(double fidelity, int iterations) {
    ResultRecord r;
    r.fidelity = fidelity;
    r.iterations = iterations;
    return r;
}

TEST(Aggregate, TwoRecordsUsePopulationStd) {
    const SummaryRow row = aggregate_cell(Cell{}, {record_with(0.8, 10), record_with(1.0, 30)});
    EXPECT_DOUBLE_EQ(row.mean_fidelity, 0.9);
    EXPECT_NEAR(row.std_fidelity, 0.1, 1e-15);
    EXPECT_DOUBLE_EQ(row.min_fidelity, 0.8);
    EXPECT_DOUBLE_EQ(row.max_fidelity, 1.0);
    EXPECT_DOUBLE_EQ(row.mean_iterations, 20.0);
    EXPECT_DOUBLE_EQ(row.std_iterations, 10.0);
    EXPECT_EQ(row.runs, 2);
    EXPECT_EQ(row.failed, 0);
}

TEST(Aggregate, SingleRecordHasZeroStd) {
    const SummaryRow row = aggregate_cell(Cell{}, {record_with(0.73, 5)});
    EXPECT_DOUBLE_EQ(row.mean_fidelity, 0.73);
    EXPECT_EQ(row.std_fidelity, 0.0);
}

TEST(Aggregate, FailedRecordsAreCountedNotAveraged) {
    ResultRecord bad = record_with(std::nan(""), 3);
    bad.failed = true;
    const SummaryRow row = aggregate_cell(Cell{}, {record_with(0.5, 1), bad});
    EXPECT_EQ(row.failed, 1);
    EXPECT_DOUBLE_EQ(row.mean_fidelity, 0.5);
    const SummaryRow all_bad = aggregate_cell(Cell{}, {bad});
    EXPECT_TRUE(std::isnan(all_bad.mean_fidelity));
    std::ostringstream out;
    write_summary_csv(out, {all_bad});
    EXPECT_NE(out.str().find(",1,1,nan,nan,nan,nan,"), std::string::npos);
}

TEST(Aggregate, OneRowPerCellInOrder) {
    const Cell a{Optimizer::GD, NoiseKind::None, 0.0, 1.0, 4};
    const Cell b{Optimizer::FGD, NoiseKind::None, 0.0, 1.0, 4};
    ResultRecord ra = record_with(0.2, 1);
    ra.cell = a;
    ResultRecord rb = record_with(0.4, 1);
    rb.cell = b;
    const auto rows = aggregate({b, a}, {ra, rb, rb});
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].cell.optimizer, Optimizer::FGD);
    EXPECT_EQ(rows[0].runs, 2);
    EXPECT_DOUBLE_EQ(rows[1].mean_fidelity, 0.2);
    EXPECT_THROW(aggregate({}, {}), DomainError);
}

TEST(SummaryCsv, HeaderCarriesPlotColumns) {
    std::ostringstream out;
    write_summary_csv(out, {});
    EXPECT_EQ(out.str(),
              "optimizer,noise,xi,C,m,runs,failed,mean_fidelity,std_fidelity,min_fidelity,max_fidelity,"
              "mean_iterations,std_iterations,min_iterations,max_iterations\n");
}

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(format_number(0.05), "0.05");
    EXPECT_EQ(format_number(128.0), "128");
    EXPECT_EQ(format_number(std::nan("")), "nan");
    const double x = 0.1 + 0.2;
    EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(CellId, IsFileNameSafe) {
    const Cell c{Optimizer::FGD, NoiseKind::Depolarizing, 0.05, 8.0, 128};
    EXPECT_EQ(c.id(), "fgd_depolarizing_xi0.05_m128");
}

TEST(Seeds, SharedAcrossOptimizersAndKeyedByStream) {
    const RepSeeds a = derive_rep_seeds(7, NoiseKind::Depolarizing, 96, 3);
    const RepSeeds b = derive_rep_seeds(7, NoiseKind::Coherent, 96, 3);
    EXPECT_EQ(a.truth, b.truth);
    EXPECT_EQ(a.plan, b.plan);
    EXPECT_EQ(a.init, b.init);
    EXPECT_NE(a.noise, b.noise);
    EXPECT_NE(a.plan, derive_rep_seeds(7, NoiseKind::Depolarizing, 128, 3).plan);
    EXPECT_NE(a.truth, derive_rep_seeds(7, NoiseKind::Depolarizing, 96, 4).truth);
    EXPECT_NE(a.truth, derive_rep_seeds(8, NoiseKind::Depolarizing, 96, 3).truth);
}

TEST(Config, DefaultsFollowTheProtocol) {
    const ExperimentConfig m2 = default_measurement_sweep(2);
    EXPECT_EQ(m2.scale_c, (std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8}));
    EXPECT_EQ(m2.runs, 10);
    const ExperimentConfig m3 = default_measurement_sweep(3);
    EXPECT_EQ(m3.scale_c.back(), 16.0);
    EXPECT_EQ(m3.runs, 2);
    const ExperimentConfig n2 = default_noise_sweep(2);
    EXPECT_EQ(n2.measurements, (std::vector<std::size_t>{128, 96}));
    EXPECT_EQ(n2.xi_grid, (std::vector<double>{0.01, 0.05, 0.1}));
    EXPECT_EQ(n2.noise_kinds.size(), 4u);
    EXPECT_EQ(n2.solver.max_iters, 10000);
    EXPECT_EQ(n2.solver.lambda, 1.0);
}

TEST(Config, JsonRoundTripAndOverlay) {
    ExperimentConfig c = default_noise_sweep(2);
    c.solver.lambda = 0.5;
    c.output_dir = "somewhere";
    const ExperimentConfig back = config_from_json(config_to_json(c));
    EXPECT_EQ(config_to_json(back), config_to_json(c));
    const ExperimentConfig over = config_from_json(
        nlohmann::json::parse(R"({"runs": 3, "solver": {"max_iters": 50}, "budgets": {"scale_c": [2]}})"), c);
    EXPECT_EQ(over.runs, 3);
    EXPECT_EQ(over.solver.max_iters, 50);
    EXPECT_EQ(over.solver.lambda, 0.5);
    EXPECT_TRUE(over.measurements.empty());
    EXPECT_EQ(over.scale_c, std::vector<double>{2});
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"runz": 3})")), DomainError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"solver": {"eta": 1}})")), DomainError);
    ExperimentConfig c;
    c.runs = 0;
    EXPECT_THROW(c.validate(), DomainError);
    c = ExperimentConfig{};
    c.measurements = {10};
    c.scale_c = {1.0};
    EXPECT_THROW(c.validate(), DomainError);
    c = ExperimentConfig{};
    c.xi_grid = {1.5};
    EXPECT_THROW(c.validate(), DomainError);
    c = ExperimentConfig{};
    c.n = 4;
    EXPECT_THROW(c.validate(), SizeError);
}

TEST(ThreadCount, EnvironmentCapsPool) {
    setenv("QPT_THREADS", "3", 1);
    EXPECT_EQ(resolve_thread_count(10), 3u);
    EXPECT_EQ(resolve_thread_count(2), 2u);
    setenv("QPT_THREADS", "junk", 1);
    EXPECT_GE(resolve_thread_count(100), 1u);
    unsetenv("QPT_THREADS");
    EXPECT_EQ(resolve_thread_count(0), 1u);
}

TEST(RunRecovery, ExplicitTargetAndSharedData) {
    const Workspace ws = make_workspace(1, BasisKind::Pauli);
    CMatrix h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    RecoveryInput in;
    in.solver.max_iters = 400;
    in.master_seed = 3;
    const RecoveryOutcome fgd = run_recovery(ws, in, &h);
    EXPECT_NEAR(fgd.truth.chi(1, 3).real(), 0.5, 1e-14);
    EXPECT_EQ(fgd.plan.m(), 16u);
    EXPECT_GE(fgd.trace.final_record().fidelity, 0.99);
    in.optimizer = Optimizer::GD;
    const RecoveryOutcome gd = run_recovery(ws, in, &h);
    EXPECT_EQ(gd.truth.chi, fgd.truth.chi);
    in.m = 17;
    EXPECT_THROW(run_recovery(ws, in), SizeError);
}

TEST(MeasurementSweep, CellsBudgetsAndPersistence) {
    ExperimentConfig c = small_config();
    c.scale_c = {1, 2, 3, 4};
    c.output_dir = scratch("msweep");
    const SweepResult r = run_measurement_sweep(c);
    ASSERT_EQ(r.cells.size(), 8u);
    EXPECT_EQ(r.records.size(), 16u);
    EXPECT_EQ(r.summary.size(), 8u);
    EXPECT_EQ(r.cells[0].m, 4u);
    EXPECT_EQ(r.cells[3].m, 16u);
    for (const auto &rec : r.records) {
        EXPECT_FALSE(rec.failed) << rec.error;
        EXPECT_GE(rec.fidelity, 0.0);
        EXPECT_LE(rec.fidelity, 1.0);
        EXPECT_TRUE(fs::exists(c.output_dir / rec.trace_file)) << rec.trace_file;
    }
    EXPECT_TRUE(fs::exists(c.output_dir / "summary.csv"));
    EXPECT_TRUE(fs::exists(c.output_dir / "records.csv"));
    const ExperimentConfig resolved = config_from_json(read_json_file(c.output_dir / "config.resolved.json"));
    EXPECT_EQ(config_to_json(resolved), config_to_json(c));
    const std::string trace = slurp(c.output_dir / r.records[0].trace_file);
    EXPECT_EQ(trace.rfind("optimizer,noise,xi,m,rep,iter,objective,", 0), 0u);
    EXPECT_NE(trace.find("\ngd,none,0,4,0,0,"), std::string::npos);
}

TEST(MeasurementSweep, RerunIsByteIdenticalAcrossThreadCounts) {
    ExperimentConfig c = small_config();
    c.scale_c = {1, 3};
    c.output_dir = scratch("det_a");
    setenv("QPT_THREADS", "1", 1);
    run_measurement_sweep(c);
    const std::string first = slurp(c.output_dir / "summary.csv");
    c.output_dir = scratch("det_b");
    setenv("QPT_THREADS", "3", 1);
    run_measurement_sweep(c);
    unsetenv("QPT_THREADS");
    EXPECT_EQ(slurp(c.output_dir / "summary.csv"), first);
    EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 5);
}

TEST(NoiseSweep, ZeroStrengthChannelCellsMatchNoiselessCells) {
    ExperimentConfig c = small_config();
    c.noise_kinds = {NoiseKind::None, NoiseKind::Depolarizing, NoiseKind::Coherent, NoiseKind::Incoherent};
    c.xi_grid = {0.0};
    c.measurements = {12};
    const SweepResult r = run_noise_sweep(c);
    ASSERT_EQ(r.cells.size(), 8u);
    for (std::size_t k = 0; k < r.records.size(); ++k) {
        const ResultRecord &rec = r.records[k];
        const ResultRecord &ref = r.records[(k / 8) * 8 + k % 2];
        EXPECT_EQ(rec.fidelity, ref.fidelity) << rec.cell.id();
        EXPECT_EQ(rec.objective, ref.objective) << rec.cell.id();
    }
}

TEST(NoiseSweep, GridShapeAndNoiseChangesResults) {
    ExperimentConfig c = small_config();
    c.noise_kinds = {NoiseKind::Gaussian, NoiseKind::Depolarizing};
    c.xi_grid = {0.0, 0.1};
    c.measurements = {16, 12};
    c.runs = 1;
    const SweepResult r = run_noise_sweep(c);
    // 2 optimizers × 2 kinds × 2 ξ × 2 budgets.
    ASSERT_EQ(r.cells.size(), 16u);
    EXPECT_EQ(r.summary.size(), 16u);
    EXPECT_EQ(r.cells[0].id(), "gd_gaussian_xi0_m16");
    EXPECT_EQ(r.cells[15].id(), "fgd_depolarizing_xi0.1_m12");
    EXPECT_DOUBLE_EQ(r.cells[1].scale_c, 3.0);
    EXPECT_NE(r.records[0].objective, r.records[2].objective);
}

TEST(NoiseSweep, SolverFailuresAreRecorded) {
    ExperimentConfig c = small_config();
    c.solver.step_mode = StepMode::Ratio;
    c.solver.eta_scale = 50.0;
    c.solver.max_iters = 500;
    c.runs = 1;
    c.optimizers = {Optimizer::FGD};
    c.output_dir = scratch("failures");
    const SweepResult r = run_noise_sweep(c);
    ASSERT_EQ(r.records.size(), 1u);
    EXPECT_TRUE(r.records[0].failed);
    EXPECT_FALSE(r.records[0].error.empty());
    EXPECT_EQ(r.summary[0].failed, 1);
    EXPECT_NE(slurp(c.output_dir / "summary.csv").find(",1,1,nan,"), std::string::npos);
}

}  // namespace
}  // namespace qpt
