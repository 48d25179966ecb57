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


#include "qpt/optim.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "qpt/linalg.hpp"

namespace qpt {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kStallWindow = 10;

CMatrix reshape_square(const CVector &v, Eigen::Index n) {
    return Eigen::Map<const CMatrix>(v.data(), n, n);
}

Eigen::Map<const CVector> flat(const CMatrix &m) {
    return Eigen::Map<const CVector>(m.data(), m.size());
}

double safe_fidelity(const CMatrix &chi, const ProcessMatrix *truth, std::size_t dim) {
    if (truth == nullptr) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double t = chi.trace().real();
    if (!(t > 0.0)) {
        return 0.0;
    }
    return process_fidelity(ProcessMatrix(dim, chi), *truth);
}

double lipschitz_from_columns(const CMatrix &columns, std::size_t dim) {
    // Σ_k D_k ‖D_k‖_F, accumulated on the vectorized columns.
    CVector acc = CVector::Zero(columns.rows());
    for (Eigen::Index k = 0; k < columns.cols(); ++k) {
        acc += columns.col(k) * columns.col(k).norm();
    }
    const double d = static_cast<double>(dim);
    const double d2 = d * d;
    const double m = static_cast<double>(columns.cols());
    return d2 / m * acc.norm() + 2.0 * std::pow(d, 6);
}

/// Relative-change stopping rule sustained over kStallWindow evaluations.
class StallDetector {
  public:
    explicit StallDetector(double rel_tol) : rel_tol_(rel_tol) {}

    bool update(double objective) {
        if (has_prev_) {
            const double scale = std::max(std::abs(prev_), std::numeric_limits<double>::min());
            count_ = std::abs(prev_ - objective) <= rel_tol_ * scale ? count_ + 1 : 0;
        }
        prev_ = objective;
        has_prev_ = true;
        return count_ >= kStallWindow;
    }

  private:
    double rel_tol_;
    double prev_ = 0.0;
    bool has_prev_ = false;
    int count_ = 0;
};

/// Barzilai-Borwein memory: previous iterate and previous search gradient.
struct SpectralStep {
    CMatrix prev_x;
    CMatrix prev_g;
    bool primed = false;

    /// ⟨s, y⟩/⟨y, y⟩, or a negative value when the pair carries no curvature.
    double next(const CMatrix &x, const CMatrix &g) {
        double step = -1.0;
        if (primed) {
            const CMatrix s = x - prev_x;
            const CMatrix y = g - prev_g;
            const double sy = hs_inner(s, y);
            const double yy = y.squaredNorm();
            if (sy > 0.0 && yy > 0.0) {
                step = sy / yy;
            }
        }
        prev_x = x;
        prev_g = g;
        primed = true;
        return step;
    }
};

double line_search_step(const Problem &problem, const CMatrix &gradient, const CMatrix &direction) {
    const double num = hs_inner(gradient, direction);
    const double den = problem.curvature(direction);
    if (!(den > 0.0) || !(num > 0.0)) {
        return 0.0;
    }
    return num / den;
}

class TraceRecorder {
  public:
    TraceRecorder(const SolverConfig &cfg) : stride_(cfg.record_stride), start_(Clock::now()) {}

    void record(RunTrace &trace, int iter, const Problem::Evaluation &eval, double fidelity, double step,
                bool force) const {
        if (!force && iter % stride_ != 0) {
            return;
        }
        TraceRecord rec;
        rec.iter = iter;
        rec.objective = eval.objective;
        rec.data_term = eval.data_term;
        rec.tp_defect = eval.tp_defect;
        rec.fidelity = fidelity;
        rec.step = step;
        rec.elapsed = std::chrono::duration<double>(Clock::now() - start_).count();
        trace.records.push_back(rec);
    }

  private:
    int stride_;
    Clock::time_point start_;
};

void check_finite(const Problem::Evaluation &eval, int iter, RunTrace &trace, const char *solver) {
    if (!std::isfinite(eval.objective)) {
        trace.iterations = iter;
        throw DivergenceError(std::string(solver) + ": objective became non-finite at iteration " +
                                  std::to_string(iter),
                              std::move(trace));
    }
}

void check_step(double eta, int iter, RunTrace &trace, const char *solver) {
    if (!std::isfinite(eta)) {
        trace.iterations = iter;
        throw DivergenceError(std::string(solver) + ": non-finite step at iteration " + std::to_string(iter),
                              std::move(trace));
    }
}

}  // namespace

std::string to_string(StepMode mode) {
    switch (mode) {
    case StepMode::FixedLipschitz:
        return "fixed_lipschitz";
    case StepMode::Adaptive:
        return "adaptive";
    case StepMode::Ratio:
        return "ratio";
    }
    return "unknown";
}

StepMode parse_step_mode(std::string_view text) {
    if (text == "fixed_lipschitz" || text == "fixed") {
        return StepMode::FixedLipschitz;
    }
    if (text == "adaptive") {
        return StepMode::Adaptive;
    }
    if (text == "ratio") {
        return StepMode::Ratio;
    }
    throw DomainError("unknown step mode '" + std::string(text) + "'");
}

void SolverConfig::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw DomainError("lambda must be a finite value >= 0");
    }
    if (!(eta_scale > 0.0) || !std::isfinite(eta_scale)) {
        throw DomainError("eta_scale must be > 0");
    }
    if (max_iters < 0) {
        throw DomainError("max_iters must be >= 0");
    }
    if (!(rel_tol > 0.0)) {
        throw DomainError("rel_tol must be > 0");
    }
    if (rank < 1) {
        throw DomainError("rank must be >= 1");
    }
    if (record_stride < 1) {
        throw DomainError("record_stride must be >= 1");
    }
}

int RunTrace::first_iter_reaching(double threshold) const {
    for (const auto &rec : records) {
        if (rec.fidelity >= threshold) {
            return rec.iter;
        }
    }
    return -1;
}

Problem::Problem(const SensingOperators &ops, const MeasurementPlan &plan, const OperatorBasis &basis, RVector f,
                 double lambda)
    : map_(ops, plan), basis_(basis), f_(std::move(f)), lambda_(lambda) {
    if (static_cast<std::size_t>(f_.size()) != map_.m()) {
        throw DimensionError("Problem: measurement vector length does not match the plan");
    }
    if (basis_.dim() != map_.dim()) {
        throw DimensionError("Problem: basis and sensing dimensions differ");
    }
}

Problem::Evaluation Problem::evaluate(const CMatrix &chi) const {
    Evaluation out;
    out.prediction = map_.forward(chi);
    const RVector r = f_ - out.prediction;
    out.data_term = 0.5 * r.squaredNorm();
    const CMatrix residual = tp_residual(chi, basis_);
    out.tp_defect = residual.squaredNorm();
    out.objective = out.data_term + lambda_ * out.tp_defect;
    out.data_gradient = -map_.adjoint(r);
    const CVector gh = 2.0 * (basis_.tp_map().adjoint() * flat(residual));
    out.gradient = out.data_gradient + lambda_ * hermitize(reshape_square(gh, chi.rows()));
    return out;
}

double Problem::value(const CMatrix &chi) const {
    const RVector r = f_ - map_.forward(chi);
    return 0.5 * r.squaredNorm() + lambda_ * tp_residual(chi, basis_).squaredNorm();
}

double Problem::curvature(const CMatrix &direction) const {
    const RVector ad = map_.forward(direction);
    const CVector sd = basis_.tp_map() * flat(direction);
    return ad.squaredNorm() + 2.0 * lambda_ * sd.squaredNorm();
}

double objective(const CMatrix &chi, const RVector &f, const SensingOperators &ops, const MeasurementPlan &plan,
                 const OperatorBasis &basis, double lambda) {
    return Problem(ops, plan, basis, f, lambda).value(chi);
}

CMatrix grad_F(const CMatrix &chi, const RVector &f, const SensingOperators &ops, const MeasurementPlan &plan) {
    const SensingMap map(ops, plan);
    if (static_cast<std::size_t>(f.size()) != map.m()) {
        throw DimensionError("grad_F: measurement vector length does not match the plan");
    }
    return -map.adjoint(f - map.forward(chi));
}

CMatrix tp_residual(const CMatrix &chi, const OperatorBasis &basis) {
    const auto d2 = static_cast<Eigen::Index>(basis.size());
    if (chi.rows() != d2 || chi.cols() != d2) {
        throw DimensionError("tp_residual: chi must be d^2 x d^2");
    }
    const auto d = static_cast<Eigen::Index>(basis.dim());
    const CVector s = basis.tp_map() * flat(chi);
    return reshape_square(s, d) - CMatrix::Identity(d, d);
}

CMatrix grad_H(const CMatrix &chi, const OperatorBasis &basis) {
    const CMatrix residual = tp_residual(chi, basis);
    const CVector g = 2.0 * (basis.tp_map().adjoint() * flat(residual));
    return hermitize(reshape_square(g, chi.rows()));
}

double lipschitz_bound(const SensingOperators &ops, const MeasurementPlan &plan, int n_qubits) {
    if (n_qubits < 1 || (std::size_t{1} << n_qubits) != ops.dim()) {
        throw DimensionError("lipschitz_bound: n does not match the sensing dimension");
    }
    return lipschitz_from_columns(SensingMap(ops, plan).columns(), ops.dim());
}

double adaptive_step(double residual_grad_norm, double prediction_norm, double eta_scale) {
    if (prediction_norm < 1e-12) {
        return eta_scale * 1e-3;
    }
    return eta_scale * residual_grad_norm / prediction_norm;
}

ProcessMatrix psd_project(const CMatrix &m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("psd_project: matrix must be square");
    }
    if (hermitian_defect(m) >= 1e-8) {
        throw DomainError("psd_project: input is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(m));
    if (es.info() != Eigen::Success) {
        throw NumericError("psd_project: eigensolver failed");
    }
    const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
    const CMatrix &v = es.eigenvectors();
    const CMatrix out = v * clipped.cast<Complex>().asDiagonal() * v.adjoint();
    const auto d2 = static_cast<std::size_t>(m.rows());
    auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(d2))));
    if (d * d != d2) {
        d = 0;
    }
    ProcessMatrix p;
    p.dim = d;
    p.chi = hermitize(out);
    return p;
}

ProcessMatrix initial_chi(std::size_t dim, const SolverConfig &cfg) {
    const CMatrix &m = random_factor_init(dim, cfg.rank, cfg.seed).factor;
    CMatrix chi = m * m.adjoint();
    chi /= chi.trace().real();
    return ProcessMatrix(dim, hermitize(chi));
}

FactoredProcess initial_factor(std::size_t dim, const SolverConfig &cfg) {
    FactoredProcess u = random_factor_init(dim, cfg.rank, cfg.seed);
    u.factor /= u.factor.norm();
    return u;
}

GdResult run_gd(const Problem &problem, const SolverConfig &cfg, const ProcessMatrix &start,
                const ProcessMatrix *truth) {
    cfg.validate();
    const std::size_t dim = problem.dim();
    if (start.dim != dim) {
        throw DimensionError("run_gd: start point has the wrong dimension");
    }
    const double lipschitz = cfg.step_mode == StepMode::FixedLipschitz
                                 ? lipschitz_from_columns(problem.map().columns(), dim)
                                 : 0.0;
    CMatrix chi = start.chi;
    RunTrace trace;
    TraceRecorder recorder(cfg);
    StallDetector stall(cfg.rel_tol);
    SpectralStep spectral;
    for (int t = 0;; ++t) {
        const Problem::Evaluation eval = problem.evaluate(chi);
        check_finite(eval, t, trace, "run_gd");
        const double fid = safe_fidelity(chi, truth, dim);
        const bool stalled = stall.update(eval.objective);
        if (t >= cfg.max_iters || stalled) {
            recorder.record(trace, t, eval, fid, 0.0, true);
            trace.iterations = t;
            trace.converged = stalled;
            break;
        }
        double eta = 0.0;
        switch (cfg.step_mode) {
        case StepMode::FixedLipschitz:
            eta = cfg.eta_scale / lipschitz;
            break;
        case StepMode::Ratio:
            eta = adaptive_step(spectral_norm_power(eval.data_gradient), eval.prediction.norm(), cfg.eta_scale);
            break;
        case StepMode::Adaptive: {
            eta = spectral.next(chi, eval.gradient);
            if (eta < 0.0) {
                eta = line_search_step(problem, eval.gradient, eval.gradient);
            }
            eta *= cfg.eta_scale;
            break;
        }
        }
        check_step(eta, t, trace, "run_gd");
        recorder.record(trace, t, eval, fid, eta, false);
        chi = psd_project(chi - eta * eval.gradient).chi;
    }
    return GdResult{ProcessMatrix(dim, chi), std::move(trace)};
}

GdResult run_gd(const Problem &problem, const SolverConfig &cfg, const ProcessMatrix *truth) {
    cfg.validate();
    return run_gd(problem, cfg, initial_chi(problem.dim(), cfg), truth);
}

GdResult run_gd(const RVector &f, const SensingOperators &ops, const MeasurementPlan &plan,
                const OperatorBasis &basis, const SolverConfig &cfg, const ProcessMatrix *truth) {
    return run_gd(Problem(ops, plan, basis, f, cfg.lambda), cfg, truth);
}

FgdResult run_fgd(const Problem &problem, const SolverConfig &cfg, const FactoredProcess &start,
                  const ProcessMatrix *truth) {
    cfg.validate();
    const std::size_t dim = problem.dim();
    if (start.dim != dim || start.factor.rows() != static_cast<Eigen::Index>(dim * dim)) {
        throw DimensionError("run_fgd: start factor has the wrong shape");
    }
    const double lipschitz = cfg.step_mode == StepMode::FixedLipschitz
                                 ? lipschitz_from_columns(problem.map().columns(), dim)
                                 : 0.0;
    CMatrix u = start.factor;
    RunTrace trace;
    TraceRecorder recorder(cfg);
    StallDetector stall(cfg.rel_tol);
    SpectralStep spectral;
    for (int t = 0;; ++t) {
        const CMatrix chi = u * u.adjoint();
        const Problem::Evaluation eval = problem.evaluate(chi);
        check_finite(eval, t, trace, "run_fgd");
        const double fid = safe_fidelity(chi, truth, dim);
        const bool stalled = stall.update(eval.objective);
        if (t >= cfg.max_iters || stalled) {
            recorder.record(trace, t, eval, fid, 0.0, true);
            trace.iterations = t;
            trace.converged = stalled;
            break;
        }
        const CMatrix g = eval.gradient * u;
        double eta = 0.0;
        switch (cfg.step_mode) {
        case StepMode::FixedLipschitz:
            eta = cfg.eta_scale / lipschitz;
            break;
        case StepMode::Ratio:
            eta = adaptive_step(spectral_norm_power(eval.data_gradient), eval.prediction.norm(), cfg.eta_scale);
            break;
        case StepMode::Adaptive: {
            eta = spectral.next(u, g);
            if (eta < 0.0) {
                // First-order change of UU† along −G·U.
                const CMatrix direction = eval.gradient * chi + chi * eval.gradient;
                eta = line_search_step(problem, eval.gradient, direction);
            }
            eta *= cfg.eta_scale;
            break;
        }
        }
        check_step(eta, t, trace, "run_fgd");
        recorder.record(trace, t, eval, fid, eta, false);
        u -= eta * g;
    }
    return FgdResult{FactoredProcess(dim, u), std::move(trace)};
}

FgdResult run_fgd(const Problem &problem, const SolverConfig &cfg, const ProcessMatrix *truth) {
    cfg.validate();
    return run_fgd(problem, cfg, initial_factor(problem.dim(), cfg), truth);
}

FgdResult run_fgd(const RVector &f, const SensingOperators &ops, const MeasurementPlan &plan,
                  const OperatorBasis &basis, const SolverConfig &cfg, const ProcessMatrix *truth) {
    return run_fgd(Problem(ops, plan, basis, f, cfg.lambda), cfg, truth);
}

void write_trace_csv(std::ostream &out, const RunTrace &trace,
                     const std::vector<std::pair<std::string, std::string>> &labels) {
    for (const auto &[key, value] : labels) {
        out << key << ',';
    }
    out << "iter,objective,data_term,tp_defect,fidelity,step,elapsed\n";
    const auto num = [&out](double v) {
        if (std::isnan(v)) {
            out << "nan";
        } else {
            out << v;
        }
    };
    out << std::setprecision(17);
    for (const auto &rec : trace.records) {
        for (const auto &[key, value] : labels) {
            out << value << ',';
        }
        out << rec.iter << ',';
        num(rec.objective);
        out << ',';
        num(rec.data_term);
        out << ',';
        num(rec.tp_defect);
        out << ',';
        num(rec.fidelity);
        out << ',';
        num(rec.step);
        out << ',';
        num(rec.elapsed);
        out << '\n';
    }
}

}  // namespace qpt
