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
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qpt/operator_basis.hpp"
#include "qpt/process_model.hpp"
#include "qpt/sensing.hpp"
#include "qpt/types.hpp"

namespace qpt {

/// How η_t is chosen.
///
/// fixed_lipschitz: η = eta_scale / L with L from lipschitz_bound.
/// adaptive: Barzilai-Borwein step ⟨s, y⟩/⟨y, y⟩ on the iterate (χ for GD, U for FGD),
///   started, and restarted whenever ⟨s, y⟩ ≤ 0, from the exact line-search step of the
///   quadratic objective along the χ-level descent direction. Scaled by eta_scale.
/// ratio: η = eta_scale · ‖∇F‖₂ / ‖A(χ)‖₂ (see adaptive_step).
enum class StepMode { FixedLipschitz, Adaptive, Ratio };

std::string to_string(StepMode mode);
StepMode parse_step_mode(std::string_view text);

struct SolverConfig {
    double lambda = 1.0;
    StepMode step_mode = StepMode::Adaptive;
    double eta_scale = 1.0;
    int max_iters = 10000;
    double rel_tol = 1e-9;
    std::size_t rank = 1;
    std::uint64_t seed = 0;
    /// Every record_stride-th iteration is kept in the trace; the last one always is.
    int record_stride = 10;

    /// Throws DomainError on non-positive eta_scale, rel_tol, rank or stride, negative
    /// lambda or max_iters.
    void validate() const;
};

struct TraceRecord {
    int iter = 0;
    double objective = 0.0;
    double data_term = 0.0;
    double tp_defect = 0.0;
    /// NaN when no ground truth was supplied.
    double fidelity = std::numeric_limits<double>::quiet_NaN();
    /// Step taken from this iterate; 0 on the final record.
    double step = 0.0;
    double elapsed = 0.0;
};

struct RunTrace {
    std::vector<TraceRecord> records;
    /// Number of updates performed.
    int iterations = 0;
    /// True when the relative-change stopping rule fired before max_iters.
    bool converged = false;

    const TraceRecord &final_record() const { return records.back(); }
    /// First recorded iteration with fidelity ≥ threshold, or -1.
    int first_iter_reaching(double threshold) const;
};

/// The objective became non-finite. Carries the trace up to the failure.
class DivergenceError : public NumericError {
  public:
    DivergenceError(const std::string &what, RunTrace trace) : NumericError(what), trace_(std::move(trace)) {}
    const RunTrace &trace() const { return trace_; }

  private:
    RunTrace trace_;
};

/// ½‖f − A(χ)‖² + λ‖S(χ) − I‖_F² over one measurement plan, with S(χ) = Σ χ_ij B_ij.
class Problem {
  public:
    Problem(const SensingOperators &ops, const MeasurementPlan &plan, const OperatorBasis &basis, RVector f,
            double lambda);

    struct Evaluation {
        double data_term = 0.0;
        double tp_defect = 0.0;
        double objective = 0.0;
        /// ∇F + λ∇H, Hermitian.
        CMatrix gradient;
        /// ∇F alone.
        CMatrix data_gradient;
        RVector prediction;
    };

    std::size_t dim() const { return map_.dim(); }
    std::size_t m() const { return map_.m(); }
    double lambda() const { return lambda_; }
    const SensingMap &map() const { return map_; }
    const OperatorBasis &basis() const { return basis_; }
    const RVector &data() const { return f_; }

    Evaluation evaluate(const CMatrix &chi) const;
    double value(const CMatrix &chi) const;

    /// Second derivative of t ↦ objective(χ + tΔ): ‖A(Δ)‖² + 2λ‖S(Δ)‖_F².
    double curvature(const CMatrix &direction) const;

  private:
    SensingMap map_;
    OperatorBasis basis_;
    RVector f_;
    double lambda_;
};

/// ½Σ_k (f_k − A_k(χ))² + λ·H(χ).
double objective(const CMatrix &chi, const RVector &f, const SensingOperators &ops, const MeasurementPlan &plan,
                 const OperatorBasis &basis, double lambda);

/// −A†(f − A(χ)).
CMatrix grad_F(const CMatrix &chi, const RVector &f, const SensingOperators &ops, const MeasurementPlan &plan);

/// Entry (α, β) = 2 Tr(B_αβ† (S(χ) − I)).
CMatrix grad_H(const CMatrix &chi, const OperatorBasis &basis);

/// S(χ) − I.
CMatrix tp_residual(const CMatrix &chi, const OperatorBasis &basis);

/// L = d²/m · ‖Σ_k D_k ‖D_k‖_F‖_F + 2^{6n+1} over the planned settings, d = 2^n.
double lipschitz_bound(const SensingOperators &ops, const MeasurementPlan &plan, int n_qubits);

/// eta_scale · residual_grad_norm / prediction_norm; eta_scale · 1e-3 when
/// prediction_norm < 1e-12.
double adaptive_step(double residual_grad_norm, double prediction_norm, double eta_scale);

/// Frobenius-nearest PSD matrix: eigenvalues clipped at zero. Inputs with Hermitian
/// defect below 1e-8 are Hermitized first; larger defects throw DomainError.
ProcessMatrix psd_project(const CMatrix &m);

struct GdResult {
    ProcessMatrix estimate;
    RunTrace trace;
};

struct FgdResult {
    FactoredProcess estimate;
    RunTrace trace;
};

/// χ₀ = M M† / Tr(M M†) with M = random_factor_init(d, cfg.rank, cfg.seed).
ProcessMatrix initial_chi(std::size_t dim, const SolverConfig &cfg);

/// U₀ = M / ‖M‖_F with the same M as initial_chi.
FactoredProcess initial_factor(std::size_t dim, const SolverConfig &cfg);

/// Projected gradient descent χ ← P_psd(χ − η(∇F + λ∇H)).
GdResult run_gd(const Problem &problem, const SolverConfig &cfg, const ProcessMatrix *truth = nullptr);
GdResult run_gd(const Problem &problem, const SolverConfig &cfg, const ProcessMatrix &start,
                const ProcessMatrix *truth);
GdResult run_gd(const RVector &f, const SensingOperators &ops, const MeasurementPlan &plan,
                const OperatorBasis &basis, const SolverConfig &cfg, const ProcessMatrix *truth = nullptr);

/// Factored descent U ← U − η(∇F + λ∇H)(UU†)·U.
FgdResult run_fgd(const Problem &problem, const SolverConfig &cfg, const ProcessMatrix *truth = nullptr);
FgdResult run_fgd(const Problem &problem, const SolverConfig &cfg, const FactoredProcess &start,
                  const ProcessMatrix *truth);
FgdResult run_fgd(const RVector &f, const SensingOperators &ops, const MeasurementPlan &plan,
                  const OperatorBasis &basis, const SolverConfig &cfg, const ProcessMatrix *truth = nullptr);

/// Header `iter,objective,data_term,tp_defect,fidelity,step,elapsed`, preceded by one
/// column per label. Labels repeat on every row so traces can be concatenated and grouped.
void write_trace_csv(std::ostream &out, const RunTrace &trace,
                     const std::vector<std::pair<std::string, std::string>> &labels = {});

}  // namespace qpt
