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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qpt/operator_basis.hpp"
#include "qpt/types.hpp"

namespace qpt {

/// Signature of grad_H. The battery takes it as a parameter so tests can substitute a
/// deliberately broken gradient and watch the check fail.
using GradHFn = std::function<CMatrix(const CMatrix &, const OperatorBasis &)>;

struct GradientErrors {
    /// Worst relative error of ⟨∇F, Δ⟩ against central differences.
    double data = 0.0;
    /// Same for ∇H.
    double tp = 0.0;
    /// Same for the factored gradient 2(∇F + λ∇H)U of g(U) = F(UU†) + λH(UU†).
    double factored = 0.0;
};

/// Random PSD χ, random record f over the full plan, random unit Hermitian directions.
/// Central differences with step 1e-5.
GradientErrors gradient_errors(int n_qubits, int instances, int directions, std::uint64_t seed,
                               const GradHFn &grad_h);

/// max over pairs of |⟨A(χ), y⟩ − Re⟨χ, A†(y)⟩| / max(1, ‖A(χ)‖‖y‖) for Hermitian χ.
double adjoint_error(int n_qubits, int pairs, std::uint64_t seed);

struct CptpReport {
    double max_tp_defect = 0.0;
    double min_eigenvalue = 0.0;
    /// max ‖apply_chi(χ*, ρ) − UρU†‖_F over random pure ρ.
    double max_apply_error = 0.0;
};

/// chi_from_unitary over `unitaries` Haar targets.
CptpReport cptp_ground_truth(int n_qubits, int unitaries, std::uint64_t seed);

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double tolerance = 0.0;
};

/// The `check` battery: adjoint identity, gradient finite differences, POVM validity and
/// the TP defect of random unitary targets, at one and two qubits. `quick` trims the
/// instance counts.
std::vector<CheckResult> run_self_checks(bool quick, std::uint64_t seed, const GradHFn &grad_h);

}  // namespace qpt
