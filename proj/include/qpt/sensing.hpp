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
#include <utility>
#include <vector>

#include "qpt/noise.hpp"
#include "qpt/operator_basis.hpp"
#include "qpt/process_model.hpp"
#include "qpt/types.hpp"

namespace qpt {

/// The d² × d² operators D_ij, one per (input state i, POVM element j), with
/// D_ij[m, n] = Tr(ρ_i Ã_m† E_j Ã_n), so that Tr(D_ij† χ) = Tr(E_j E(ρ_i)).
class SensingOperators {
  public:
    SensingOperators(const PreparationSet &prep, const Povm &povm, const OperatorBasis &basis);

    std::size_t dim() const { return dim_; }
    std::size_t prep_count() const { return prep_.size(); }
    std::size_t povm_count() const { return povm_.size(); }
    std::size_t setting_count() const { return prep_count() * povm_count(); }
    std::size_t index(std::size_t i, std::size_t j) const { return i * povm_count() + j; }

    /// D_ij materialized as a d² × d² matrix.
    CMatrix op(std::size_t i, std::size_t j) const;

    /// d⁴ × (P·Q) matrix whose column index(i, j) is vec(D_ij).
    const CMatrix &vectorized() const { return vectorized_; }

    const std::vector<CMatrix> &prep_states() const { return prep_; }
    const std::vector<CMatrix> &povm_elements() const { return povm_; }

  private:
    std::size_t dim_;
    std::vector<CMatrix> prep_;
    std::vector<CMatrix> povm_;
    CMatrix vectorized_;
};

SensingOperators build_sensing_operators(const PreparationSet &prep, const Povm &povm, const OperatorBasis &basis);

/// Ordered (input, POVM element) pairs. Sorted, without duplicates.
struct MeasurementPlan {
    std::vector<std::pair<std::size_t, std::size_t>> selected;

    std::size_t m() const { return selected.size(); }
};

/// Every setting of a P × Q grid in (i, j) order.
MeasurementPlan full_plan(std::size_t prep_count, std::size_t povm_count);

/// Throws SizeError if an index is out of range or pairs repeat.
void validate_plan(const MeasurementPlan &plan, std::size_t prep_count, std::size_t povm_count);

/// Uniform sample of m settings without replacement, sorted by (i, j).
MeasurementPlan subsample_plan(std::size_t prep_count, std::size_t povm_count, std::size_t m, std::uint64_t seed);

/// m = min(C·r·2^d, P·Q) with d = 2^n.
std::size_t measurement_count(double scale_c, std::size_t rank, int n_qubits, std::size_t cap);

struct MeasurementVector {
    MeasurementPlan plan;
    RVector values;
};

/// The sensing map restricted to one plan. Caches the selected D columns so repeated
/// forward/adjoint evaluations in the solvers do not re-gather them.
class SensingMap {
  public:
    SensingMap(const SensingOperators &ops, const MeasurementPlan &plan);

    std::size_t dim() const { return dim_; }
    std::size_t m() const { return static_cast<std::size_t>(columns_.cols()); }

    /// values[k] = Re Tr(D_k† χ). Throws NumericError if the discarded imaginary part exceeds
    /// 1e-6 · max(1, ‖χ‖_F).
    RVector forward(const CMatrix &chi) const;

    /// (M + M†)/2 with M = Σ_k y[k] D_k.
    CMatrix adjoint(const RVector &y) const;

    /// d⁴ × m matrix of the selected vec(D_k).
    const CMatrix &columns() const { return columns_; }

  private:
    std::size_t dim_;
    CMatrix columns_;
};

MeasurementVector forward_map(const SensingOperators &ops, const MeasurementPlan &plan, const ProcessMatrix &chi);

CMatrix adjoint_map(const SensingOperators &ops, const MeasurementPlan &plan, const RVector &y);

/// Measurement record of a ground-truth process under the given noise.
///
/// Channel noise is composed after the process (E_err ∘ E_t) and measured as
/// Tr(E_j E_err(E_t(ρ_i))). Gaussian noise perturbs the noiseless record using
/// `measurement_seed`. With no noise, or channel noise at ξ = 0, this is forward_map.
MeasurementVector simulate_measurements(const ProcessMatrix &truth, const OperatorBasis &basis,
                                        const SensingOperators &ops, const MeasurementPlan &plan,
                                        const NoiseSpec &noise, std::uint64_t measurement_seed);

/// CSV with header `i,j,value`; values printed with 17 significant digits.
void write_measurements_csv(std::ostream &out, const MeasurementVector &mv);

}  // namespace qpt
