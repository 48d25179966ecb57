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
#include <string>
#include <string_view>
#include <vector>

#include "qpt/types.hpp"

namespace qpt {

enum class BasisKind { Pauli, GellMann };

std::string to_string(BasisKind kind);
BasisKind parse_basis_kind(std::string_view text);

/// Ordered operator basis {Ã_m} of d×d matrices with Tr(Ã_m†Ã_n) = d·δ_mn and Ã_0 = I.
///
/// Alongside the operators it caches the pairwise products B_ij = Ã_j†Ã_i, both as
/// matrices and packed into the linear map χ ↦ Σ_ij χ_ij B_ij (a d² × d⁴ matrix acting on
/// column-major vec(χ)). Immutable after construction.
class OperatorBasis {
  public:
    /// Validates the operator count (d²) and caches products. Does not check orthogonality;
    /// see gram_defect().
    OperatorBasis(std::size_t dim, std::vector<CMatrix> ops);

    std::size_t dim() const { return dim_; }
    /// Number of operators, d².
    std::size_t size() const { return ops_.size(); }
    const std::vector<CMatrix> &ops() const { return ops_; }
    const CMatrix &op(std::size_t m) const { return ops_.at(m); }

    /// B_ij = Ã_j†Ã_i.
    const CMatrix &product(std::size_t i, std::size_t j) const { return products_[i * size() + j]; }

    /// d² × d⁴ matrix T with vec(Σ_ij χ_ij B_ij) = T · vec(χ).
    const CMatrix &tp_map() const { return tp_map_; }

    /// d² × d² matrix whose column m is vec(Ã_m).
    const CMatrix &vectorized() const { return vectorized_; }

    /// max |Tr(Ã_m†Ã_n) − d·δ_mn|.
    double gram_defect() const;

  private:
    std::size_t dim_;
    std::vector<CMatrix> ops_;
    std::vector<CMatrix> products_;
    CMatrix tp_map_;
    CMatrix vectorized_;
};

/// All 4^n Kronecker products of {I, σx, σy, σz}, lexicographic in the factor tuple.
OperatorBasis pauli_basis(int n_qubits);

/// Generalized Gell-Mann matrices rescaled to Tr(Ã_m†Ã_n) = d·δ_mn. Order: identity, the
/// symmetric family, the antisymmetric family (both in (k, l) lexicographic order with
/// k < l), then the diagonal family.
OperatorBasis gell_mann_basis(std::size_t dim);

OperatorBasis make_basis(BasisKind kind, int n_qubits);

/// Input states ρ_i^in, pure and of unit trace.
struct PreparationSet {
    std::size_t dim = 0;
    std::vector<CMatrix> states;

    std::size_t size() const { return states.size(); }
};

/// The d² generic input states: |k⟩, then (|k⟩+|l⟩)/√2, then (|k⟩+i|l⟩)/√2 for k < l.
PreparationSet generic_input_states(std::size_t dim);

struct Povm {
    std::size_t dim = 0;
    std::vector<CMatrix> elements;
    double a = 0.0;
    double b = 0.0;

    std::size_t size() const { return elements.size(); }
};

/// 2d-element POVM informationally complete for pure states.
///
/// E_0 = a|0⟩⟨0|, E_m = b(I + |0⟩⟨m| + |m⟩⟨0|), Ẽ_m = b(I + i(|0⟩⟨m| − |m⟩⟨0|)) for
/// m = 1..d−1, and a final element completing the sum to I. a = b starts at 1/(2d) and is
/// halved (at most 60 times) until the final element is PSD.
Povm pure_state_povm(std::size_t dim);

struct PovmReport {
    std::vector<double> min_eigenvalues;
    std::vector<double> hermitian_defects;
    double completeness_defect = 0.0;
    bool valid = false;
};

/// Tolerances: min eigenvalue ≥ −1e-12, Hermiticity and completeness defects ≤ 1e-10.
PovmReport validate_povm(const Povm &povm);

}  // namespace qpt
