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

#include "qpt/types.hpp"

namespace qpt {

/// Kronecker product of two dense complex matrices.
CMatrix kron(const CMatrix &a, const CMatrix &b);

/// Real Hilbert-Schmidt inner product Re Tr(a† b).
double hs_inner(const CMatrix &a, const CMatrix &b);

/// ‖m − m†‖_F.
double hermitian_defect(const CMatrix &m);

/// (m + m†) / 2.
CMatrix hermitize(const CMatrix &m);

/// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue(const CMatrix &m);

/// Largest |eigenvalue| of a Hermitian matrix, estimated by power iteration.
/// The start vector is fixed so the estimate is deterministic.
double spectral_norm_power(const CMatrix &hermitian, int iterations = 20);

/// ‖u† u − I‖_F.
double unitarity_defect(const CMatrix &u);

/// |k⟩⟨l| in dimension d.
CMatrix outer_basis(std::size_t d, std::size_t k, std::size_t l);

}  // namespace qpt
