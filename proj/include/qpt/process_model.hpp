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
#include <vector>

#include "qpt/operator_basis.hpp"
#include "qpt/types.hpp"

namespace qpt {

/// The d² × d² process matrix χ of a channel in a fixed operator basis:
/// E(ρ) = Σ_mn χ_mn Ã_m ρ Ã_n†.
struct ProcessMatrix {
    std::size_t dim = 0;
    CMatrix chi;

    ProcessMatrix() = default;
    ProcessMatrix(std::size_t d, CMatrix c);

    double trace() const { return chi.trace().real(); }
};

/// χ = U U† with U of shape d² × r.
struct FactoredProcess {
    std::size_t dim = 0;
    CMatrix factor;

    FactoredProcess() = default;
    FactoredProcess(std::size_t d, CMatrix u);

    std::size_t rank() const { return static_cast<std::size_t>(factor.cols()); }
    ProcessMatrix process() const;
};

struct KrausSet {
    std::vector<CMatrix> operators;

    std::size_t dim() const;
    /// ‖Σ A_i†A_i − I‖_F; zero for trace-preserving sets.
    double tp_defect() const;
};

CMatrix apply_kraus(const KrausSet &kraus, const CMatrix &rho);

CMatrix apply_chi(const ProcessMatrix &process, const OperatorBasis &basis, const CMatrix &rho);

/// Rank-1 χ = x x† where Σ_m x_m Ã_m = target. Throws DomainError when ‖U†U − I‖_F > 1e-10.
ProcessMatrix chi_from_unitary(const CMatrix &target, const OperatorBasis &basis);

/// Haar-random d × d unitary, deterministic per seed.
CMatrix random_target_unitary(std::size_t dim, std::uint64_t seed);

/// H(χ) = ‖Σ_mn χ_mn Ã_n†Ã_m − I‖_F².
double tp_defect(const ProcessMatrix &process, const OperatorBasis &basis);

/// Normalized Hilbert-Schmidt overlap Tr(χ̂ χ*) / (Tr χ̂ · Tr χ*), clamped to [0, 1].
/// Throws DomainError if either trace is not positive.
double process_fidelity(const ProcessMatrix &estimate, const ProcessMatrix &truth);

/// U ∈ C^{d²×r} with entries u + iv, u, v ~ Uniform[0, 1).
FactoredProcess random_factor_init(std::size_t dim, std::size_t rank, std::uint64_t seed);

}  // namespace qpt
