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
#include <string>
#include <string_view>

#include "qpt/process_model.hpp"
#include "qpt/types.hpp"

namespace qpt {

enum class NoiseKind { None, Gaussian, Depolarizing, Coherent, Incoherent };

std::string to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view text);

/// Noise model and strength ξ ∈ [0, 1]. The seed fixes the model's random payload (the
/// over-rotation generator or the Kraus set); one payload is drawn per experiment run.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::None;
    double xi = 0.0;
    std::uint64_t seed = 0;

    /// Noise applied to the channel output rather than to the measurement record.
    bool acts_on_channel() const;
    /// Throws DomainError when ξ is outside [0, 1].
    void validate() const;
};

/// f + ξ·ε with ε i.i.d. standard normal.
RVector gaussian_perturb(const RVector &f, double xi, std::uint64_t seed);

/// (1 − ξ)ρ + (ξ/d) I.
CMatrix depolarize(const CMatrix &rho, double xi);

/// U ρ U† with U = exp(iξH). H must be Hermitian to 1e-10.
CMatrix coherent_overrotate(const CMatrix &rho, double xi, const CMatrix &generator);

/// (G + G†)/2 for complex Gaussian G, scaled to unit spectral norm.
CMatrix random_hermitian(std::size_t dim, std::uint64_t seed);

/// K Kraus operators sliced from one Haar unitary W of size dK: A_i = (⟨i| ⊗ I) W (|0⟩ ⊗ I).
/// The set is trace preserving by construction.
KrausSet haar_random_channel(std::size_t dim, std::size_t kraus_count, std::uint64_t seed);

/// (1 − ξ)ρ + ξ Σ A_i ρ A_i†.
CMatrix incoherent_mix(const CMatrix &rho, double xi, const KrausSet &kraus);

/// Channel-type noise with its payload drawn once from NoiseSpec::seed.
class ErrorChannel {
  public:
    ErrorChannel(const NoiseSpec &spec, std::size_t dim);

    /// Identity (returns rho unchanged) when ξ = 0 or the spec is not channel noise.
    CMatrix apply(const CMatrix &rho) const;

    const NoiseSpec &spec() const { return spec_; }

  private:
    NoiseSpec spec_;
    std::size_t dim_;
    CMatrix generator_;
    KrausSet kraus_;
};

}  // namespace qpt
