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

#include "qpt/noise.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "qpt/linalg.hpp"
#include "qpt/random.hpp"

namespace qpt {

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::None:
            return "none";
        case NoiseKind::Gaussian:
            return "gaussian";
        case NoiseKind::Depolarizing:
            return "depolarizing";
        case NoiseKind::Coherent:
            return "coherent";
        case NoiseKind::Incoherent:
            return "incoherent";
    }
    return "none";
}

NoiseKind parse_noise_kind(std::string_view text) {
    for (NoiseKind k : {NoiseKind::None, NoiseKind::Gaussian, NoiseKind::Depolarizing, NoiseKind::Coherent,
                        NoiseKind::Incoherent}) {
        if (text == to_string(k)) {
            return k;
        }
    }
    throw DomainError("unknown noise kind: " + std::string(text));
}

bool NoiseSpec::acts_on_channel() const {
    return kind == NoiseKind::Depolarizing || kind == NoiseKind::Coherent || kind == NoiseKind::Incoherent;
}

void NoiseSpec::validate() const {
    if (!(xi >= 0.0 && xi <= 1.0)) {
        throw DomainError("noise strength xi must lie in [0, 1]");
    }
}

RVector gaussian_perturb(const RVector &f, double xi, std::uint64_t seed) {
    if (!(xi >= 0.0)) {
        throw DomainError("gaussian_perturb: xi must be non-negative");
    }
    if (xi == 0.0) {
        return f;
    }
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    RVector out = f;
    for (Eigen::Index k = 0; k < out.size(); ++k) {
        out(k) += xi * normal(rng);
    }
    return out;
}

CMatrix depolarize(const CMatrix &rho, double xi) {
    if (xi == 0.0) {
        return rho;
    }
    const auto d = rho.rows();
    return (1.0 - xi) * rho + (xi / static_cast<double>(d)) * CMatrix::Identity(d, d);
}

CMatrix coherent_overrotate(const CMatrix &rho, double xi, const CMatrix &generator) {
    if (generator.rows() != rho.rows() || generator.cols() != rho.cols()) {
        throw DimensionError("coherent_overrotate: generator and state dimensions differ");
    }
    if (hermitian_defect(generator) > 1e-10) {
        throw DomainError("coherent_overrotate: generator is not Hermitian");
    }
    if (xi == 0.0) {
        return rho;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(generator));
    if (es.info() != Eigen::Success) {
        throw NumericError("coherent_overrotate: eigensolver failed");
    }
    const auto &w = es.eigenvalues();
    CVector phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        phases(k) = std::exp(Complex(0.0, xi * w(k)));
    }
    const CMatrix &v = es.eigenvectors();
    const CMatrix u = v * phases.asDiagonal() * v.adjoint();
    return u * rho * u.adjoint();
}

CMatrix random_hermitian(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    const auto d = static_cast<Eigen::Index>(dim);
    const CMatrix g = complex_gaussian(d, d, rng);
    CMatrix h = hermitize(g);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
    h /= norm;
    // Rescaling can leave rounding asymmetry; restore exact Hermiticity.
    return hermitize(h);
}

KrausSet haar_random_channel(std::size_t dim, std::size_t kraus_count, std::uint64_t seed) {
    if (dim < 1 || kraus_count < 1) {
        throw SizeError("haar_random_channel: dimension and Kraus count must be positive");
    }
    Rng rng(seed);
    const auto d = static_cast<Eigen::Index>(dim);
    const CMatrix w = haar_unitary(d * static_cast<Eigen::Index>(kraus_count), rng);
    KrausSet set;
    set.operators.reserve(kraus_count);
    for (std::size_t i = 0; i < kraus_count; ++i) {
        set.operators.push_back(w.block(static_cast<Eigen::Index>(i) * d, 0, d, d));
    }
    return set;
}

CMatrix incoherent_mix(const CMatrix &rho, double xi, const KrausSet &kraus) {
    if (xi == 0.0) {
        return rho;
    }
    return (1.0 - xi) * rho + xi * apply_kraus(kraus, rho);
}

ErrorChannel::ErrorChannel(const NoiseSpec &spec, std::size_t dim) : spec_(spec), dim_(dim) {
    spec_.validate();
    if (spec_.kind == NoiseKind::Coherent) {
        generator_ = random_hermitian(dim_, spec_.seed);
    } else if (spec_.kind == NoiseKind::Incoherent) {
        kraus_ = haar_random_channel(dim_, dim_ * dim_, spec_.seed);
    }
}

CMatrix ErrorChannel::apply(const CMatrix &rho) const {
    if (spec_.xi == 0.0) {
        return rho;
    }
    switch (spec_.kind) {
        case NoiseKind::Depolarizing:
            return depolarize(rho, spec_.xi);
        case NoiseKind::Coherent:
            return coherent_overrotate(rho, spec_.xi, generator_);
        case NoiseKind::Incoherent:
            return incoherent_mix(rho, spec_.xi, kraus_);
        default:
            return rho;
    }
}

}  // namespace qpt
