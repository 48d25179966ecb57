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

#include "qpt/process_model.hpp"

#include <algorithm>
#include <random>

#include <Eigen/LU>

#include "qpt/linalg.hpp"
#include "qpt/random.hpp"

namespace qpt {

namespace {

constexpr double kUnitaryTolerance = 1e-10;

void require_square(const CMatrix &m, Eigen::Index n, const char *what) {
    if (m.rows() != n || m.cols() != n) {
        throw DimensionError(what);
    }
}

}  // namespace

ProcessMatrix::ProcessMatrix(std::size_t d, CMatrix c) : dim(d), chi(std::move(c)) {
    require_square(chi, static_cast<Eigen::Index>(d * d), "ProcessMatrix: chi must be d^2 x d^2");
}

FactoredProcess::FactoredProcess(std::size_t d, CMatrix u) : dim(d), factor(std::move(u)) {
    if (factor.rows() != static_cast<Eigen::Index>(d * d) || factor.cols() < 1) {
        throw DimensionError("FactoredProcess: factor must be d^2 x r with r >= 1");
    }
}

ProcessMatrix FactoredProcess::process() const {
    return ProcessMatrix(dim, factor * factor.adjoint());
}

std::size_t KrausSet::dim() const {
    return operators.empty() ? 0 : static_cast<std::size_t>(operators.front().rows());
}

double KrausSet::tp_defect() const {
    const auto d = static_cast<Eigen::Index>(dim());
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto &a : operators) {
        sum.noalias() += a.adjoint() * a;
    }
    return (sum - CMatrix::Identity(d, d)).norm();
}

CMatrix apply_kraus(const KrausSet &kraus, const CMatrix &rho) {
    const auto d = static_cast<Eigen::Index>(kraus.dim());
    require_square(rho, d, "apply_kraus: dimension mismatch");
    CMatrix out = CMatrix::Zero(d, d);
    for (const auto &a : kraus.operators) {
        require_square(a, d, "apply_kraus: Kraus operators must share one dimension");
        out.noalias() += a * rho * a.adjoint();
    }
    return out;
}

CMatrix apply_chi(const ProcessMatrix &process, const OperatorBasis &basis, const CMatrix &rho) {
    if (basis.dim() != process.dim) {
        throw DimensionError("apply_chi: basis and process dimensions differ");
    }
    const auto d = static_cast<Eigen::Index>(process.dim);
    require_square(rho, d, "apply_chi: dimension mismatch");
    const std::size_t count = basis.size();
    std::vector<CMatrix> left;
    left.reserve(count);
    for (std::size_t m = 0; m < count; ++m) {
        left.push_back(basis.op(m) * rho);
    }
    CMatrix out = CMatrix::Zero(d, d);
    for (std::size_t n = 0; n < count; ++n) {
        CMatrix column = CMatrix::Zero(d, d);
        for (std::size_t m = 0; m < count; ++m) {
            column += process.chi(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) * left[m];
        }
        out.noalias() += column * basis.op(n).adjoint();
    }
    return out;
}

ProcessMatrix chi_from_unitary(const CMatrix &target, const OperatorBasis &basis) {
    const auto d = static_cast<Eigen::Index>(basis.dim());
    require_square(target, d, "chi_from_unitary: target dimension does not match basis");
    if (unitarity_defect(target) > kUnitaryTolerance) {
        throw DomainError("chi_from_unitary: target is not unitary");
    }
    const CVector rhs = Eigen::Map<const CVector>(target.data(), target.size());
    Eigen::FullPivLU<CMatrix> lu(basis.vectorized());
    if (!lu.isInvertible()) {
        throw NumericError("chi_from_unitary: basis is singular");
    }
    const CVector x = lu.solve(rhs);
    return ProcessMatrix(basis.dim(), x * x.adjoint());
}

CMatrix random_target_unitary(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    return haar_unitary(static_cast<Eigen::Index>(dim), rng);
}

double tp_defect(const ProcessMatrix &process, const OperatorBasis &basis) {
    if (basis.dim() != process.dim) {
        throw DimensionError("tp_defect: basis and process dimensions differ");
    }
    const auto d = static_cast<Eigen::Index>(process.dim);
    const CVector s = basis.tp_map() * Eigen::Map<const CVector>(process.chi.data(), process.chi.size());
    CMatrix residual = Eigen::Map<const CMatrix>(s.data(), d, d);
    residual -= CMatrix::Identity(d, d);
    return residual.squaredNorm();
}

double process_fidelity(const ProcessMatrix &estimate, const ProcessMatrix &truth) {
    if (estimate.chi.rows() != truth.chi.rows() || estimate.chi.cols() != truth.chi.cols()) {
        throw DimensionError("process_fidelity: dimension mismatch");
    }
    const double te = estimate.trace();
    const double tt = truth.trace();
    if (!(te > 0.0) || !(tt > 0.0)) {
        throw DomainError("process_fidelity: zero-trace input");
    }
    // Tr(χ̂ χ*) = Σ conj(χ̂_ij) χ*_ij for Hermitian χ̂.
    const double overlap = hs_inner(estimate.chi, truth.chi);
    return std::clamp(overlap / (te * tt), 0.0, 1.0);
}

FactoredProcess random_factor_init(std::size_t dim, std::size_t rank, std::uint64_t seed) {
    const std::size_t d2 = dim * dim;
    if (rank < 1 || rank > d2) {
        throw SizeError("random_factor_init: rank must be in [1, d^2]");
    }
    Rng rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    CMatrix u(static_cast<Eigen::Index>(d2), static_cast<Eigen::Index>(rank));
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            const double re = uniform(rng);
            const double im = uniform(rng);
            u(i, j) = Complex(re, im);
        }
    }
    return FactoredProcess(dim, std::move(u));
}

}  // namespace qpt
