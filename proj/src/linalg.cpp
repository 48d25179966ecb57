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

#include "qpt/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace qpt {

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double hs_inner(const CMatrix &a, const CMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("hs_inner: shape mismatch");
    }
    // Re Σ conj(a_ij) b_ij
    double acc = 0.0;
    const Complex *pa = a.data();
    const Complex *pb = b.data();
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        acc += pa[k].real() * pb[k].real() + pa[k].imag() * pb[k].imag();
    }
    return acc;
}

double hermitian_defect(const CMatrix &m) {
    return (m - m.adjoint()).norm();
}

CMatrix hermitize(const CMatrix &m) {
    return (m + m.adjoint()) * 0.5;
}

double min_eigenvalue(const CMatrix &m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(m), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericError("min_eigenvalue: eigensolver failed");
    }
    return es.eigenvalues()(0);
}

double spectral_norm_power(const CMatrix &hermitian, int iterations) {
    const Eigen::Index n = hermitian.rows();
    if (n == 0) {
        return 0.0;
    }
    // Fixed, generic start vector: unlikely to be orthogonal to the top eigenvector.
    CVector v(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        v(k) = Complex(1.0 + 0.1 * static_cast<double>(k), 0.01 * static_cast<double>(k % 7));
    }
    v.normalize();
    double estimate = 0.0;
    for (int it = 0; it < iterations; ++it) {
        CVector w = hermitian * v;
        const double norm = w.norm();
        if (norm == 0.0) {
            return 0.0;
        }
        estimate = norm;
        v = w / norm;
    }
    return estimate;
}

double unitarity_defect(const CMatrix &u) {
    if (u.rows() != u.cols()) {
        throw DimensionError("unitarity_defect: matrix is not square");
    }
    return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm();
}

CMatrix outer_basis(std::size_t d, std::size_t k, std::size_t l) {
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = 1.0;
    return m;
}

}  // namespace qpt
