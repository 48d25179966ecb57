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

#include "qpt/operator_basis.hpp"

#include <algorithm>
#include <cmath>

#include "qpt/linalg.hpp"

namespace qpt {

namespace {

constexpr double kPsdTolerance = 1e-12;
constexpr double kPovmDefectTolerance = 1e-10;
constexpr int kMaxPovmHalvings = 60;

CMatrix pauli_factor(int which) {
    CMatrix m = CMatrix::Zero(2, 2);
    const Complex i(0.0, 1.0);
    switch (which) {
        case 0:
            m(0, 0) = 1.0;
            m(1, 1) = 1.0;
            break;
        case 1:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case 2:
            m(0, 1) = -i;
            m(1, 0) = i;
            break;
        default:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
    }
    return m;
}

CMatrix vec(const CMatrix &m) {
    return Eigen::Map<const CVector>(m.data(), m.size());
}

CVector ket(std::size_t d, std::size_t k) {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(d));
    v(static_cast<Eigen::Index>(k)) = 1.0;
    return v;
}

}  // namespace

std::string to_string(BasisKind kind) {
    return kind == BasisKind::Pauli ? "pauli" : "gellmann";
}

BasisKind parse_basis_kind(std::string_view text) {
    if (text == "pauli") {
        return BasisKind::Pauli;
    }
    if (text == "gellmann" || text == "gell-mann") {
        return BasisKind::GellMann;
    }
    throw DomainError("unknown basis kind: " + std::string(text));
}

OperatorBasis::OperatorBasis(std::size_t dim, std::vector<CMatrix> ops) : dim_(dim), ops_(std::move(ops)) {
    if (dim_ < 1) {
        throw SizeError("OperatorBasis: dimension must be positive");
    }
    const std::size_t d2 = dim_ * dim_;
    if (ops_.size() != d2) {
        throw SizeError("OperatorBasis: expected d^2 operators");
    }
    const auto d = static_cast<Eigen::Index>(dim_);
    for (const auto &op : ops_) {
        if (op.rows() != d || op.cols() != d) {
            throw DimensionError("OperatorBasis: operator is not d x d");
        }
    }
    products_.reserve(d2 * d2);
    tp_map_.resize(d * d, static_cast<Eigen::Index>(d2 * d2));
    for (std::size_t i = 0; i < d2; ++i) {
        for (std::size_t j = 0; j < d2; ++j) {
            products_.push_back(ops_[j].adjoint() * ops_[i]);
        }
    }
    // Column (i + j·d²) of the map multiplies χ(i, j) in column-major vec(χ).
    for (std::size_t j = 0; j < d2; ++j) {
        for (std::size_t i = 0; i < d2; ++i) {
            tp_map_.col(static_cast<Eigen::Index>(i + j * d2)) = vec(product(i, j));
        }
    }
    vectorized_.resize(d * d, static_cast<Eigen::Index>(d2));
    for (std::size_t m = 0; m < d2; ++m) {
        vectorized_.col(static_cast<Eigen::Index>(m)) = vec(ops_[m]);
    }
}

double OperatorBasis::gram_defect() const {
    const CMatrix gram = vectorized_.adjoint() * vectorized_;
    const auto n = gram.rows();
    return (gram - static_cast<double>(dim_) * CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

OperatorBasis pauli_basis(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 4) {
        throw SizeError("pauli_basis: qubit count must be in [1, 4]");
    }
    const std::size_t count = std::size_t{1} << (2 * n_qubits);
    std::vector<CMatrix> ops;
    ops.reserve(count);
    for (std::size_t index = 0; index < count; ++index) {
        // Base-4 digits of index, most significant first, select the factors.
        CMatrix m = CMatrix::Identity(1, 1);
        for (int q = n_qubits - 1; q >= 0; --q) {
            const int digit = static_cast<int>((index >> (2 * q)) & 3U);
            m = kron(m, pauli_factor(digit));
        }
        ops.push_back(std::move(m));
    }
    return OperatorBasis(std::size_t{1} << n_qubits, std::move(ops));
}

OperatorBasis gell_mann_basis(std::size_t dim) {
    if (dim < 2) {
        throw SizeError("gell_mann_basis: dimension must be at least 2");
    }
    const double d = static_cast<double>(dim);
    const double scale = std::sqrt(d / 2.0);
    const Complex i(0.0, 1.0);
    std::vector<CMatrix> ops;
    ops.reserve(dim * dim);
    ops.push_back(CMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
    for (std::size_t k = 0; k < dim; ++k) {
        for (std::size_t l = k + 1; l < dim; ++l) {
            ops.push_back(scale * (outer_basis(dim, k, l) + outer_basis(dim, l, k)));
        }
    }
    for (std::size_t k = 0; k < dim; ++k) {
        for (std::size_t l = k + 1; l < dim; ++l) {
            ops.push_back(scale * (-i * outer_basis(dim, k, l) + i * outer_basis(dim, l, k)));
        }
    }
    for (std::size_t l = 1; l < dim; ++l) {
        const double ld = static_cast<double>(l);
        CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        for (std::size_t j = 0; j < l; ++j) {
            m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = 1.0;
        }
        m(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l)) = -ld;
        ops.push_back(scale * std::sqrt(2.0 / (ld * (ld + 1.0))) * m);
    }
    return OperatorBasis(dim, std::move(ops));
}

OperatorBasis make_basis(BasisKind kind, int n_qubits) {
    if (n_qubits < 1 || n_qubits > 4) {
        throw SizeError("make_basis: qubit count must be in [1, 4]");
    }
    if (kind == BasisKind::Pauli) {
        return pauli_basis(n_qubits);
    }
    return gell_mann_basis(std::size_t{1} << n_qubits);
}

PreparationSet generic_input_states(std::size_t dim) {
    if (dim < 2) {
        throw SizeError("generic_input_states: dimension must be at least 2");
    }
    PreparationSet set;
    set.dim = dim;
    set.states.reserve(dim * dim);
    auto push = [&](const CVector &psi) { set.states.push_back(psi * psi.adjoint()); };
    for (std::size_t k = 0; k < dim; ++k) {
        push(ket(dim, k));
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (const Complex phase : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
        for (std::size_t k = 0; k < dim; ++k) {
            for (std::size_t l = k + 1; l < dim; ++l) {
                push((ket(dim, k) + phase * ket(dim, l)) * inv_sqrt2);
            }
        }
    }
    return set;
}

Povm pure_state_povm(std::size_t dim) {
    if (dim < 2) {
        throw SizeError("pure_state_povm: dimension must be at least 2");
    }
    const auto d = static_cast<Eigen::Index>(dim);
    const CMatrix identity = CMatrix::Identity(d, d);
    const Complex i(0.0, 1.0);
    double a = 1.0 / (2.0 * static_cast<double>(dim));
    double b = a;
    for (int attempt = 0; attempt <= kMaxPovmHalvings; ++attempt) {
        Povm povm;
        povm.dim = dim;
        povm.a = a;
        povm.b = b;
        povm.elements.reserve(2 * dim);
        povm.elements.push_back(a * outer_basis(dim, 0, 0));
        for (std::size_t m = 1; m < dim; ++m) {
            povm.elements.push_back(b * (identity + outer_basis(dim, 0, m) + outer_basis(dim, m, 0)));
        }
        for (std::size_t m = 1; m < dim; ++m) {
            povm.elements.push_back(b * (identity + i * (outer_basis(dim, 0, m) - outer_basis(dim, m, 0))));
        }
        CMatrix partial = CMatrix::Zero(d, d);
        for (const auto &e : povm.elements) {
            partial += e;
        }
        CMatrix last = identity - partial;
        if (min_eigenvalue(last) >= -kPsdTolerance) {
            povm.elements.push_back(std::move(last));
            return povm;
        }
        a *= 0.5;
        b *= 0.5;
    }
    throw InfeasibleError("pure_state_povm: no PSD-feasible (a, b) found");
}

PovmReport validate_povm(const Povm &povm) {
    PovmReport report;
    const auto d = static_cast<Eigen::Index>(povm.dim);
    CMatrix total = CMatrix::Zero(d, d);
    bool ok = !povm.elements.empty();
    for (const auto &e : povm.elements) {
        if (e.rows() != d || e.cols() != d) {
            throw DimensionError("validate_povm: element is not d x d");
        }
        const double herm = hermitian_defect(e);
        const double lo = min_eigenvalue(e);
        report.hermitian_defects.push_back(herm);
        report.min_eigenvalues.push_back(lo);
        ok = ok && herm <= kPovmDefectTolerance && lo >= -kPsdTolerance;
        total += e;
    }
    report.completeness_defect = (total - CMatrix::Identity(d, d)).norm();
    report.valid = ok && report.completeness_defect <= kPovmDefectTolerance;
    return report;
}

}  // namespace qpt
