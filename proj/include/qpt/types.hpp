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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qpt {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Invalid sizes: qubit counts, dimensions, ranks or measurement counts out of range.
class SizeError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Operands whose dimensions do not agree.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Input that violates a mathematical precondition (non-unitary target, non-Hermitian generator, ...).
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// The POVM constant search could not make every element positive semidefinite.
class InfeasibleError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A floating-point consistency check failed (imaginary residue, eigensolver failure, ...).
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace qpt
