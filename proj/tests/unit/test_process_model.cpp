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


#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "qpt/io.hpp"
#include "qpt/linalg.hpp"
#include "qpt/process_model.hpp"
#include "qpt/random.hpp"

namespace qpt {
namespace {

CMatrix hadamard() {
    CMatrix h(2, 2);
    h << 1, 1, 1, -1;
    return h / std::sqrt(2.0);
}

CMatrix cnot() {
    CMatrix c = CMatrix::Zero(4, 4);
    c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1;
    return c;
}

TEST(ChiFromUnitary, HadamardHasXZBlockOfOneHalf) {
    const ProcessMatrix chi = chi_from_unitary(hadamard(), pauli_basis(1));
    CMatrix expected = CMatrix::Zero(4, 4);
    expected(1, 1) = expected(3, 3) = expected(1, 3) = expected(3, 1) = 0.5;
    EXPECT_LT((chi.chi - expected).norm(), 1e-14);
}

TEST(ChiFromUnitary, CnotEntriesAreQuarterWithZXSign) {
    // CNOT = (II + IX + ZI - ZX)/2; indices 0, 1, 12, 13.
    const ProcessMatrix chi = chi_from_unitary(cnot(), pauli_basis(2));
    EXPECT_NEAR(chi.chi(0, 0).real(), 0.25, 1e-14);
    EXPECT_NEAR(chi.chi(1, 12).real(), 0.25, 1e-14);
    EXPECT_NEAR(chi.chi(0, 13).real(), -0.25, 1e-14);
    EXPECT_NEAR(chi.chi(2, 2).real(), 0.0, 1e-14);
    EXPECT_NEAR(chi.trace(), 1.0, 1e-14);
}

TEST(ChiFromUnitary, RejectsNonUnitaryTarget) {
    CMatrix m = hadamard();
    m(0, 0) *= 1.01;
    EXPECT_THROW(chi_from_unitary(m, pauli_basis(1)), DomainError);
    EXPECT_THROW(chi_from_unitary(CMatrix::Identity(4, 4), pauli_basis(1)), DimensionError);
}

TEST(ChiFromUnitary, HaarTargetsAreTracePreservingRankOneAndReproduceTheUnitary) {
    const OperatorBasis b = pauli_basis(2);
    Rng rng(5);
    for (int k = 0; k < 20; ++k) {
        const CMatrix u = random_target_unitary(4, static_cast<std::uint64_t>(k));
        const ProcessMatrix chi = chi_from_unitary(u, b);
        EXPECT_LE(tp_defect(chi, b), 1e-10);
        EXPECT_GE(min_eigenvalue(chi.chi), -1e-10);
        EXPECT_NEAR(chi.trace(), 1.0, 1e-12);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(chi.chi);
        EXPECT_LT(es.eigenvalues()(14), 1e-10);
        const CVector psi = complex_gaussian(4, 1, rng).col(0).normalized();
        const CMatrix rho = psi * psi.adjoint();
        EXPECT_LT((apply_chi(chi, b, rho) - u * rho * u.adjoint()).norm(), 1e-8);
    }
}

TEST(ApplyChi, AgreesWithKrausForm) {
    const OperatorBasis b = pauli_basis(1);
    // Amplitude damping with gamma = 0.3.
    const double g = 0.3;
    CMatrix k0(2, 2);
    k0 << 1, 0, 0, std::sqrt(1 - g);
    CMatrix k1(2, 2);
    k1 << 0, std::sqrt(g), 0, 0;
    const KrausSet kraus{{k0, k1}};
    EXPECT_LT(kraus.tp_defect(), 1e-15);
    // χ = Σ_k x_k x_k† with x_k the basis coefficients of each Kraus operator.
    const CMatrix ainv = b.vectorized().inverse();
    CMatrix chi = CMatrix::Zero(4, 4);
    for (const auto &k : kraus.operators) {
        const CVector x = ainv * Eigen::Map<const CVector>(k.data(), 4);
        chi += x * x.adjoint();
    }
    const ProcessMatrix p(2, chi);
    EXPECT_LT(tp_defect(p, b), 1e-24);
    CMatrix rho(2, 2);
    rho << 0.3, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.7;
    EXPECT_LT((apply_chi(p, b, rho) - apply_kraus(kraus, rho)).norm(), 1e-14);
}

TEST(TpDefect, ZeroProcessHasDefectD) {
    const OperatorBasis b = pauli_basis(2);
    EXPECT_DOUBLE_EQ(tp_defect(ProcessMatrix(4, CMatrix::Zero(16, 16)), b), 4.0);
}

TEST(ProcessFidelity, SelfOverlapIsOneForPureAndScaleInvariant) {
    const ProcessMatrix chi = chi_from_unitary(cnot(), pauli_basis(2));
    EXPECT_NEAR(process_fidelity(chi, chi), 1.0, 1e-14);
    EXPECT_NEAR(process_fidelity(ProcessMatrix(4, 3.0 * chi.chi), chi), 1.0, 1e-14);
    const ProcessMatrix ident = chi_from_unitary(CMatrix::Identity(4, 4), pauli_basis(2));
    // |Tr(CNOT)/d|² = (2/4)² = 1/4.
    EXPECT_NEAR(process_fidelity(ident, chi), 0.25, 1e-14);
}

TEST(ProcessFidelity, RejectsZeroTrace) {
    const ProcessMatrix chi = chi_from_unitary(cnot(), pauli_basis(2));
    EXPECT_THROW(process_fidelity(ProcessMatrix(4, CMatrix::Zero(16, 16)), chi), DomainError);
}

TEST(RandomTargetUnitary, DeterministicUnitaryAndSeedSensitive) {
    const CMatrix a = random_target_unitary(4, 9);
    EXPECT_LT(unitarity_defect(a), 1e-12);
    EXPECT_EQ(a, random_target_unitary(4, 9));
    EXPECT_GT((a - random_target_unitary(4, 10)).norm(), 1e-3);
}

TEST(RandomTargetUnitary, HaarSecondMoment) {
    // E|U_00|² = 1/d for Haar U.
    double acc = 0.0;
    const int samples = 4000;
    for (int k = 0; k < samples; ++k) {
        acc += std::norm(random_target_unitary(2, static_cast<std::uint64_t>(k))(0, 0));
    }
    EXPECT_NEAR(acc / samples, 0.5, 0.02);
}

TEST(RandomFactorInit, EntriesInUnitSquareAndDeterministic) {
    const FactoredProcess u = random_factor_init(4, 2, 17);
    ASSERT_EQ(u.factor.rows(), 16);
    ASSERT_EQ(u.rank(), 2u);
    for (Eigen::Index k = 0; k < u.factor.size(); ++k) {
        const Complex z = u.factor.data()[k];
        EXPECT_GE(z.real(), 0.0);
        EXPECT_LT(z.real(), 1.0);
        EXPECT_GE(z.imag(), 0.0);
        EXPECT_LT(z.imag(), 1.0);
    }
    EXPECT_EQ(u.factor, random_factor_init(4, 2, 17).factor);
    EXPECT_GE(min_eigenvalue(u.process().chi), -1e-12);
    EXPECT_THROW(random_factor_init(4, 0, 1), SizeError);
    EXPECT_THROW(random_factor_init(4, 17, 1), SizeError);
}

TEST(ProcessJson, RoundTripsBitExactly) {
    const ProcessMatrix chi = chi_from_unitary(random_target_unitary(4, 3), pauli_basis(2));
    const nlohmann::json j = process_to_json(chi);
    EXPECT_EQ(j.at("d").get<int>(), 4);
    EXPECT_EQ(j.at("re").size(), 16u);
    EXPECT_EQ(j.at("im")[0].size(), 16u);
    const ProcessMatrix back = process_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(back.dim, 4u);
    EXPECT_EQ(back.chi, chi.chi);
}

TEST(ProcessJson, RejectsRaggedRows) {
    nlohmann::json j = process_to_json(ProcessMatrix(1, CMatrix::Identity(1, 1)));
    j["re"] = {{1.0, 2.0}};
    EXPECT_THROW(process_from_json(j), DimensionError);
}

}  // namespace
}  // namespace qpt
