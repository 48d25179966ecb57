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
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qpt/linalg.hpp"
#include "qpt/noise.hpp"
#include "qpt/random.hpp"

namespace qpt {
namespace {

const Complex kI(0.0, 1.0);

CMatrix random_state(Eigen::Index d, std::uint64_t seed) {
    Rng rng(seed);
    const CMatrix g = complex_gaussian(d, d, rng);
    CMatrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

TEST(Depolarize, KnownValuesAndLimits) {
    CMatrix zero = CMatrix::Zero(2, 2);
    zero(0, 0) = 1.0;
    CMatrix expected = CMatrix::Zero(2, 2);
    expected(0, 0) = 0.75;
    expected(1, 1) = 0.25;
    EXPECT_LT((depolarize(zero, 0.5) - expected).norm(), 1e-15);
    const CMatrix rho = random_state(4, 3);
    EXPECT_LT((depolarize(rho, 1.0) - 0.25 * CMatrix::Identity(4, 4)).norm(), 1e-15);
    EXPECT_EQ(depolarize(rho, 0.0), rho);
    EXPECT_NEAR(depolarize(rho, 0.3).trace().real(), 1.0, 1e-14);
}

TEST(CoherentOverrotate, QuarterTurnAboutZTakesPlusToMinusY) {
    CMatrix z(2, 2);
    z << 1, 0, 0, -1;
    CMatrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    CMatrix y(2, 2);
    y << 0, -kI, kI, 0;
    const CMatrix expected = 0.5 * (CMatrix::Identity(2, 2) - y);
    EXPECT_LT((coherent_overrotate(plus, std::numbers::pi / 4, z) - expected).norm(), 1e-15);
}

TEST(CoherentOverrotate, UnitaryActionPreservesSpectrum) {
    const CMatrix h = random_hermitian(4, 12);
    const CMatrix rho = random_state(4, 5);
    const CMatrix out = coherent_overrotate(rho, 0.1, h);
    EXPECT_NEAR(out.trace().real(), 1.0, 1e-14);
    EXPECT_NEAR((out * out).trace().real(), (rho * rho).trace().real(), 1e-14);
    EXPECT_GT((out - rho).norm(), 1e-6);
    EXPECT_EQ(coherent_overrotate(rho, 0.0, h), rho);
}

TEST(CoherentOverrotate, RejectsNonHermitianGenerator) {
    CMatrix g = CMatrix::Zero(2, 2);
    g(0, 1) = 1.0;
    EXPECT_THROW(coherent_overrotate(CMatrix::Identity(2, 2), 0.1, g), DomainError);
    EXPECT_THROW(coherent_overrotate(CMatrix::Identity(2, 2), 0.1, CMatrix::Identity(3, 3)), DimensionError);
}

TEST(RandomHermitian, UnitSpectralNormAndDeterministic) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const CMatrix h = random_hermitian(4, s);
        EXPECT_EQ(hermitian_defect(h), 0.0);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
        EXPECT_NEAR(es.eigenvalues().cwiseAbs().maxCoeff(), 1.0, 1e-14);
        EXPECT_EQ(h, random_hermitian(4, s));
    }
}

TEST(HaarRandomChannel, TracePreservingByConstruction) {
    for (std::size_t k : {1u, 4u, 16u}) {
        const KrausSet set = haar_random_channel(4, k, 7);
        EXPECT_EQ(set.operators.size(), k);
        EXPECT_LT(set.tp_defect(), 1e-12);
    }
    EXPECT_THROW(haar_random_channel(4, 0, 1), SizeError);
}

TEST(IncoherentMix, InterpolatesBetweenIdentityAndChannel) {
    const KrausSet set = haar_random_channel(4, 16, 2);
    const CMatrix rho = random_state(4, 9);
    const CMatrix full = apply_kraus(set, rho);
    EXPECT_LT((incoherent_mix(rho, 1.0, set) - full).norm(), 1e-15);
    EXPECT_LT((incoherent_mix(rho, 0.3, set) - (0.7 * rho + 0.3 * full)).norm(), 1e-15);
    EXPECT_NEAR(incoherent_mix(rho, 0.3, set).trace().real(), 1.0, 1e-13);
    EXPECT_GE(min_eigenvalue(full), -1e-13);
}

TEST(GaussianPerturb, MomentsOfTheNoise) {
    const Eigen::Index n = 200000;
    const RVector out = gaussian_perturb(RVector::Zero(n), 0.1, 31);
    const double mean = out.mean();
    const double sd = std::sqrt((out.array() - mean).square().sum() / static_cast<double>(n));
    EXPECT_NEAR(mean, 0.0, 0.002);
    EXPECT_NEAR(sd / 0.1, 1.0, 0.02);
}

TEST(GaussianPerturb, ZeroStrengthIsIdentityAndSeedFixesDraw) {
    const RVector f = RVector::LinSpaced(10, 0.0, 1.0);
    EXPECT_EQ(gaussian_perturb(f, 0.0, 1), f);
    EXPECT_EQ(gaussian_perturb(f, 0.05, 4), gaussian_perturb(f, 0.05, 4));
    EXPECT_NE(gaussian_perturb(f, 0.05, 4), gaussian_perturb(f, 0.05, 5));
    EXPECT_THROW(gaussian_perturb(f, -0.1, 1), DomainError);
}

TEST(NoiseSpec, ValidationAndClassification) {
    EXPECT_THROW((NoiseSpec{NoiseKind::Depolarizing, 1.5, 0}).validate(), DomainError);
    EXPECT_THROW((NoiseSpec{NoiseKind::Gaussian, -0.1, 0}).validate(), DomainError);
    EXPECT_NO_THROW((NoiseSpec{NoiseKind::Coherent, 1.0, 0}).validate());
    EXPECT_FALSE((NoiseSpec{NoiseKind::Gaussian, 0.1, 0}).acts_on_channel());
    EXPECT_FALSE((NoiseSpec{NoiseKind::None, 0.0, 0}).acts_on_channel());
    EXPECT_TRUE((NoiseSpec{NoiseKind::Incoherent, 0.1, 0}).acts_on_channel());
}

TEST(NoiseKindText, RoundTrips) {
    for (NoiseKind k : {NoiseKind::None, NoiseKind::Gaussian, NoiseKind::Depolarizing, NoiseKind::Coherent,
                        NoiseKind::Incoherent}) {
        EXPECT_EQ(parse_noise_kind(to_string(k)), k);
    }
    EXPECT_THROW(parse_noise_kind("amplitude"), DomainError);
}

TEST(ErrorChannel, PayloadFixedBySeedAndOutputsAreStates) {
    const CMatrix rho = random_state(4, 1);
    for (NoiseKind k : {NoiseKind::Depolarizing, NoiseKind::Coherent, NoiseKind::Incoherent}) {
        const ErrorChannel a({k, 0.1, 42}, 4);
        const ErrorChannel b({k, 0.1, 42}, 4);
        const CMatrix out = a.apply(rho);
        EXPECT_EQ(out, b.apply(rho));
        EXPECT_NEAR(out.trace().real(), 1.0, 1e-13);
        EXPECT_GE(min_eigenvalue(out), -1e-13);
        EXPECT_EQ(ErrorChannel({k, 0.0, 42}, 4).apply(rho), rho);
    }
    const ErrorChannel c1({NoiseKind::Coherent, 0.1, 1}, 4);
    const ErrorChannel c2({NoiseKind::Coherent, 0.1, 2}, 4);
    EXPECT_GT((c1.apply(rho) - c2.apply(rho)).norm(), 1e-8);
}

}  // namespace
}  // namespace qpt
