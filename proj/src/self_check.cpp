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


#include "qpt/self_check.hpp"

#include <algorithm>
#include <cmath>

#include "qpt/linalg.hpp"
#include "qpt/optim.hpp"
#include "qpt/process_model.hpp"
#include "qpt/random.hpp"
#include "qpt/sensing.hpp"

namespace qpt {

namespace {

constexpr double kFdStep = 1e-5;

CMatrix random_unit_hermitian(Eigen::Index n, Rng &rng) {
    CMatrix h = hermitize(complex_gaussian(n, n, rng));
    return h / h.norm();
}

CMatrix random_psd(Eigen::Index n, Rng &rng) {
    const CMatrix g = complex_gaussian(n, n, rng);
    CMatrix p = g * g.adjoint();
    return hermitize(p / p.trace().real());
}

double relative_gap(double analytic, double numeric) {
    return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-8});
}

struct Fixture {
    OperatorBasis basis;
    SensingOperators ops;
    MeasurementPlan plan;
};

Fixture make_fixture(int n_qubits) {
    OperatorBasis basis = pauli_basis(n_qubits);
    const std::size_t d = basis.dim();
    SensingOperators ops(generic_input_states(d), pure_state_povm(d), basis);
    MeasurementPlan plan = full_plan(ops.prep_count(), ops.povm_count());
    return Fixture{std::move(basis), std::move(ops), std::move(plan)};
}

}  // namespace

GradientErrors gradient_errors(int n_qubits, int instances, int directions, std::uint64_t seed,
                               const GradHFn &grad_h) {
    const Fixture fx = make_fixture(n_qubits);
    const auto d2 = static_cast<Eigen::Index>(fx.basis.size());
    const SensingMap map(fx.ops, fx.plan);
    Rng rng(seed);
    std::normal_distribution<double> normal;
    GradientErrors worst;
    for (int k = 0; k < instances; ++k) {
        const CMatrix chi = random_psd(d2, rng);
        RVector f = map.forward(random_psd(d2, rng));
        for (Eigen::Index i = 0; i < f.size(); ++i) f(i) += 0.1 * normal(rng);

        const auto data = [&](const CMatrix &x) { return 0.5 * (f - map.forward(x)).squaredNorm(); };
        const auto tp = [&](const CMatrix &x) { return tp_residual(x, fx.basis).squaredNorm(); };
        const CMatrix gf = -map.adjoint(f - map.forward(chi));
        const CMatrix gh = grad_h(chi, fx.basis);

        const CMatrix u = complex_gaussian(d2, 2, rng) / std::sqrt(static_cast<double>(d2));
        const double lambda = 1.0;
        const auto composed = [&](const CMatrix &v) {
            const CMatrix x = v * v.adjoint();
            return data(x) + lambda * tp(x);
        };
        const CMatrix uu = u * u.adjoint();
        const CMatrix factored = 2.0 * (-map.adjoint(f - map.forward(uu)) + lambda * grad_h(uu, fx.basis)) * u;

        for (int j = 0; j < directions; ++j) {
            const CMatrix delta = random_unit_hermitian(d2, rng);
            const double fd_f = (data(chi + kFdStep * delta) - data(chi - kFdStep * delta)) / (2 * kFdStep);
            const double fd_h = (tp(chi + kFdStep * delta) - tp(chi - kFdStep * delta)) / (2 * kFdStep);
            worst.data = std::max(worst.data, relative_gap(hs_inner(gf, delta), fd_f));
            worst.tp = std::max(worst.tp, relative_gap(hs_inner(gh, delta), fd_h));

            CMatrix v = complex_gaussian(d2, 2, rng);
            v /= v.norm();
            const double fd_u = (composed(u + kFdStep * v) - composed(u - kFdStep * v)) / (2 * kFdStep);
            worst.factored = std::max(worst.factored, relative_gap(hs_inner(factored, v), fd_u));
        }
    }
    return worst;
}

double adjoint_error(int n_qubits, int pairs, std::uint64_t seed) {
    const Fixture fx = make_fixture(n_qubits);
    const auto d2 = static_cast<Eigen::Index>(fx.basis.size());
    const SensingMap map(fx.ops, fx.plan);
    Rng rng(seed);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (int k = 0; k < pairs; ++k) {
        const CMatrix chi = hermitize(complex_gaussian(d2, d2, rng));
        RVector y(static_cast<Eigen::Index>(map.m()));
        for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = normal(rng);
        const RVector ax = map.forward(chi);
        const double lhs = ax.dot(y);
        const double rhs = hs_inner(chi, map.adjoint(y));
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, ax.norm() * y.norm()));
    }
    return worst;
}

CptpReport cptp_ground_truth(int n_qubits, int unitaries, std::uint64_t seed) {
    const OperatorBasis basis = pauli_basis(n_qubits);
    const auto d = static_cast<Eigen::Index>(basis.dim());
    Rng rng(seed);
    CptpReport report;
    report.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (int k = 0; k < unitaries; ++k) {
        const CMatrix u = haar_unitary(d, rng);
        const ProcessMatrix chi = chi_from_unitary(u, basis);
        report.max_tp_defect = std::max(report.max_tp_defect, tp_defect(chi, basis));
        report.min_eigenvalue = std::min(report.min_eigenvalue, min_eigenvalue(chi.chi));
        const CVector psi = complex_gaussian(d, 1, rng).col(0).normalized();
        const CMatrix rho = psi * psi.adjoint();
        const CMatrix diff = apply_chi(chi, basis, rho) - u * rho * u.adjoint();
        report.max_apply_error = std::max(report.max_apply_error, diff.norm());
    }
    return report;
}

std::vector<CheckResult> run_self_checks(bool quick, std::uint64_t seed, const GradHFn &grad_h) {
    const int instances = quick ? 3 : 20;
    const int directions = quick ? 3 : 10;
    const int pairs = quick ? 10 : 100;
    const int unitaries = quick ? 10 : 100;
    std::vector<CheckResult> out;
    for (int n = 1; n <= 2; ++n) {
        const std::string tag = "_n" + std::to_string(n);
        const std::uint64_t s = derive_seed(seed, {label_hash("check"), static_cast<std::uint64_t>(n)});

        const double adj = adjoint_error(n, pairs, s);
        out.push_back({"adjoint_identity" + tag, adj <= 1e-10, adj, 1e-10});

        const GradientErrors g = gradient_errors(n, instances, directions, s, grad_h);
        out.push_back({"grad_F_finite_difference" + tag, g.data <= 1e-5, g.data, 1e-5});
        out.push_back({"grad_H_finite_difference" + tag, g.tp <= 1e-5, g.tp, 1e-5});
        out.push_back({"factored_gradient_finite_difference" + tag, g.factored <= 1e-5, g.factored, 1e-5});

        const Povm povm = pure_state_povm(std::size_t{1} << n);
        const PovmReport pr = validate_povm(povm);
        out.push_back({"povm_validity" + tag, pr.valid, pr.completeness_defect, 1e-10});

        const CptpReport cp = cptp_ground_truth(n, unitaries, s);
        out.push_back({"unitary_tp_defect" + tag, cp.max_tp_defect <= 1e-10, cp.max_tp_defect, 1e-10});
        out.push_back({"unitary_chi_psd" + tag, cp.min_eigenvalue >= -1e-10, cp.min_eigenvalue, -1e-10});
        out.push_back({"unitary_chi_action" + tag, cp.max_apply_error <= 1e-8, cp.max_apply_error, 1e-8});
    }
    return out;
}

}  // namespace qpt
