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

#include "qpt/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>

#include "qpt/linalg.hpp"
#include "qpt/random.hpp"

namespace qpt {

namespace {

Eigen::Map<const CVector> as_vec(const CMatrix &m) {
    return Eigen::Map<const CVector>(m.data(), m.size());
}

}  // namespace

SensingOperators::SensingOperators(const PreparationSet &prep, const Povm &povm, const OperatorBasis &basis)
    : dim_(basis.dim()), prep_(prep.states), povm_(povm.elements) {
    if (prep.dim != dim_ || povm.dim != dim_) {
        throw DimensionError("SensingOperators: preparation, POVM and basis dimensions differ");
    }
    const auto d = static_cast<Eigen::Index>(dim_);
    for (const auto &m : prep_) {
        if (m.rows() != d || m.cols() != d) {
            throw DimensionError("SensingOperators: input state has wrong shape");
        }
    }
    for (const auto &m : povm_) {
        if (m.rows() != d || m.cols() != d) {
            throw DimensionError("SensingOperators: POVM element has wrong shape");
        }
    }
    const std::size_t d2 = basis.size();
    const auto d4 = static_cast<Eigen::Index>(d2 * d2);
    vectorized_.resize(d4, static_cast<Eigen::Index>(setting_count()));

    // D[m, n] = Tr(Ã_m† (E Ã_n ρ)) = vec(Ã_m)^H vec(E Ã_n ρ); one product per (i, j).
    const CMatrix &basis_vec = basis.vectorized();
    CMatrix images(d * d, static_cast<Eigen::Index>(d2));
    CMatrix d_op(static_cast<Eigen::Index>(d2), static_cast<Eigen::Index>(d2));
    for (std::size_t i = 0; i < prep_count(); ++i) {
        std::vector<CMatrix> right;
        right.reserve(d2);
        for (std::size_t n = 0; n < d2; ++n) {
            right.push_back(basis.op(n) * prep_[i]);
        }
        for (std::size_t j = 0; j < povm_count(); ++j) {
            for (std::size_t n = 0; n < d2; ++n) {
                const CMatrix image = povm_[j] * right[n];
                images.col(static_cast<Eigen::Index>(n)) = as_vec(image);
            }
            d_op.noalias() = basis_vec.adjoint() * images;
            vectorized_.col(static_cast<Eigen::Index>(index(i, j))) = as_vec(d_op);
        }
    }
}

CMatrix SensingOperators::op(std::size_t i, std::size_t j) const {
    if (i >= prep_count() || j >= povm_count()) {
        throw SizeError("SensingOperators::op: index out of range");
    }
    const auto d2 = static_cast<Eigen::Index>(dim_ * dim_);
    const CVector column = vectorized_.col(static_cast<Eigen::Index>(index(i, j)));
    return Eigen::Map<const CMatrix>(column.data(), d2, d2);
}

SensingOperators build_sensing_operators(const PreparationSet &prep, const Povm &povm, const OperatorBasis &basis) {
    return SensingOperators(prep, povm, basis);
}

MeasurementPlan full_plan(std::size_t prep_count, std::size_t povm_count) {
    MeasurementPlan plan;
    plan.selected.reserve(prep_count * povm_count);
    for (std::size_t i = 0; i < prep_count; ++i) {
        for (std::size_t j = 0; j < povm_count; ++j) {
            plan.selected.emplace_back(i, j);
        }
    }
    return plan;
}

void validate_plan(const MeasurementPlan &plan, std::size_t prep_count, std::size_t povm_count) {
    if (plan.m() == 0 || plan.m() > prep_count * povm_count) {
        throw SizeError("measurement plan size out of range");
    }
    for (std::size_t k = 0; k < plan.m(); ++k) {
        const auto [i, j] = plan.selected[k];
        if (i >= prep_count || j >= povm_count) {
            throw SizeError("measurement plan index out of range");
        }
        if (k > 0 && !(plan.selected[k - 1] < plan.selected[k])) {
            throw SizeError("measurement plan must be sorted and free of duplicates");
        }
    }
}

MeasurementPlan subsample_plan(std::size_t prep_count, std::size_t povm_count, std::size_t m, std::uint64_t seed) {
    const std::size_t total = prep_count * povm_count;
    if (m < 1 || m > total) {
        throw SizeError("subsample_plan: m must be in [1, P*Q]");
    }
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Partial Fisher-Yates: the first m slots become a uniform sample without replacement.
    Rng rng(seed);
    for (std::size_t k = 0; k < m; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, total - 1);
        std::swap(order[k], order[pick(rng)]);
    }
    order.resize(m);
    std::sort(order.begin(), order.end());
    MeasurementPlan plan;
    plan.selected.reserve(m);
    for (std::size_t flat : order) {
        plan.selected.emplace_back(flat / povm_count, flat % povm_count);
    }
    return plan;
}

std::size_t measurement_count(double scale_c, std::size_t rank, int n_qubits, std::size_t cap) {
    if (!(scale_c > 0.0) || rank < 1 || n_qubits < 1 || n_qubits > 4) {
        throw SizeError("measurement_count: C, r and n must be positive (n <= 4)");
    }
    const double d = std::ldexp(1.0, n_qubits);
    const double m = std::round(scale_c * static_cast<double>(rank) * std::pow(2.0, d));
    if (m < 1.0) {
        return 1;
    }
    return m >= static_cast<double>(cap) ? cap : static_cast<std::size_t>(m);
}

SensingMap::SensingMap(const SensingOperators &ops, const MeasurementPlan &plan) : dim_(ops.dim()) {
    validate_plan(plan, ops.prep_count(), ops.povm_count());
    const CMatrix &all = ops.vectorized();
    columns_.resize(all.rows(), static_cast<Eigen::Index>(plan.m()));
    for (std::size_t k = 0; k < plan.m(); ++k) {
        const auto [i, j] = plan.selected[k];
        columns_.col(static_cast<Eigen::Index>(k)) = all.col(static_cast<Eigen::Index>(ops.index(i, j)));
    }
}

RVector SensingMap::forward(const CMatrix &chi) const {
    if (chi.size() != columns_.rows()) {
        throw DimensionError("SensingMap::forward: chi has the wrong size");
    }
    const CVector raw = columns_.adjoint() * as_vec(chi);
    const double residue = raw.imag().cwiseAbs().maxCoeff();
    if (residue > 1e-6 * std::max(1.0, chi.norm())) {
        throw NumericError("forward map: imaginary residue too large (is chi Hermitian?)");
    }
    return raw.real();
}

CMatrix SensingMap::adjoint(const RVector &y) const {
    if (static_cast<std::size_t>(y.size()) != m()) {
        throw DimensionError("SensingMap::adjoint: length of y does not match the plan");
    }
    const auto d2 = static_cast<Eigen::Index>(dim_ * dim_);
    const CVector v = columns_ * y.cast<Complex>();
    return hermitize(Eigen::Map<const CMatrix>(v.data(), d2, d2));
}

MeasurementVector forward_map(const SensingOperators &ops, const MeasurementPlan &plan, const ProcessMatrix &chi) {
    if (chi.dim != ops.dim()) {
        throw DimensionError("forward_map: process and sensing dimensions differ");
    }
    SensingMap map(ops, plan);
    return MeasurementVector{plan, map.forward(chi.chi)};
}

CMatrix adjoint_map(const SensingOperators &ops, const MeasurementPlan &plan, const RVector &y) {
    SensingMap map(ops, plan);
    return map.adjoint(y);
}

MeasurementVector simulate_measurements(const ProcessMatrix &truth, const OperatorBasis &basis,
                                        const SensingOperators &ops, const MeasurementPlan &plan,
                                        const NoiseSpec &noise, std::uint64_t measurement_seed) {
    noise.validate();
    if (noise.kind == NoiseKind::None || (noise.acts_on_channel() && noise.xi == 0.0)) {
        return forward_map(ops, plan, truth);
    }
    if (noise.kind == NoiseKind::Gaussian) {
        MeasurementVector mv = forward_map(ops, plan, truth);
        mv.values = gaussian_perturb(mv.values, noise.xi, measurement_seed);
        return mv;
    }
    validate_plan(plan, ops.prep_count(), ops.povm_count());
    const ErrorChannel channel(noise, ops.dim());
    std::vector<CMatrix> outputs(ops.prep_count());
    std::vector<bool> ready(ops.prep_count(), false);
    MeasurementVector mv{plan, RVector(static_cast<Eigen::Index>(plan.m()))};
    for (std::size_t k = 0; k < plan.m(); ++k) {
        const auto [i, j] = plan.selected[k];
        if (!ready[i]) {
            outputs[i] = channel.apply(apply_chi(truth, basis, ops.prep_states()[i]));
            ready[i] = true;
        }
        mv.values(static_cast<Eigen::Index>(k)) = (ops.povm_elements()[j] * outputs[i]).trace().real();
    }
    return mv;
}

void write_measurements_csv(std::ostream &out, const MeasurementVector &mv) {
    out << "i,j,value\n";
    out << std::setprecision(17);
    for (std::size_t k = 0; k < mv.plan.m(); ++k) {
        out << mv.plan.selected[k].first << ',' << mv.plan.selected[k].second << ','
            << mv.values(static_cast<Eigen::Index>(k)) << '\n';
    }
}

}  // namespace qpt
