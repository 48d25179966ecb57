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


#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "qpt/cli.hpp"
#include "qpt/harness.hpp"
#include "qpt/io.hpp"
#include "qpt/operator_basis.hpp"
#include "qpt/optim.hpp"
#include "qpt/process_model.hpp"
#include "qpt/sensing.hpp"

namespace py = pybind11;
using namespace qpt;

namespace {

// Runs the CLI in-process and returns (exit code, stdout, stderr).
py::tuple cli(const std::vector<std::string> &args) {
    std::vector<std::string> owned{"qpt"};
    owned.insert(owned.end(), args.begin(), args.end());
    std::vector<char *> argv;
    for (auto &a : owned) argv.push_back(a.data());
    std::ostringstream out;
    std::ostringstream err;
    int code = 0;
    {
        py::gil_scoped_release release;
        code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Low-rank quantum process tomography: projected and factored gradient descent";

    py::register_exception<SizeError>(m, "SizeError", PyExc_ValueError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<OperatorBasis>(m, "OperatorBasis")
        .def_property_readonly("dim", &OperatorBasis::dim)
        .def("__len__", &OperatorBasis::size)
        .def("op", &OperatorBasis::op, py::arg("index"))
        .def_property_readonly("ops", &OperatorBasis::ops);
    m.def("pauli_basis", &pauli_basis, py::arg("n_qubits"));
    m.def("gell_mann_basis", &gell_mann_basis, py::arg("dim"));

    m.def("input_states", [](std::size_t d) { return generic_input_states(d).states; }, py::arg("dim"));
    m.def("povm", [](std::size_t d) { return pure_state_povm(d).elements; }, py::arg("dim"));
    m.def(
        "povm_completeness_defect", [](std::size_t d) { return validate_povm(pure_state_povm(d)).completeness_defect; },
        py::arg("dim"));

    py::class_<ProcessMatrix>(m, "ProcessMatrix")
        .def(py::init<std::size_t, CMatrix>(), py::arg("dim"), py::arg("chi"))
        .def_readonly("dim", &ProcessMatrix::dim)
        .def_readonly("chi", &ProcessMatrix::chi)
        .def("trace", &ProcessMatrix::trace)
        .def("to_json", [](const ProcessMatrix &p) { return process_to_json(p).dump(); })
        .def_static(
            "from_json", [](const std::string &s) { return process_from_json(nlohmann::json::parse(s)); },
            py::arg("text"));

    m.def("random_target_unitary", &random_target_unitary, py::arg("dim"), py::arg("seed"));
    m.def("chi_from_unitary", &chi_from_unitary, py::arg("unitary"), py::arg("basis"));
    m.def("apply_chi", &apply_chi, py::arg("process"), py::arg("basis"), py::arg("rho"));
    m.def("tp_defect", py::overload_cast<const ProcessMatrix &, const OperatorBasis &>(&tp_defect),
          py::arg("process"), py::arg("basis"));
    m.def("process_fidelity", &process_fidelity, py::arg("estimate"), py::arg("truth"));

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("lam", &SolverConfig::lambda)
        .def_property(
            "step_mode", [](const SolverConfig &c) { return to_string(c.step_mode); },
            [](SolverConfig &c, const std::string &s) { c.step_mode = parse_step_mode(s); })
        .def_readwrite("eta_scale", &SolverConfig::eta_scale)
        .def_readwrite("max_iters", &SolverConfig::max_iters)
        .def_readwrite("rel_tol", &SolverConfig::rel_tol)
        .def_readwrite("rank", &SolverConfig::rank)
        .def_readwrite("record_stride", &SolverConfig::record_stride);

    py::class_<TraceRecord>(m, "TraceRecord")
        .def_readonly("iter", &TraceRecord::iter)
        .def_readonly("objective", &TraceRecord::objective)
        .def_readonly("data_term", &TraceRecord::data_term)
        .def_readonly("tp_defect", &TraceRecord::tp_defect)
        .def_readonly("fidelity", &TraceRecord::fidelity)
        .def_readonly("step", &TraceRecord::step);

    py::class_<RunTrace>(m, "RunTrace")
        .def_readonly("records", &RunTrace::records)
        .def_readonly("iterations", &RunTrace::iterations)
        .def_readonly("converged", &RunTrace::converged)
        .def("first_iter_reaching", &RunTrace::first_iter_reaching, py::arg("threshold"));

    py::class_<RecoveryOutcome>(m, "RecoveryOutcome")
        .def_readonly("truth", &RecoveryOutcome::truth)
        .def_readonly("estimate", &RecoveryOutcome::estimate)
        .def_readonly("trace", &RecoveryOutcome::trace)
        .def_property_readonly("m", [](const RecoveryOutcome &o) { return o.plan.m(); })
        .def_property_readonly("fidelity", [](const RecoveryOutcome &o) {
            return process_fidelity(o.estimate, o.truth);
        });

    m.def(
        "recover",
        [](int n, const std::string &optimizer, const std::string &noise, double xi, std::size_t m_count, int rep,
           std::uint64_t seed, const SolverConfig &solver) {
            const Workspace ws = make_workspace(n, BasisKind::Pauli);
            RecoveryInput in;
            in.optimizer = parse_optimizer(optimizer);
            in.noise.kind = parse_noise_kind(noise);
            in.noise.xi = xi;
            in.m = m_count;
            in.rep = rep;
            in.master_seed = seed;
            in.solver = solver;
            py::gil_scoped_release release;
            return run_recovery(ws, in);
        },
        py::arg("n") = 2, py::arg("optimizer") = "fgd", py::arg("noise") = "none", py::arg("xi") = 0.0,
        py::arg("m") = 0, py::arg("rep") = 0, py::arg("seed") = 0, py::arg("solver") = SolverConfig{},
        "Simulate one tomography run on a random unitary target and recover it. m = 0 uses every setting.");

    m.def("cli", &cli, py::arg("args"), "Run the qpt command line in-process; returns (code, stdout, stderr).");
}
