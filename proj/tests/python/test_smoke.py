# Copyright 2026 The qpt-fgd Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import glob
import json
import os

import numpy as np
import pandas as pd
import pytest

import qpt


def test_pauli_basis_is_orthogonal():
    basis = qpt.pauli_basis(2)
    assert basis.dim == 4 and len(basis) == 16
    gram = np.array([[np.trace(a.conj().T @ b) for b in basis.ops] for a in basis.ops])
    np.testing.assert_allclose(gram, 4 * np.eye(16), atol=1e-12)
    np.testing.assert_array_equal(basis.op(0), np.eye(4))


def test_povm_is_complete_and_positive():
    elements = qpt.povm(4)
    assert len(elements) == 8
    np.testing.assert_allclose(sum(elements), np.eye(4), atol=1e-10)
    assert min(np.linalg.eigvalsh(e).min() for e in elements) >= -1e-12
    assert qpt.povm_completeness_defect(4) <= 1e-10
    assert len(qpt.input_states(4)) == 16


def test_unitary_chi_reproduces_conjugation():
    basis = qpt.pauli_basis(2)
    u = qpt.random_target_unitary(4, 7)
    chi = qpt.chi_from_unitary(u, basis)
    rho = qpt.input_states(4)[5]
    np.testing.assert_allclose(qpt.apply_chi(chi, basis, rho), u @ rho @ u.conj().T, atol=1e-10)
    assert qpt.tp_defect(chi, basis) < 1e-20
    assert min(np.linalg.eigvalsh(chi.chi)) > -1e-12
    assert qpt.process_fidelity(chi, chi) == pytest.approx(1.0)


def test_process_json_round_trip():
    chi = qpt.chi_from_unitary(qpt.random_target_unitary(2, 3), qpt.pauli_basis(1))
    payload = json.loads(chi.to_json())
    assert set(payload) == {"d", "re", "im"}
    back = qpt.ProcessMatrix.from_json(chi.to_json())
    np.testing.assert_array_equal(back.chi, chi.chi)


@pytest.mark.parametrize("optimizer", ["gd", "fgd"])
def test_noiseless_recovery(optimizer):
    cfg = qpt.SolverConfig()
    cfg.max_iters = 6000
    out = qpt.recover(n=2, optimizer=optimizer, m=128, seed=11, solver=cfg)
    assert out.m == 128
    assert out.fidelity >= 0.99
    assert out.trace.records[-1].iter == out.trace.iterations


def test_bad_arguments_raise():
    with pytest.raises(ValueError):
        qpt.recover(n=2, m=1000)
    with pytest.raises(ValueError):
        qpt.SolverConfig().step_mode = "sideways"


def test_cli_outputs_feed_plotting(tmp_path):
    code, out, _ = qpt.cli([
        "sweep-noise", "--n", "1", "--noise", "depolarizing", "--xi", "0.05", "--xi", "0.1",
        "--measurements", "8", "--runs", "2", "--max-iters", "200", "--out-dir", str(tmp_path),
    ])
    assert code == 0, out
    assert json.loads(out)["failed_runs"] == 0

    summary = pd.read_csv(tmp_path / "summary.csv")
    assert {"C", "m", "mean_fidelity", "std_fidelity"} <= set(summary.columns)
    assert len(summary) == 4

    traces = pd.concat(pd.read_csv(p) for p in glob.glob(os.path.join(tmp_path, "trace_*.csv")))
    groups = traces.groupby(["optimizer", "m", "xi"])
    assert groups.ngroups == 4
    assert groups["rep"].nunique().eq(2).all()


def test_cli_usage_error():
    code, _, err = qpt.cli(["recover", "--n", "9"])
    assert code == 64 and err
