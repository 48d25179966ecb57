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

"""Low-rank quantum process tomography."""

from qpt._core import (
    DimensionError,
    DomainError,
    NumericError,
    OperatorBasis,
    ProcessMatrix,
    RecoveryOutcome,
    RunTrace,
    SizeError,
    SolverConfig,
    TraceRecord,
    apply_chi,
    chi_from_unitary,
    cli,
    gell_mann_basis,
    input_states,
    pauli_basis,
    povm,
    povm_completeness_defect,
    process_fidelity,
    random_target_unitary,
    recover,
    tp_defect,
)

__all__ = [name for name in dir() if not name.startswith("_")]
