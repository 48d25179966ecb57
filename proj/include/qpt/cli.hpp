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

#include <iosfwd>

#include "qpt/optim.hpp"
#include "qpt/self_check.hpp"

namespace qpt {

enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitNumeric = 2,
    kExitUsage = 64,
};

struct CliHooks {
    /// Gradient of the TP penalty used by `check`.
    GradHFn grad_h = [](const CMatrix &chi, const OperatorBasis &basis) { return grad_H(chi, basis); };
};

/// Entry point of the `qpt` tool. Results go to `out` as JSON; diagnostics and usage text go
/// to `err`. Returns an ExitCode.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err, const CliHooks &hooks = {});

}  // namespace qpt
