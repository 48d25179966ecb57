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

#include <filesystem>

#include "json.hpp"
#include "qpt/process_model.hpp"
#include "qpt/types.hpp"

namespace qpt {

/// {"d": rows, "re": [[...]], "im": [[...]]}, row-major.
nlohmann::json matrix_to_json(const CMatrix &m);

/// Inverse of matrix_to_json. Throws DimensionError on ragged or mismatched arrays and
/// on a "d" field that disagrees with the row count.
CMatrix matrix_from_json(const nlohmann::json &j);

/// {"d": d, "re": ..., "im": ...} where "d" is the Hilbert-space dimension and the arrays
/// hold the d² × d² matrix χ.
nlohmann::json process_to_json(const ProcessMatrix &p);
ProcessMatrix process_from_json(const nlohmann::json &j);

void write_json_file(const std::filesystem::path &path, const nlohmann::json &j);
nlohmann::json read_json_file(const std::filesystem::path &path);

}  // namespace qpt
