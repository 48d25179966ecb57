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

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

#include "qpt/types.hpp"

namespace qpt {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a hash of a label, used to key seed derivations by name.
std::uint64_t label_hash(std::string_view label);

/// Stable 64-bit derivation of a child seed from a master seed and an ordered list of
/// components. Independent of platform and of how many other seeds are derived.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> parts);

/// Entries (x + iy)/√2 with x, y i.i.d. standard normal.
CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng &rng);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of R's
/// diagonal moved into Q.
CMatrix haar_unitary(Eigen::Index dim, Rng &rng);

}  // namespace qpt
