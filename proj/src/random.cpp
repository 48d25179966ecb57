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

#include "qpt/random.hpp"

#include <cmath>

#include <Eigen/QR>

namespace qpt {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t label_hash(std::string_view label) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = mix64(master);
    for (std::uint64_t p : parts) {
        h = mix64(h ^ mix64(p + 0x632BE59BD9B4E019ULL));
    }
    return h;
}

CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = 1.0 / std::sqrt(2.0);
    CMatrix g(rows, cols);
    // Fill in column-major order so the draw sequence is fixed by the shape alone.
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re * scale, im * scale);
        }
    }
    return g;
}

CMatrix haar_unitary(Eigen::Index dim, Rng &rng) {
    const CMatrix z = complex_gaussian(dim, dim, rng);
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
    const CMatrix &r = qr.matrixQR();
    for (Eigen::Index k = 0; k < dim; ++k) {
        const Complex rkk = r(k, k);
        const double mag = std::abs(rkk);
        const Complex phase = mag > 0.0 ? rkk / mag : Complex(1.0, 0.0);
        q.col(k) *= phase;
    }
    return q;
}

}  // namespace qpt
