// Copyright 2026 The hea-lab Authors
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

#include "hea_lab/core.hpp"

#include <cmath>
#include <string>

namespace hea_lab {

inline constexpr Eigen::Index kMaxHaarDim = 4096;

/// Haar-distributed unitary of side `dim`.
///
/// QR of a complex Ginibre matrix, with the columns of Q rephased by
/// R_jj / |R_jj| so the result is exactly Haar rather than QR-biased.
inline CMatrix haar_unitary(Eigen::Index dim, Rng &rng) {
    if (dim < 1 || dim > kMaxHaarDim) {
        throw std::invalid_argument("haar_unitary: dimension " + std::to_string(dim) +
                                    " outside [1, " + std::to_string(kMaxHaarDim) + "]");
    }
    CMatrix ginibre(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            ginibre(i, j) = complex_gaussian(rng);
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(ginibre);
    CMatrix q = qr.householderQ();
    const CMatrix &r = qr.matrixQR();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double mag = std::abs(d);
        q.col(j) *= mag > 0.0 ? d / mag : Complex{1.0, 0.0};
    }
    return q;
}

inline CMatrix haar_unitary(Eigen::Index dim, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    return haar_unitary(dim, rng);
}

} // namespace hea_lab
