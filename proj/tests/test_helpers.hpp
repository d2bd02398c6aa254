// Copyright 2026 The qkinema Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <catch_amalgamated.hpp>

#include "qkinema/qkinema.hpp"

namespace qkinema::test {

inline CVector ket0() { return basis_ket(2, 0); }
inline CVector ket1() { return basis_ket(2, 1); }
inline CVector ket_plus() { return (ket0() + ket1()) / std::sqrt(2.0); }
inline CVector ket_minus() { return (ket0() - ket1()) / std::sqrt(2.0); }

inline DensityOperator dm(const CVector &v) { return DensityOperator(outer(v)); }

inline DensityOperator diag2(double a, double b) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return DensityOperator(m);
}

/// {(½, |0⟩⟨0|), (½, |1⟩⟨1|)}
inline Ensemble ensemble_z() { return Ensemble({{0.5, dm(ket0())}, {0.5, dm(ket1())}}); }

/// {(½, |+⟩⟨+|), (½, |−⟩⟨−|)}
inline Ensemble ensemble_x() { return Ensemble({{0.5, dm(ket_plus())}, {0.5, dm(ket_minus())}}); }

inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    Rng rng(seed);
    return ginibre(rows, cols, rng);
}

} // namespace qkinema::test
