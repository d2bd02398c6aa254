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

/**
 * @file
 * Dense complex matrices at small dimension: Hermiticity and positivity
 * tests, Kronecker products, partial traces and basic distances.
 *
 * Storage is Eigen's dense row-major complex matrix. Every function here is
 * pure; nothing holds mutable state.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "qkinema/error.hpp"

namespace qkinema {

using Complex = std::complex<double>;
using CMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RVector = Eigen::VectorXd;

/// Global comparison conventions. Callers may override per call.
namespace tol {
inline constexpr double hermitian = 1e-10;
inline constexpr double positivity = 1e-9;
inline constexpr double equality = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double probability_sum = 1e-10;
} // namespace tol

inline std::string shape_str(const CMatrix &m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

template <typename Derived> bool is_finite(const Eigen::MatrixBase<Derived> &m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const Complex z = m(i, j);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                return false;
            }
        }
    }
    return true;
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived> &m, const char *what) {
    if (!is_finite(m)) {
        throw ValidationError(std::string(what) + ": matrix has non-finite entries");
    }
}

inline void require_square(const CMatrix &m, const char *what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw DimensionMismatch(std::string(what) + ": expected a non-empty square matrix, got " +
                                shape_str(m));
    }
}

/// max_{ij} |a_ij - b_ij|. Shapes must agree.
inline double max_abs_diff(const CMatrix &a, const CMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("max_abs_diff: shapes " + shape_str(a) + " and " + shape_str(b));
    }
    if (a.size() == 0) {
        return 0.0;
    }
    return (a - b).cwiseAbs().maxCoeff();
}

inline bool approx_equal(const CMatrix &a, const CMatrix &b, double tolerance = tol::equality) {
    return a.rows() == b.rows() && a.cols() == b.cols() && max_abs_diff(a, b) <= tolerance;
}

/// ‖A − A†‖_max
inline double hermiticity_defect(const CMatrix &m) {
    return max_abs_diff(m, m.adjoint());
}

/**
 * A square complex matrix equal to its adjoint within a tolerance.
 *
 * The stored matrix is kept exactly as given; `symmetrized()` returns
 * (A + A†)/2, which is what eigensolves operate on.
 */
class HermitianMatrix {
  public:
    explicit HermitianMatrix(CMatrix m, double herm_tol = tol::hermitian) : m_(std::move(m)) {
        require_square(m_, "HermitianMatrix");
        require_finite(m_, "HermitianMatrix");
        const double defect = hermiticity_defect(m_);
        if (defect > herm_tol) {
            std::ostringstream os;
            os << "HermitianMatrix: ||A - A^dag||_max = " << defect << " exceeds " << herm_tol;
            throw ValidationError(os.str());
        }
    }

    [[nodiscard]] const CMatrix &matrix() const noexcept { return m_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return m_.rows(); }
    [[nodiscard]] CMatrix symmetrized() const { return (m_ + m_.adjoint()) * 0.5; }

  private:
    CMatrix m_;
};

/// Eigen-decomposition of the symmetrized matrix, eigenvalues ascending.
struct HermitianSpectrum {
    RVector eigenvalues;
    CMatrix eigenvectors; // columns
};

inline HermitianSpectrum hermitian_eigensystem(const HermitianMatrix &h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.symmetrized());
    if (solver.info() != Eigen::Success) {
        throw NumericalError("hermitian eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RVector hermitian_eigenvalues(const HermitianMatrix &h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.symmetrized(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("hermitian eigensolver did not converge");
    }
    return solver.eigenvalues();
}

/// True iff the smallest eigenvalue is ≥ −tolerance.
inline bool is_positive(const HermitianMatrix &h, double tolerance = tol::positivity) {
    return hermitian_eigenvalues(h).minCoeff() >= -tolerance;
}

/// Kronecker product a ⊗ b.
inline CMatrix tensor(const CMatrix &a, const CMatrix &b) {
    require_finite(a, "tensor");
    require_finite(b, "tensor");
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// |a⟩ ⊗ |b⟩
inline CVector tensor_ket(const CVector &a, const CVector &b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

enum class Subsystem { A, B };

/// Factor dimensions of H_A ⊗ H_B. Basis index of |a⟩⊗|b⟩ is a·dB + b.
struct BipartiteDims {
    Eigen::Index dA = 0;
    Eigen::Index dB = 0;

    [[nodiscard]] Eigen::Index total() const noexcept { return dA * dB; }
    friend bool operator==(const BipartiteDims &, const BipartiteDims &) = default;
};

/// Trace out the subsystem not named by `keep`.
inline CMatrix partial_trace(const CMatrix &m, BipartiteDims dims, Subsystem keep) {
    if (dims.dA < 1 || dims.dB < 1 || m.rows() != dims.total() || m.cols() != dims.total()) {
        std::ostringstream os;
        os << "partial_trace: matrix " << shape_str(m) << " incompatible with dims (" << dims.dA
           << ", " << dims.dB << ")";
        throw DimensionMismatch(os.str());
    }
    const auto dA = dims.dA;
    const auto dB = dims.dB;
    if (keep == Subsystem::A) {
        CMatrix out = CMatrix::Zero(dA, dA);
        for (Eigen::Index i = 0; i < dA; ++i) {
            for (Eigen::Index j = 0; j < dA; ++j) {
                Complex acc{0.0, 0.0};
                for (Eigen::Index b = 0; b < dB; ++b) {
                    acc += m(i * dB + b, j * dB + b);
                }
                out(i, j) = acc;
            }
        }
        return out;
    }
    CMatrix out = CMatrix::Zero(dB, dB);
    for (Eigen::Index i = 0; i < dB; ++i) {
        for (Eigen::Index j = 0; j < dB; ++j) {
            Complex acc{0.0, 0.0};
            for (Eigen::Index a = 0; a < dA; ++a) {
                acc += m(a * dB + i, a * dB + j);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

/// ½‖a − b‖₁ for Hermitian a, b, i.e. half the sum of |eigenvalues(a − b)|.
inline double trace_norm_distance(const CMatrix &a, const CMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("trace distance: shapes " + shape_str(a) + " and " + shape_str(b));
    }
    const HermitianMatrix diff(a - b, 1e-8);
    return 0.5 * hermitian_eigenvalues(diff).cwiseAbs().sum();
}

// Standard operators and kets.

inline CMatrix identity(Eigen::Index d) { return CMatrix::Identity(d, d); }

inline CMatrix pauli_x() {
    CMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

inline CMatrix pauli_y() {
    CMatrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

inline CMatrix pauli_z() {
    CMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

/// Cyclic shift X|j⟩ = |j+1 mod d⟩.
inline CMatrix shift_operator(Eigen::Index d) {
    CMatrix m = CMatrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        m((j + 1) % d, j) = 1.0;
    }
    return m;
}

/// Clock Z|j⟩ = ω^j |j⟩, ω = exp(2πi/d).
inline CMatrix clock_operator(Eigen::Index d) {
    CMatrix m = CMatrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        m(j, j) = std::polar(1.0, 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(d));
    }
    return m;
}

/// Computational basis vector |i⟩ in dimension d.
inline CVector basis_ket(Eigen::Index d, Eigen::Index i) {
    if (i < 0 || i >= d) {
        throw DimensionMismatch("basis_ket: index out of range");
    }
    CVector v = CVector::Zero(d);
    v(i) = 1.0;
    return v;
}

/// |v⟩⟨v|
inline CMatrix outer(const CVector &v) { return v * v.adjoint(); }

} // namespace qkinema
