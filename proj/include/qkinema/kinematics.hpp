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
 * State spaces: density operators S(H), pure states, and finite ensembles
 * (genuine mixtures) K(H) with their convex structure. Also the seeded
 * random generators that drive the randomized checks.
 *
 * An Ensemble is a preparation, not a state: two ensembles with the same
 * barycenter are different values and are never merged or reordered.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "qkinema/error.hpp"
#include "qkinema/operator_core.hpp"

namespace qkinema {

/// Positive, unit-trace Hermitian matrix.
class DensityOperator {
  public:
    explicit DensityOperator(CMatrix m) : h_(std::move(m)) {
        const Complex tr = h_.matrix().trace();
        if (std::abs(tr.real() - 1.0) > tol::trace || std::abs(tr.imag()) > tol::trace) {
            std::ostringstream os;
            os << "DensityOperator: trace " << tr.real() << (tr.imag() < 0 ? "" : "+") << tr.imag()
               << "i is not 1";
            throw ValidationError(os.str());
        }
        const double lo = hermitian_eigenvalues(h_).minCoeff();
        if (lo < -tol::positivity) {
            std::ostringstream os;
            os << "DensityOperator: not positive, min eigenvalue " << lo;
            throw ValidationError(os.str());
        }
    }

    /// Hermitize and rescale a positive, non-zero matrix to unit trace.
    static DensityOperator normalized(const CMatrix &m) {
        require_square(m, "DensityOperator::normalized");
        require_finite(m, "DensityOperator::normalized");
        CMatrix h = (m + m.adjoint()) * 0.5;
        const double tr = h.trace().real();
        if (!(tr > 0.0)) {
            throw ValidationError("DensityOperator::normalized: trace is not positive");
        }
        return DensityOperator(h / tr);
    }

    [[nodiscard]] const CMatrix &matrix() const noexcept { return h_.matrix(); }
    [[nodiscard]] const HermitianMatrix &hermitian() const noexcept { return h_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return h_.dim(); }

    /// Tr ρ²
    [[nodiscard]] double purity() const { return (matrix() * matrix()).trace().real(); }

  private:
    HermitianMatrix h_;
};

inline double trace_distance(const DensityOperator &a, const DensityOperator &b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("trace_distance: dimensions differ");
    }
    return std::clamp(trace_norm_distance(a.matrix(), b.matrix()), 0.0, 1.0);
}

/// Unit vector |ψ⟩.
class PureState {
  public:
    explicit PureState(CVector amplitudes) : psi_(std::move(amplitudes)) {
        if (psi_.size() == 0) {
            throw DimensionMismatch("PureState: empty vector");
        }
        require_finite(psi_, "PureState");
        if (std::abs(psi_.squaredNorm() - 1.0) > tol::equality) {
            std::ostringstream os;
            os << "PureState: <psi|psi> = " << psi_.squaredNorm() << " is not 1";
            throw ValidationError(os.str());
        }
    }

    static PureState normalized(const CVector &v) {
        const double n = v.norm();
        if (!(n > 0.0) || !std::isfinite(n)) {
            throw ValidationError("PureState::normalized: zero or non-finite vector");
        }
        return PureState(v / n);
    }

    [[nodiscard]] const CVector &amplitudes() const noexcept { return psi_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return psi_.size(); }
    [[nodiscard]] DensityOperator projector() const { return DensityOperator(outer(psi_)); }

  private:
    CVector psi_;
};

/// Singlet (|01⟩ − |10⟩)/√2 on two qubits.
inline PureState singlet() {
    CVector v = CVector::Zero(4);
    v(1) = 1.0 / std::sqrt(2.0);
    v(2) = -1.0 / std::sqrt(2.0);
    return PureState(v);
}

inline DensityOperator basis_state(Eigen::Index d, Eigen::Index i) {
    return DensityOperator(outer(basis_ket(d, i)));
}

inline DensityOperator maximally_mixed(Eigen::Index d) {
    return DensityOperator(identity(d) / static_cast<double>(d));
}

struct EnsembleComponent {
    double weight;
    DensityOperator state;
};

/**
 * Finite probability measure on S(H): {(p_j, ρ_j)}.
 *
 * Weights are non-negative and sum to one within 1e-10; zero weights are
 * allowed and kept. All states share one dimension.
 */
class Ensemble {
  public:
    explicit Ensemble(std::vector<EnsembleComponent> components)
        : components_(std::move(components)) {
        if (components_.empty()) {
            throw ValidationError("Ensemble: no components");
        }
        const auto d = components_.front().state.dim();
        double total = 0.0;
        for (const auto &c : components_) {
            if (c.state.dim() != d) {
                throw DimensionMismatch("Ensemble: component dimensions differ");
            }
            if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
                throw ValidationError("Ensemble: negative or non-finite weight");
            }
            total += c.weight;
        }
        if (std::abs(total - 1.0) > tol::probability_sum) {
            std::ostringstream os;
            os << "Ensemble: weights sum to " << total;
            throw ValidationError(os.str());
        }
    }

    /// {(1, ρ)}
    static Ensemble dirac(DensityOperator rho) { return Ensemble({{1.0, std::move(rho)}}); }

    [[nodiscard]] const std::vector<EnsembleComponent> &components() const noexcept {
        return components_;
    }
    [[nodiscard]] std::size_t size() const noexcept { return components_.size(); }
    [[nodiscard]] Eigen::Index dim() const noexcept { return components_.front().state.dim(); }

    [[nodiscard]] auto begin() const noexcept { return components_.begin(); }
    [[nodiscard]] auto end() const noexcept { return components_.end(); }

  private:
    std::vector<EnsembleComponent> components_;
};

/// Same length, identical weights, component states equal within `tolerance`.
inline bool structurally_equal(const Ensemble &a, const Ensemble &b,
                               double tolerance = tol::equality, double weight_tol = 0.0) {
    if (a.size() != b.size() || a.dim() != b.dim()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto &ca = a.components()[i];
        const auto &cb = b.components()[i];
        if (std::abs(ca.weight - cb.weight) > weight_tol ||
            max_abs_diff(ca.state.matrix(), cb.state.matrix()) > tolerance) {
            return false;
        }
    }
    return true;
}

enum class MixtureKind { elementary, genuine };

/// Whether an ensemble is read as a single point of S(H) or as a preparation.
class EnsembleLabel {
  public:
    EnsembleLabel(MixtureKind kind, const Ensemble &e) : kind_(kind) {
        if (kind == MixtureKind::elementary &&
            !(e.size() == 1 && e.components().front().weight == 1.0)) {
            throw ValidationError(
                "EnsembleLabel: elementary requires exactly one component of weight 1");
        }
    }

    /// elementary when the ensemble is a single Dirac component, genuine otherwise.
    static EnsembleLabel of(const Ensemble &e) {
        const bool dirac = e.size() == 1 && e.components().front().weight == 1.0;
        return {dirac ? MixtureKind::elementary : MixtureKind::genuine, e};
    }

    [[nodiscard]] MixtureKind kind() const noexcept { return kind_; }

  private:
    MixtureKind kind_;
};

/// Σ_j p_j ρ_j
inline DensityOperator barycenter(const Ensemble &e) {
    CMatrix acc = CMatrix::Zero(e.dim(), e.dim());
    for (const auto &c : e) {
        acc += c.weight * c.state.matrix();
    }
    return DensityOperator(acc);
}

/// Concatenate ensembles with weights q_i · p_ij. Order is preserved.
inline Ensemble mix_ensembles(const std::vector<std::pair<double, Ensemble>> &parts) {
    if (parts.empty()) {
        throw ValidationError("mix_ensembles: nothing to mix");
    }
    double total = 0.0;
    for (const auto &[q, e] : parts) {
        if (!(q >= 0.0) || !std::isfinite(q)) {
            throw ValidationError("mix_ensembles: negative or non-finite mixing weight");
        }
        if (e.dim() != parts.front().second.dim()) {
            throw DimensionMismatch("mix_ensembles: ensemble dimensions differ");
        }
        total += q;
    }
    if (std::abs(total - 1.0) > tol::probability_sum) {
        std::ostringstream os;
        os << "mix_ensembles: mixing weights sum to " << total;
        throw ValidationError(os.str());
    }
    std::vector<EnsembleComponent> out;
    for (const auto &[q, e] : parts) {
        for (const auto &c : e) {
            out.push_back({q * c.weight, c.state});
        }
    }
    return Ensemble(std::move(out));
}

/// Same barycenter within `tolerance` in trace distance.
inline bool equivalent_in_qm(const Ensemble &a, const Ensemble &b, double tolerance = 1e-9) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("equivalent_in_qm: dimensions differ");
    }
    return trace_distance(barycenter(a), barycenter(b)) <= tolerance;
}

/// Spectral ensemble {(λ_i, |v_i⟩⟨v_i|)}, eigenvalues descending, λ < 1e-12 dropped.
inline Ensemble eigen_decomposition_ensemble(const DensityOperator &rho) {
    const auto spectrum = hermitian_eigensystem(rho.hermitian());
    const auto d = rho.dim();
    double kept = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        if (spectrum.eigenvalues(i) >= 1e-12) {
            kept += spectrum.eigenvalues(i);
        }
    }
    std::vector<EnsembleComponent> out;
    for (Eigen::Index i = d - 1; i >= 0; --i) {
        const double lambda = spectrum.eigenvalues(i);
        if (lambda < 1e-12) {
            continue;
        }
        const CVector v = spectrum.eigenvectors.col(i).normalized();
        out.push_back({lambda / kept, DensityOperator::normalized(outer(v))});
    }
    return Ensemble(std::move(out));
}

// Seeded randomness. Every generator takes an explicit seed and owns its engine.

/// splitmix64 finalizer; derives independent per-trial seeds from (seed, index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

/// Matrix of i.i.d. standard complex Gaussians (real and imaginary parts N(0, 1/2)).
inline CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng &rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    CMatrix g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    }
    return g;
}

/// Flat Dirichlet weights via normalized Exp(1) draws.
inline std::vector<double> random_simplex_point(std::size_t n, Rng &rng) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(n);
    double total = 0.0;
    do {
        total = 0.0;
        for (auto &x : w) {
            x = expo(rng);
            total += x;
        }
    } while (!(total > 0.0));
    for (auto &x : w) {
        x /= total;
    }
    return w;
}

/// GG†/Tr(GG†) with G Ginibre.
inline DensityOperator random_density(Eigen::Index dim, Rng &rng) {
    if (dim < 1) {
        throw ValidationError("random_density: dim must be >= 1");
    }
    const CMatrix g = ginibre(dim, dim, rng);
    return DensityOperator::normalized(g * g.adjoint());
}

inline DensityOperator random_density(Eigen::Index dim, std::uint64_t seed) {
    Rng rng(seed);
    return random_density(dim, rng);
}

inline Ensemble random_ensemble(Eigen::Index dim, std::size_t n_components, std::uint64_t seed) {
    if (n_components < 1) {
        throw ValidationError("random_ensemble: n_components must be >= 1");
    }
    Rng rng(seed);
    const auto weights = random_simplex_point(n_components, rng);
    std::vector<EnsembleComponent> out;
    out.reserve(n_components);
    for (double w : weights) {
        out.push_back({w, random_density(dim, rng)});
    }
    return Ensemble(std::move(out));
}

inline PureState random_pure(Eigen::Index dim, Rng &rng) {
    if (dim < 1) {
        throw ValidationError("random_pure: dim must be >= 1");
    }
    const CMatrix g = ginibre(dim, 1, rng);
    return PureState::normalized(g.col(0));
}

inline PureState random_bipartite_pure(Eigen::Index dA, Eigen::Index dB, std::uint64_t seed) {
    Rng rng(seed);
    return random_pure(dA * dB, rng);
}

/// Haar unitary from the QR decomposition of a Ginibre matrix, phases fixed.
inline CMatrix random_unitary(Eigen::Index dim, Rng &rng) {
    const CMatrix g = ginibre(dim, dim, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const double a = std::abs(r(j, j));
        if (a > 0.0) {
            q.col(j) *= r(j, j) / a;
        }
    }
    return q;
}

} // namespace qkinema
