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
 * Finite-outcome POVMs with the trace rule, event probabilities over subsets
 * of outcome labels, and ensemble functionals (observables on K(H) that may
 * see more than the barycenter).
 */

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qkinema/error.hpp"
#include "qkinema/kinematics.hpp"
#include "qkinema/operator_core.hpp"

namespace qkinema {

struct PovmEffect {
    double label; // outcome value λ_k
    HermitianMatrix op;
};

/**
 * Finite family of positive effects F_k summing to the identity, each tagged
 * with a distinct real outcome value.
 */
class Povm {
  public:
    explicit Povm(std::vector<PovmEffect> effects, std::string name = {})
        : effects_(std::move(effects)), name_(std::move(name)) {
        if (effects_.empty()) {
            throw ValidationError("Povm: no effects");
        }
        const auto d = effects_.front().op.dim();
        CMatrix sum = CMatrix::Zero(d, d);
        for (std::size_t k = 0; k < effects_.size(); ++k) {
            const auto &e = effects_[k];
            if (e.op.dim() != d) {
                throw DimensionMismatch("Povm: effect dimensions differ");
            }
            if (!std::isfinite(e.label)) {
                throw ValidationError("Povm: non-finite outcome label");
            }
            for (std::size_t j = 0; j < k; ++j) {
                if (effects_[j].label == e.label) {
                    throw ValidationError("Povm: duplicate outcome label");
                }
            }
            if (!is_positive(e.op)) {
                std::ostringstream os;
                os << "Povm: effect " << k << " is not positive";
                throw ValidationError(os.str());
            }
            sum += e.op.matrix();
        }
        const double defect = max_abs_diff(sum, identity(d));
        if (defect > tol::equality) {
            std::ostringstream os;
            os << "Povm: effects sum to identity only within " << defect;
            throw ValidationError(os.str());
        }
    }

    [[nodiscard]] const std::vector<PovmEffect> &effects() const noexcept { return effects_; }
    [[nodiscard]] std::size_t size() const noexcept { return effects_.size(); }
    [[nodiscard]] Eigen::Index dim() const noexcept { return effects_.front().op.dim(); }
    [[nodiscard]] const std::string &name() const noexcept { return name_; }
    [[nodiscard]] const CMatrix &effect(std::size_t k) const { return effects_.at(k).op.matrix(); }

  private:
    std::vector<PovmEffect> effects_;
    std::string name_;
};

/// Effects given as matrices, labelled 0, 1, 2, ...
inline Povm make_povm(const std::vector<CMatrix> &ops, std::string name = {}) {
    std::vector<PovmEffect> effects;
    effects.reserve(ops.size());
    for (std::size_t k = 0; k < ops.size(); ++k) {
        effects.push_back({static_cast<double>(k), HermitianMatrix(ops[k])});
    }
    return Povm(std::move(effects), std::move(name));
}

/// Rank-one projectors onto the columns of a unitary.
inline Povm basis_measurement(const CMatrix &unitary, std::string name = {}) {
    std::vector<CMatrix> ops;
    for (Eigen::Index j = 0; j < unitary.cols(); ++j) {
        ops.push_back(outer(unitary.col(j)));
    }
    return make_povm(ops, std::move(name));
}

inline Povm computational_basis_measurement(Eigen::Index d) {
    return basis_measurement(identity(d), "Z");
}

/// Qubit measurement in {|+⟩, |−⟩}.
inline Povm x_basis_measurement() {
    CMatrix h(2, 2);
    h << 1.0, 1.0, 1.0, -1.0;
    return basis_measurement(h / std::sqrt(2.0), "X");
}

/**
 * Random projective measurement with `n_outcomes` projectors: the columns of
 * a Haar unitary are dealt into blocks of near-equal rank.
 */
inline Povm random_projective_measurement(Eigen::Index dim, std::size_t n_outcomes,
                                          std::uint64_t seed) {
    if (n_outcomes < 1 || static_cast<Eigen::Index>(n_outcomes) > dim) {
        throw ValidationError("random_projective_measurement: need 1 <= n_outcomes <= dim");
    }
    Rng rng(seed);
    const CMatrix u = random_unitary(dim, rng);
    std::vector<CMatrix> ops(n_outcomes, CMatrix::Zero(dim, dim));
    for (Eigen::Index j = 0; j < dim; ++j) {
        ops[static_cast<std::size_t>(j) % n_outcomes] += outer(u.col(j));
    }
    return make_povm(ops, "random-projective");
}

namespace detail {
inline void require_same_dim(const Povm &m, const DensityOperator &rho, const char *what) {
    if (m.dim() != rho.dim()) {
        std::ostringstream os;
        os << what << ": POVM dimension " << m.dim() << " vs state dimension " << rho.dim();
        throw DimensionMismatch(os.str());
    }
}
} // namespace detail

/// Trace rule p_k = Re Tr(ρ F_k).
inline std::vector<double> outcome_probabilities(const Povm &m, const DensityOperator &rho) {
    detail::require_same_dim(m, rho, "outcome_probabilities");
    constexpr double slack = 1e-10;
    std::vector<double> probs;
    probs.reserve(m.size());
    double total = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        double p = (rho.matrix() * m.effect(k)).trace().real();
        if (p < -slack || p > 1.0 + slack) {
            std::ostringstream os;
            os << "outcome_probabilities: p_" << k << " = " << p << " outside [0, 1]";
            throw ConsistencyError(os.str());
        }
        p = std::clamp(p, 0.0, 1.0);
        probs.push_back(p);
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "outcome_probabilities: probabilities sum to " << total;
        throw ConsistencyError(os.str());
    }
    return probs;
}

/// P(A, ρ) for a finite set of outcome labels A. Repeated labels count once.
inline double event_probability(const Povm &m, const DensityOperator &rho,
                                std::span<const double> event) {
    std::vector<bool> in_event(m.size(), false);
    for (double label : event) {
        bool found = false;
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (m.effects()[k].label == label) {
                in_event[k] = true;
                found = true;
                break;
            }
        }
        if (!found) {
            std::ostringstream os;
            os << "event_probability: unknown outcome label " << label;
            throw ValidationError(os.str());
        }
    }
    const auto probs = outcome_probabilities(m, rho);
    double p = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (in_event[k]) {
            p += probs[k];
        }
    }
    return std::min(p, 1.0);
}

/// Every effect idempotent and distinct effects mutually orthogonal, within 1e-9.
inline bool is_projective(const Povm &m) {
    constexpr double tolerance = 1e-9;
    const auto d = m.dim();
    for (std::size_t i = 0; i < m.size(); ++i) {
        const CMatrix &fi = m.effect(i);
        if (max_abs_diff(fi * fi, fi) > tolerance) {
            return false;
        }
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            if (max_abs_diff(fi * m.effect(j), CMatrix::Zero(d, d)) > tolerance) {
                return false;
            }
        }
    }
    return true;
}

/**
 * Real-valued observable on ensembles. `nonlinear` marks functionals that are
 * not a function of the barycenter alone; they remain affine on K(H).
 *
 * `evaluate` must be safe to call concurrently.
 */
struct EnsembleFunctional {
    std::string name;
    bool nonlinear = false;
    std::function<double(const Ensemble &)> evaluate;

    double operator()(const Ensemble &e) const { return evaluate(e); }
};

/// f(π) = Σ_j p_j ⟨φ|ρ_j|φ⟩².
inline EnsembleFunctional basis_overlap_functional(const PureState &phi) {
    CVector v = phi.amplitudes();
    return {"basis_overlap", true, [v](const Ensemble &e) {
                if (e.dim() != v.size()) {
                    throw DimensionMismatch("basis_overlap_functional: dimension mismatch");
                }
                double acc = 0.0;
                for (const auto &c : e) {
                    const double overlap = v.dot(c.state.matrix() * v).real();
                    acc += c.weight * overlap * overlap;
                }
                return acc;
            }};
}

} // namespace qkinema
