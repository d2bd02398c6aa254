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
 * State maps on S(H), Kraus channels, the ensemble lift, and a randomized
 * affinity certifier.
 *
 * certify_affine is a probabilistic search for a non-affine witness. A
 * `certified_affine` verdict means no witness was found in the trials run;
 * it is evidence, not a proof. `witness_found` is conclusive: the reported
 * pair of ensembles has one barycenter but the map sends them to different
 * mixtures.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qkinema/error.hpp"
#include "qkinema/kinematics.hpp"
#include "qkinema/operator_core.hpp"

namespace qkinema {

/**
 * Black-box map ρ ↦ Λ(ρ), possibly nonlinear.
 *
 * A dimension of 0 means "any": dim_in = 0 accepts every input dimension and
 * dim_out = 0 means the output dimension equals the input dimension.
 */
class StateMap {
  public:
    using Fn = std::function<CMatrix(const DensityOperator &)>;

    StateMap(std::string name, Fn fn, Eigen::Index dim_in = 0, Eigen::Index dim_out = 0)
        : name_(std::move(name)), fn_(std::move(fn)), dim_in_(dim_in), dim_out_(dim_out) {}

    [[nodiscard]] const std::string &name() const noexcept { return name_; }
    [[nodiscard]] Eigen::Index dim_in() const noexcept { return dim_in_; }
    [[nodiscard]] Eigen::Index dim_out() const noexcept { return dim_out_; }

    [[nodiscard]] bool accepts(Eigen::Index d) const noexcept { return dim_in_ == 0 || dim_in_ == d; }

    /// Applies the map and validates the result as a density operator.
    [[nodiscard]] DensityOperator apply(const DensityOperator &rho) const {
        if (!accepts(rho.dim())) {
            std::ostringstream os;
            os << "StateMap '" << name_ << "': expects dimension " << dim_in_ << ", got "
               << rho.dim();
            throw DimensionMismatch(os.str());
        }
        const CMatrix out = fn_(rho);
        const auto expected = dim_out_ == 0 ? rho.dim() : dim_out_;
        try {
            if (out.rows() != expected || out.cols() != expected) {
                throw DimensionMismatch("output shape " + shape_str(out));
            }
            return DensityOperator(out);
        } catch (const ValidationError &err) {
            const Eigen::IOFormat fmt(Eigen::FullPrecision, Eigen::DontAlignCols, ", ", "; ", "",
                                      "", "[", "]");
            std::ostringstream os;
            os << "StateMap '" << name_ << "' produced an invalid state (" << err.what()
               << ") for input " << rho.matrix().format(fmt);
            throw InvalidMapOutput(os.str());
        }
    }

    DensityOperator operator()(const DensityOperator &rho) const { return apply(rho); }

  private:
    std::string name_;
    Fn fn_;
    Eigen::Index dim_in_;
    Eigen::Index dim_out_;
};

/// Trace-preserving Kraus family {K_i}: Σ K_i† K_i = I within 1e-10.
class KrausChannel {
  public:
    explicit KrausChannel(std::vector<CMatrix> ops) : ops_(std::move(ops)) {
        if (ops_.empty()) {
            throw ValidationError("KrausChannel: no Kraus operators");
        }
        const auto rows = ops_.front().rows();
        const auto cols = ops_.front().cols();
        CMatrix sum = CMatrix::Zero(cols, cols);
        for (const auto &k : ops_) {
            if (k.rows() != rows || k.cols() != cols || rows == 0 || cols == 0) {
                throw DimensionMismatch("KrausChannel: operator shapes differ");
            }
            require_finite(k, "KrausChannel");
            sum += k.adjoint() * k;
        }
        const double defect = max_abs_diff(sum, identity(cols));
        if (defect > tol::equality) {
            std::ostringstream os;
            os << "KrausChannel: not trace preserving, ||sum K^dag K - I||_max = " << defect;
            throw ValidationError(os.str());
        }
    }

    [[nodiscard]] const std::vector<CMatrix> &operators() const noexcept { return ops_; }
    [[nodiscard]] Eigen::Index dim_in() const noexcept { return ops_.front().cols(); }
    [[nodiscard]] Eigen::Index dim_out() const noexcept { return ops_.front().rows(); }

  private:
    std::vector<CMatrix> ops_;
};

/// Σ K_i ρ K_i†
inline DensityOperator apply_kraus(const KrausChannel &c, const DensityOperator &rho) {
    if (rho.dim() != c.dim_in()) {
        throw DimensionMismatch("apply_kraus: channel/state dimension mismatch");
    }
    CMatrix out = CMatrix::Zero(c.dim_out(), c.dim_out());
    for (const auto &k : c.operators()) {
        out += k * rho.matrix() * k.adjoint();
    }
    return DensityOperator(out);
}

inline StateMap as_state_map(const KrausChannel &c, std::string name) {
    return StateMap(
        std::move(name), [c](const DensityOperator &rho) { return apply_kraus(c, rho).matrix(); },
        c.dim_in(), c.dim_out());
}

inline KrausChannel identity_channel(Eigen::Index d) { return KrausChannel({identity(d)}); }

/// {√(1−p) I, √p X} with X the cyclic shift (σx for d = 2).
inline KrausChannel bit_flip_channel(Eigen::Index d, double p = 1.0) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("bit_flip_channel: p must lie in [0, 1]");
    }
    if (p == 1.0) {
        return KrausChannel({shift_operator(d)});
    }
    return KrausChannel({std::sqrt(1.0 - p) * identity(d), std::sqrt(p) * shift_operator(d)});
}

/**
 * Depolarizing channel with error weight q: Kraus operators √(1−q) I and
 * √(q/(d²−1)) W for each non-identity Weyl operator W = XᵃZᵇ. For d = 2 the
 * Weyl operators are replaced by the Pauli matrices σx, σy, σz.
 */
inline KrausChannel depolarizing_channel(Eigen::Index d, double q) {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw ValidationError("depolarizing_channel: q must lie in [0, 1]");
    }
    if (d < 1) {
        throw ValidationError("depolarizing_channel: d must be >= 1");
    }
    std::vector<CMatrix> ops{std::sqrt(1.0 - q) * identity(d)};
    if (d == 1) {
        return KrausChannel({identity(1)});
    }
    const double w = std::sqrt(q / static_cast<double>(d * d - 1));
    if (d == 2) {
        for (const auto &s : {pauli_x(), pauli_y(), pauli_z()}) {
            ops.push_back(w * s);
        }
        return KrausChannel(std::move(ops));
    }
    const CMatrix x = shift_operator(d);
    const CMatrix z = clock_operator(d);
    CMatrix xa = identity(d);
    for (Eigen::Index a = 0; a < d; ++a) {
        CMatrix weyl = xa;
        for (Eigen::Index b = 0; b < d; ++b) {
            if (a != 0 || b != 0) {
                ops.push_back(w * weyl);
            }
            weyl = weyl * z;
        }
        xa = xa * x;
    }
    return KrausChannel(std::move(ops));
}

inline StateMap identity_map() {
    return StateMap("identity", [](const DensityOperator &rho) { return rho.matrix(); });
}

/// Λ(ρ) = ρ²/Tr ρ². Fixes pure states; not affine.
inline StateMap nonlinear_purification_map() {
    return StateMap("purify", [](const DensityOperator &rho) -> CMatrix {
        const CMatrix sq = rho.matrix() * rho.matrix();
        return sq / sq.trace().real();
    });
}

/// {(p_j, Λ(ρ_j))}. Weights are copied untouched.
inline Ensemble lift_to_ensemble(const StateMap &map, const Ensemble &e) {
    std::vector<EnsembleComponent> out;
    out.reserve(e.size());
    for (const auto &c : e) {
        out.push_back({c.weight, map.apply(c.state)});
    }
    return Ensemble(std::move(out));
}

/**
 * T(Σ p_j Λ(ρ_j), Σ q_i Λ(ξ_i)) for two ensembles with a common barycenter.
 * Zero for every affine map.
 */
inline double affine_deviation(const StateMap &map, const Ensemble &e1, const Ensemble &e2) {
    if (!equivalent_in_qm(e1, e2, 1e-9)) {
        throw ValidationError("affine_deviation: ensembles do not share a barycenter");
    }
    return trace_distance(barycenter(lift_to_ensemble(map, e1)),
                          barycenter(lift_to_ensemble(map, e2)));
}

enum class AffinityVerdict { certified_affine, witness_found };

inline const char *to_string(AffinityVerdict v) {
    return v == AffinityVerdict::certified_affine ? "certified_affine" : "witness_found";
}

struct AffinityWitness {
    Ensemble e1;
    Ensemble e2;
    double deviation;
};

/// Outcome of certify_affine. A witness is present iff the verdict is witness_found.
class AffinityReport {
  public:
    static AffinityReport certified(std::size_t trials) {
        return AffinityReport(AffinityVerdict::certified_affine, trials, std::nullopt);
    }
    static AffinityReport found(std::size_t trials, AffinityWitness witness) {
        return AffinityReport(AffinityVerdict::witness_found, trials, std::move(witness));
    }

    [[nodiscard]] AffinityVerdict verdict() const noexcept { return verdict_; }
    /// Trials executed; for witness_found this is the 1-based index of the failing trial.
    [[nodiscard]] std::size_t trials() const noexcept { return trials_; }
    [[nodiscard]] const std::optional<AffinityWitness> &witness() const noexcept {
        return witness_;
    }

  private:
    AffinityReport(AffinityVerdict v, std::size_t trials, std::optional<AffinityWitness> w)
        : verdict_(v), trials_(trials), witness_(std::move(w)) {}

    AffinityVerdict verdict_;
    std::size_t trials_;
    std::optional<AffinityWitness> witness_;
};

/**
 * Randomized search for two preparations of one state that the map sends to
 * different mixtures.
 *
 * Trial t draws e1 = random_ensemble(dim, n, derive_seed(seed, t)) with n in
 * {2, 3, 4}, sets ρ = barycenter(e1) and e2 = its spectral ensemble, and
 * compares Λ(ρ), Σ p_j Λ(ρ_j) over e1 and the same over e2 pairwise. The
 * first trial where some distance exceeds `threshold` is reported together
 * with the corresponding ensemble pair; the Dirac ensemble {(1, ρ)} stands in
 * for Λ(ρ).
 */
inline AffinityReport certify_affine(const StateMap &map, Eigen::Index dim, std::size_t trials,
                                     std::uint64_t seed, double threshold = 1e-8) {
    if (trials < 1) {
        throw ValidationError("certify_affine: trials must be >= 1");
    }
    if (!(threshold > 0.0)) {
        throw ValidationError("certify_affine: threshold must be > 0");
    }
    if (dim < 1 || !map.accepts(dim)) {
        throw DimensionMismatch("certify_affine: map does not accept the requested dimension");
    }
    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = derive_seed(seed, t);
        Rng pick(trial_seed);
        const auto n = static_cast<std::size_t>(std::uniform_int_distribution<int>(2, 4)(pick));
        Ensemble e1 = random_ensemble(dim, n, derive_seed(trial_seed, 1));
        const DensityOperator rho = barycenter(e1);
        Ensemble e2 = eigen_decomposition_ensemble(rho);
        Ensemble point = Ensemble::dirac(rho);

        const DensityOperator direct = map.apply(rho);
        const DensityOperator via1 = barycenter(lift_to_ensemble(map, e1));
        const DensityOperator via2 = barycenter(lift_to_ensemble(map, e2));

        const double d1 = trace_distance(direct, via1);
        const double d2 = trace_distance(direct, via2);
        const double d12 = trace_distance(via1, via2);
        const double worst = std::max({d1, d2, d12});
        if (worst > threshold) {
            if (worst == d1) {
                return AffinityReport::found(t + 1, {std::move(e1), std::move(point), d1});
            }
            if (worst == d2) {
                return AffinityReport::found(t + 1, {std::move(e2), std::move(point), d2});
            }
            return AffinityReport::found(t + 1, {std::move(e1), std::move(e2), d12});
        }
    }
    return AffinityReport::certified(trials);
}

} // namespace qkinema
