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
 * Projection postulate for projective measurements, post-measurement
 * ensembles, remote steering of one half of a bipartite state, the
 * no-signaling check, and the signaling protocol available to an observer
 * who can evaluate a nonlinear ensemble functional.
 *
 * Bipartite conventions: H_A ⊗ H_B, basis index a·dB + b, local measurements
 * act on B and the steered ensemble lives on A. Measurement on B completes
 * before anything is evaluated on A; there is no spacetime model.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qkinema/error.hpp"
#include "qkinema/kinematics.hpp"
#include "qkinema/measurement.hpp"
#include "qkinema/operator_core.hpp"

namespace qkinema {

inline constexpr double default_prob_floor = 1e-12;

struct MeasurementRecord {
    std::size_t outcome_index;
    double probability; // in (0, 1]
    DensityOperator post_state;
};

/**
 * ρ_k = F_k ρ F_k / Tr(ρ F_k).
 *
 * Only projective measurements are accepted, and the branch probability must
 * exceed `prob_floor`.
 */
inline MeasurementRecord project(const Povm &m, const DensityOperator &rho, std::size_t k,
                                 double prob_floor = default_prob_floor) {
    if (!is_projective(m)) {
        throw ValidationError("project: the projection postulate needs a projective measurement");
    }
    if (k >= m.size()) {
        throw ValidationError("project: outcome index out of range");
    }
    const double p = outcome_probabilities(m, rho)[k];
    if (p <= prob_floor) {
        std::ostringstream os;
        os << "project: outcome " << k << " has probability " << p << " (floor " << prob_floor
           << ")";
        throw ZeroProbabilityBranch(os.str());
    }
    const CMatrix &f = m.effect(k);
    return {k, p, DensityOperator::normalized(f * rho.matrix() * f)};
}

/// {(p_k, ρ_k)} over outcomes with p_k > prob_floor.
inline Ensemble post_measurement_ensemble(const Povm &m, const DensityOperator &rho,
                                          double prob_floor = default_prob_floor) {
    if (!is_projective(m)) {
        throw ValidationError("post_measurement_ensemble: measurement is not projective");
    }
    const auto probs = outcome_probabilities(m, rho);
    double kept = 0.0;
    for (double p : probs) {
        if (p > prob_floor) {
            kept += p;
        }
    }
    std::vector<EnsembleComponent> out;
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (probs[k] > prob_floor) {
            auto rec = project(m, rho, k, prob_floor);
            out.push_back({probs[k] / kept, std::move(rec.post_state)});
        }
    }
    return Ensemble(std::move(out));
}

/// F_k = 𝟙_A ⊗ P_k. Labels and name are carried over.
inline Povm local_measurement_on_B(const Povm &on_b, Eigen::Index dA) {
    if (dA < 1) {
        throw ValidationError("local_measurement_on_B: dA must be >= 1");
    }
    if (!is_projective(on_b)) {
        throw ValidationError("local_measurement_on_B: measurement is not projective");
    }
    std::vector<PovmEffect> effects;
    effects.reserve(on_b.size());
    for (const auto &e : on_b.effects()) {
        effects.push_back({e.label, HermitianMatrix(tensor(identity(dA), e.op.matrix()))});
    }
    return Povm(std::move(effects), on_b.name());
}

struct SteeredEnsemble {
    Ensemble ensemble; // on A
    std::string measurement_name;
};

/// Measure B with `on_b`; return {(p_k, Tr_B ρ_k)} on A.
inline SteeredEnsemble steer(const DensityOperator &rho_ab, BipartiteDims dims, const Povm &on_b,
                             double prob_floor = default_prob_floor) {
    if (rho_ab.dim() != dims.total() || on_b.dim() != dims.dB) {
        std::ostringstream os;
        os << "steer: state dimension " << rho_ab.dim() << ", dims (" << dims.dA << ", "
           << dims.dB << "), measurement dimension " << on_b.dim();
        throw DimensionMismatch(os.str());
    }
    const Povm full = local_measurement_on_B(on_b, dims.dA);
    const Ensemble post = post_measurement_ensemble(full, rho_ab, prob_floor);
    std::vector<EnsembleComponent> out;
    out.reserve(post.size());
    for (const auto &c : post) {
        out.push_back({c.weight, DensityOperator::normalized(
                                     partial_trace(c.state.matrix(), dims, Subsystem::A))});
    }
    return {Ensemble(std::move(out)), on_b.name()};
}

enum class Theory { QM, EQM };

inline const char *to_string(Theory t) { return t == Theory::QM ? "QM" : "EQM"; }

/// Result of a signaling check. A QM verdict never reports signaling.
class SignalingVerdict {
  public:
    SignalingVerdict(Theory theory, bool signaling, double channel_gap, std::string detail)
        : theory_(theory), signaling_(signaling), gap_(channel_gap), detail_(std::move(detail)) {
        if (theory_ == Theory::QM && signaling_) {
            throw ConsistencyError("SignalingVerdict: a QM verdict cannot report signaling");
        }
    }

    [[nodiscard]] Theory theory() const noexcept { return theory_; }
    [[nodiscard]] bool signaling() const noexcept { return signaling_; }
    [[nodiscard]] double channel_gap() const noexcept { return gap_; }
    [[nodiscard]] const std::string &detail() const noexcept { return detail_; }

  private:
    Theory theory_;
    bool signaling_;
    double gap_;
    std::string detail_;
};

/**
 * For each local measurement on B, compares the barycenter of the steered
 * ensemble with Tr_B ρ. The two agree identically in quantum mechanics, so a
 * distance above `tolerance` is reported as a ConsistencyError.
 */
inline SignalingVerdict verify_no_signaling(const DensityOperator &rho_ab, BipartiteDims dims,
                                            const std::vector<Povm> &measurements,
                                            double tolerance = 1e-9) {
    const DensityOperator reduced =
        DensityOperator::normalized(partial_trace(rho_ab.matrix(), dims, Subsystem::A));
    double gap = 0.0;
    for (std::size_t i = 0; i < measurements.size(); ++i) {
        const auto steered = steer(rho_ab, dims, measurements[i]);
        const double d = trace_distance(barycenter(steered.ensemble), reduced);
        if (d > tolerance) {
            std::ostringstream os;
            os << "verify_no_signaling: measurement " << i << " ('" << steered.measurement_name
               << "') moved the reduced state by " << d;
            throw ConsistencyError(os.str());
        }
        gap = std::max(gap, d);
    }
    std::ostringstream os;
    os << measurements.size() << " local measurements; reduced state unchanged within " << gap;
    return {Theory::QM, false, gap, os.str()};
}

struct SignalingShot {
    std::size_t index;
    int sent;
    int decoded;
    double value;
};

struct EqmSignalingReport {
    SignalingVerdict verdict;
    double value_bit0;     // f on the ensemble steered by the Z measurement
    double value_bit1;     // f on the ensemble steered by the X measurement
    double threshold;      // midpoint of the two values
    bool equivalent_in_qm; // the two steered ensembles share a barycenter
    std::size_t errors;
    std::vector<SignalingShot> transcript;
};

/**
 * Signaling protocol over a singlet. The sender holds B and encodes bit 0 as
 * a Z-basis measurement and bit 1 as an X-basis measurement. The receiver
 * holds A and evaluates `functional` on the ensemble steered onto A, decoding
 * by the nearer of the two reference values. Bits are drawn from `seed`.
 *
 * The steered ensembles are equivalent in QM, so only a functional that sees
 * past the barycenter can carry the bit.
 */
inline EqmSignalingReport simulate_eqm_signaling(const EnsembleFunctional &functional,
                                                 std::size_t n_shots, std::uint64_t seed) {
    if (!functional.nonlinear) {
        throw ValidationError("simulate_eqm_signaling: functional is not flagged nonlinear");
    }
    if (n_shots < 1) {
        throw ValidationError("simulate_eqm_signaling: n_shots must be >= 1");
    }
    const DensityOperator rho_ab = singlet().projector();
    const BipartiteDims dims{2, 2};
    const Povm encodings[2] = {computational_basis_measurement(2), x_basis_measurement()};

    const auto ref0 = steer(rho_ab, dims, encodings[0]);
    const auto ref1 = steer(rho_ab, dims, encodings[1]);
    const double v0 = functional(ref0.ensemble);
    const double v1 = functional(ref1.ensemble);
    const double gap = std::abs(v0 - v1);
    if (!(gap >= 1e-9)) {
        throw ValidationError("functional cannot distinguish the steered ensembles");
    }
    const bool qm_equivalent = equivalent_in_qm(ref0.ensemble, ref1.ensemble);

    std::vector<SignalingShot> transcript;
    transcript.reserve(n_shots);
    std::size_t errors = 0;
    for (std::size_t s = 0; s < n_shots; ++s) {
        Rng rng(derive_seed(seed, s));
        const int bit = std::uniform_int_distribution<int>(0, 1)(rng);
        const auto steered = steer(rho_ab, dims, encodings[bit]);
        const double value = functional(steered.ensemble);
        const int decoded = std::abs(value - v0) <= std::abs(value - v1) ? 0 : 1;
        errors += decoded != bit ? 1 : 0;
        transcript.push_back({s, bit, decoded, value});
    }

    std::ostringstream os;
    os << "functional '" << functional.name << "': " << v0 << " (Z) vs " << v1 << " (X); "
       << (n_shots - errors) << "/" << n_shots << " bits decoded; steered ensembles "
       << (qm_equivalent ? "are" : "are not") << " equivalent in QM";
    SignalingVerdict verdict(Theory::EQM, errors == 0, gap, os.str());
    return {std::move(verdict), v0, v1, 0.5 * (v0 + v1), qm_equivalent, errors,
            std::move(transcript)};
}

} // namespace qkinema
