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
 * JSON encodings shared by the library and the CLI.
 *
 *   matrix    {"rows": r, "cols": c, "data": [[re, im], ...]}   row-major
 *   ensemble  {"components": [{"weight": p, "state": <matrix>}, ...]}
 *   povm      {"effects": [{"label": x, "operator": <matrix>}, ...]}
 *   classical {"size": N, "probs": [...]},  point map {"table": [...]}
 *
 * Decoders validate through the domain constructors and throw
 * ValidationError on malformed input.
 */

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qkinema/classical.hpp"
#include "qkinema/dynamics.hpp"
#include "qkinema/error.hpp"
#include "qkinema/kinematics.hpp"
#include "qkinema/measurement.hpp"
#include "qkinema/operator_core.hpp"
#include "qkinema/projection_signaling.hpp"

namespace qkinema::io {

using json = nlohmann::json;

namespace detail {
template <typename F> auto guarded(const char *what, F &&f) {
    try {
        return f();
    } catch (const json::exception &e) {
        throw ValidationError(std::string(what) + ": " + e.what());
    }
}
} // namespace detail

inline json to_json(const CMatrix &m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            data.push_back({m(i, j).real(), m(i, j).imag()});
        }
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline CMatrix matrix_from_json(const json &j) {
    return detail::guarded("matrix", [&] {
        const auto rows = j.at("rows").get<long long>();
        const auto cols = j.at("cols").get<long long>();
        const auto &data = j.at("data");
        if (rows < 1 || cols < 1) {
            throw ValidationError("matrix: rows and cols must be positive");
        }
        if (!data.is_array() || static_cast<long long>(data.size()) != rows * cols) {
            throw ValidationError("matrix: data length does not equal rows * cols");
        }
        CMatrix m(rows, cols);
        for (long long k = 0; k < rows * cols; ++k) {
            const auto &z = data[static_cast<std::size_t>(k)];
            if (!z.is_array() || z.size() != 2) {
                throw ValidationError("matrix: entries must be [re, im] pairs");
            }
            m(k / cols, k % cols) = Complex(z[0].get<double>(), z[1].get<double>());
        }
        require_finite(m, "matrix");
        return m;
    });
}

inline json to_json(const DensityOperator &rho) { return to_json(rho.matrix()); }

inline json to_json(const Ensemble &e) {
    json comps = json::array();
    for (const auto &c : e) {
        comps.push_back({{"weight", c.weight}, {"state", to_json(c.state)}});
    }
    return {{"components", std::move(comps)}};
}

inline Ensemble ensemble_from_json(const json &j) {
    return detail::guarded("ensemble", [&] {
        std::vector<EnsembleComponent> comps;
        for (const auto &c : j.at("components")) {
            comps.push_back(
                {c.at("weight").get<double>(), DensityOperator(matrix_from_json(c.at("state")))});
        }
        return Ensemble(std::move(comps));
    });
}

inline json to_json(const Povm &m) {
    json effects = json::array();
    for (const auto &e : m.effects()) {
        effects.push_back({{"label", e.label}, {"operator", to_json(e.op.matrix())}});
    }
    json out = {{"effects", std::move(effects)}};
    if (!m.name().empty()) {
        out["name"] = m.name();
    }
    return out;
}

inline Povm povm_from_json(const json &j) {
    return detail::guarded("povm", [&] {
        std::vector<PovmEffect> effects;
        for (const auto &e : j.at("effects")) {
            effects.push_back(
                {e.at("label").get<double>(), HermitianMatrix(matrix_from_json(e.at("operator")))});
        }
        return Povm(std::move(effects), j.value("name", std::string{}));
    });
}

inline json to_json(const classical::Distribution &d) {
    return {{"size", d.probs().size()}, {"probs", d.probs()}};
}

inline classical::Distribution distribution_from_json(const json &j) {
    return detail::guarded("distribution", [&] {
        auto probs = j.at("probs").get<std::vector<double>>();
        if (j.at("size").get<std::size_t>() != probs.size()) {
            throw ValidationError("distribution: size does not match probs length");
        }
        return classical::Distribution(std::move(probs));
    });
}

inline json to_json(const classical::PointMap &f) { return {{"table", f.table()}}; }

inline classical::PointMap point_map_from_json(const json &j) {
    return detail::guarded("point map", [&] {
        return classical::PointMap(j.at("table").get<std::vector<std::size_t>>());
    });
}

inline json to_json(const AffinityReport &r) {
    json witness = nullptr;
    if (r.witness()) {
        witness = {{"e1", to_json(r.witness()->e1)},
                   {"e2", to_json(r.witness()->e2)},
                   {"deviation", r.witness()->deviation}};
    }
    return {{"verdict", to_string(r.verdict())}, {"trials", r.trials()}, {"witness", witness}};
}

inline json to_json(const MeasurementRecord &r) {
    return {{"outcome_index", r.outcome_index},
            {"probability", r.probability},
            {"post_state", to_json(r.post_state)}};
}

inline json to_json(const SignalingVerdict &v) {
    return {{"theory", to_string(v.theory())},
            {"signaling", v.signaling()},
            {"channel_gap", v.channel_gap()},
            {"detail", v.detail()}};
}

inline json to_json(const EqmSignalingReport &r) {
    json shots = json::array();
    for (const auto &s : r.transcript) {
        shots.push_back(
            {{"shot", s.index}, {"sent", s.sent}, {"decoded", s.decoded}, {"value", s.value}});
    }
    return {{"verdict", to_json(r.verdict)},
            {"value_bit0", r.value_bit0},
            {"value_bit1", r.value_bit1},
            {"threshold", r.threshold},
            {"equivalent_in_qm", r.equivalent_in_qm},
            {"errors", r.errors},
            {"transcript", std::move(shots)}};
}

} // namespace qkinema::io
