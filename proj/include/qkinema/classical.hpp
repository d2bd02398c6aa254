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
 * Finite classical phase space Ω = {0, ..., N−1}, probability vectors on it,
 * and the push-forward of a point map. The push-forward is affine in the
 * distribution whatever the point map does.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <utility>
#include <vector>

#include "qkinema/error.hpp"

namespace qkinema::classical {

class PhaseSpace {
  public:
    explicit PhaseSpace(std::size_t size) : size_(size) {
        if (size_ < 1) {
            throw ValidationError("PhaseSpace: size must be >= 1");
        }
    }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    friend bool operator==(const PhaseSpace &, const PhaseSpace &) = default;

  private:
    std::size_t size_;
};

/// Probability vector on Ω: entries ≥ 0, sum 1 within 1e-12.
class Distribution {
  public:
    explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
        if (probs_.empty()) {
            throw ValidationError("Distribution: empty phase space");
        }
        double total = 0.0;
        for (double p : probs_) {
            if (!(p >= 0.0) || !std::isfinite(p)) {
                throw ValidationError("Distribution: negative or non-finite probability");
            }
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            std::ostringstream os;
            os << "Distribution: total mass " << total;
            throw ValidationError(os.str());
        }
    }

    [[nodiscard]] const std::vector<double> &probs() const noexcept { return probs_; }
    [[nodiscard]] PhaseSpace space() const { return PhaseSpace(probs_.size()); }
    [[nodiscard]] double operator[](std::size_t i) const { return probs_.at(i); }

  private:
    std::vector<double> probs_;
};

/// Total function Ω → Ω given as a lookup table.
class PointMap {
  public:
    explicit PointMap(std::vector<std::size_t> table) : table_(std::move(table)) {
        if (table_.empty()) {
            throw ValidationError("PointMap: empty table");
        }
        for (auto v : table_) {
            if (v >= table_.size()) {
                throw ValidationError("PointMap: image outside the phase space");
            }
        }
    }

    template <typename F> static PointMap from_function(PhaseSpace space, F &&f) {
        std::vector<std::size_t> table(space.size());
        for (std::size_t w = 0; w < space.size(); ++w) {
            table[w] = static_cast<std::size_t>(f(w));
        }
        return PointMap(std::move(table));
    }

    [[nodiscard]] const std::vector<std::size_t> &table() const noexcept { return table_; }
    [[nodiscard]] PhaseSpace space() const { return PhaseSpace(table_.size()); }
    [[nodiscard]] std::size_t operator()(std::size_t w) const { return table_.at(w); }

  private:
    std::vector<std::size_t> table_;
};

/// δ_ω
inline Distribution dirac(PhaseSpace space, std::size_t point) {
    if (point >= space.size()) {
        throw ValidationError("dirac: point outside the phase space");
    }
    std::vector<double> p(space.size(), 0.0);
    p[point] = 1.0;
    return Distribution(std::move(p));
}

/// α p + (1 − α) q
inline Distribution mix(double alpha, const Distribution &p, const Distribution &q) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw ValidationError("mix: weight must lie in [0, 1]");
    }
    if (p.probs().size() != q.probs().size()) {
        throw DimensionMismatch("mix: phase spaces differ");
    }
    std::vector<double> out(p.probs().size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = alpha * p[i] + (1.0 - alpha) * q[i];
    }
    return Distribution(std::move(out));
}

/// (f_* π)(ω') = Σ_{ω : f(ω) = ω'} π(ω)
inline Distribution push_forward(const PointMap &f, const Distribution &pi) {
    if (f.table().size() != pi.probs().size()) {
        throw DimensionMismatch("push_forward: point map and distribution live on different spaces");
    }
    std::vector<double> out(pi.probs().size(), 0.0);
    for (std::size_t w = 0; w < out.size(); ++w) {
        out[f(w)] += pi[w];
    }
    return Distribution(std::move(out));
}

} // namespace qkinema::classical

namespace qkinema {
using ClassicalDistribution = classical::Distribution;
} // namespace qkinema
