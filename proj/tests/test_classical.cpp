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

#include "test_helpers.hpp"

using namespace qkinema;
using namespace qkinema::classical;
using Catch::Matchers::WithinAbs;

namespace {
Distribution random_distribution(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return Distribution(random_simplex_point(n, rng));
}

PointMap random_point_map(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> table(n);
    for (auto &v : table) {
        v = pick(rng);
    }
    return PointMap(std::move(table));
}
} // namespace

TEST_CASE("dirac", "[classical]") {
    CHECK(dirac(PhaseSpace(5), 2).probs() == std::vector<double>{0, 0, 1, 0, 0});
    CHECK(dirac(PhaseSpace(1), 0).probs() == std::vector<double>{1});
    CHECK(mix(0.5, dirac(PhaseSpace(2), 0), dirac(PhaseSpace(2), 1)).probs() ==
          std::vector<double>{0.5, 0.5});
    CHECK_THROWS_AS(dirac(PhaseSpace(3), 3), ValidationError);
    CHECK_THROWS_AS(PhaseSpace(0), ValidationError);
}

TEST_CASE("Distribution and PointMap validation", "[classical]") {
    CHECK_THROWS_AS(Distribution({0.5, 0.4}), ValidationError);
    CHECK_THROWS_AS(Distribution({1.5, -0.5}), ValidationError);
    CHECK_THROWS_AS(Distribution({}), ValidationError);
    CHECK_THROWS_AS(PointMap({0, 3, 1}), ValidationError);
    CHECK_THROWS_AS(PointMap({}), ValidationError);
}

TEST_CASE("push_forward", "[classical]") {
    const PhaseSpace omega(5);
    const auto square = PointMap::from_function(omega, [](std::size_t w) { return (w * w) % 5; });
    const auto identity_map = PointMap::from_function(omega, [](std::size_t w) { return w; });
    const auto pi = random_distribution(5, 1);

    CHECK(push_forward(identity_map, pi).probs() == pi.probs());
    CHECK(push_forward(square, dirac(omega, 2)).probs() == dirac(omega, 4).probs());
    const auto half = mix(0.5, dirac(omega, 2), dirac(omega, 3));
    CHECK(push_forward(square, half).probs() == dirac(omega, 4).probs());
    CHECK_THROWS_AS(push_forward(square, dirac(PhaseSpace(4), 0)), DimensionMismatch);

    SECTION("affine for arbitrary point maps; total mass preserved") {
        for (std::uint64_t s = 0; s < 200; ++s) {
            const std::size_t n = 1 + s % 64;
            const auto f = random_point_map(n, 3 * s);
            const auto p = random_distribution(n, 3 * s + 1);
            const auto q = random_distribution(n, 3 * s + 2);
            const double alpha = static_cast<double>(s % 11) / 10.0;
            const auto lhs = push_forward(f, mix(alpha, p, q));
            const auto rhs = mix(alpha, push_forward(f, p), push_forward(f, q));
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                CHECK_THAT(lhs[i], WithinAbs(rhs[i], 1e-12));
                total += lhs[i];
            }
            CHECK_THAT(total, WithinAbs(1.0, 1e-12));
        }
    }
}
