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
using namespace qkinema::test;
using Catch::Matchers::WithinAbs;

TEST_CASE("KrausChannel validation", "[dynamics]") {
    CHECK_THROWS_AS(KrausChannel({}), ValidationError);
    CHECK_THROWS_AS(KrausChannel({0.5 * identity(2)}), ValidationError);
    CHECK_THROWS_AS(KrausChannel({identity(2), CMatrix(identity(3))}), DimensionMismatch);
    for (Eigen::Index d = 1; d <= 4; ++d) {
        CHECK_NOTHROW(depolarizing_channel(d, 0.3));
        CHECK_NOTHROW(bit_flip_channel(d, 0.4));
        CHECK_NOTHROW(identity_channel(d));
    }
}

TEST_CASE("apply_kraus", "[dynamics]") {
    const auto rho = random_density(3, 17);
    CHECK(max_abs_diff(apply_kraus(identity_channel(3), rho).matrix(), rho.matrix()) <= 1e-15);
    CHECK(max_abs_diff(apply_kraus(KrausChannel({pauli_x()}), dm(ket0())).matrix(),
                       outer(ket1())) <= 1e-15);

    SECTION("depolarizing q = 3/4 on |0><0| gives I/2") {
        const double q = 0.75;
        const KrausChannel paulis({std::sqrt(1 - q) * identity(2), std::sqrt(q / 3) * pauli_x(),
                                   std::sqrt(q / 3) * pauli_y(), std::sqrt(q / 3) * pauli_z()});
        CHECK(max_abs_diff(apply_kraus(paulis, dm(ket0())).matrix(), identity(2) / 2.0) <= 1e-15);
        CHECK(max_abs_diff(apply_kraus(depolarizing_channel(2, q), dm(ket0())).matrix(),
                           identity(2) / 2.0) <= 1e-15);
    }
    SECTION("full depolarizing sends every state to I/d") {
        for (Eigen::Index d = 2; d <= 4; ++d) {
            const double q = static_cast<double>(d * d - 1) / static_cast<double>(d * d);
            const auto out = apply_kraus(depolarizing_channel(d, q), random_density(d, 5));
            CHECK(max_abs_diff(out.matrix(), identity(d) / static_cast<double>(d)) <= 1e-12);
        }
    }
    SECTION("trace preserved and affine") {
        for (std::uint64_t s = 0; s < 50; ++s) {
            const auto d = 2 + static_cast<Eigen::Index>(s % 3);
            const auto ch = depolarizing_channel(d, 0.2);
            const auto e = random_ensemble(d, 3, s);
            CMatrix mixed = CMatrix::Zero(d, d);
            for (const auto &c : e) {
                mixed += c.weight * apply_kraus(ch, c.state).matrix();
            }
            const auto direct = apply_kraus(ch, barycenter(e));
            CHECK(max_abs_diff(direct.matrix(), mixed) <= 1e-12);
            CHECK_THAT(direct.matrix().trace().real(), WithinAbs(1.0, 1e-10));
        }
    }
    CHECK_THROWS_AS(apply_kraus(identity_channel(2), maximally_mixed(3)), DimensionMismatch);
}

TEST_CASE("nonlinear_purification_map", "[dynamics]") {
    const auto purify = nonlinear_purification_map();
    CHECK(max_abs_diff(purify(dm(ket0())).matrix(), outer(ket0())) <= 1e-15);
    CHECK(max_abs_diff(purify(diag2(0.75, 0.25)).matrix(), diag2(0.9, 0.1).matrix()) <= 1e-15);
    CHECK(max_abs_diff(purify(maximally_mixed(2)).matrix(), identity(2) / 2.0) <= 1e-15);

    SECTION("fixes random pure states") {
        for (std::uint64_t s = 0; s < 20; ++s) {
            Rng rng(s);
            const auto psi = random_pure(3, rng).projector();
            CHECK(max_abs_diff(purify(psi).matrix(), psi.matrix()) <= 1e-12);
        }
    }
    SECTION("keeps positivity and trace on 10^4 random states") {
        for (std::uint64_t s = 0; s < 10000; ++s) {
            const auto d = 2 + static_cast<Eigen::Index>(s % 3);
            CHECK_NOTHROW(purify(random_density(d, s)));
        }
    }
}

TEST_CASE("StateMap output validation", "[dynamics]") {
    const StateMap doubling("doubling", [](const DensityOperator &rho) -> CMatrix {
        return 2.0 * rho.matrix();
    });
    try {
        (void)doubling(dm(ket0()));
        FAIL("expected InvalidMapOutput");
    } catch (const InvalidMapOutput &e) {
        const std::string msg = e.what();
        CHECK(msg.find("doubling") != std::string::npos);
        CHECK(msg.find("for input [(1,0)") != std::string::npos);
    }
    CHECK_THROWS_AS(certify_affine(doubling, 2, 5, 0), InvalidMapOutput);

    const auto qubit_only = as_state_map(identity_channel(2), "id2");
    CHECK_THROWS_AS(qubit_only(maximally_mixed(3)), DimensionMismatch);
    CHECK_THROWS_AS(certify_affine(qubit_only, 3, 5, 0), DimensionMismatch);
}

TEST_CASE("certify_affine", "[dynamics]") {
    SECTION("identity") {
        const auto report = certify_affine(identity_map(), 2, 1000, 1);
        CHECK(report.verdict() == AffinityVerdict::certified_affine);
        CHECK(report.trials() == 1000);
        CHECK_FALSE(report.witness().has_value());
    }
    SECTION("Kraus channels") {
        for (Eigen::Index d = 2; d <= 4; ++d) {
            const auto dep = certify_affine(as_state_map(depolarizing_channel(d, 0.3), "dep"), d,
                                            200, 10 + static_cast<std::uint64_t>(d));
            CHECK(dep.verdict() == AffinityVerdict::certified_affine);
            const auto flip = certify_affine(as_state_map(bit_flip_channel(d, 0.6), "flip"), d,
                                             200, 20 + static_cast<std::uint64_t>(d));
            CHECK(flip.verdict() == AffinityVerdict::certified_affine);
        }
    }
    SECTION("purification map has a witness") {
        const auto report = certify_affine(nonlinear_purification_map(), 2, 50, 3);
        REQUIRE(report.verdict() == AffinityVerdict::witness_found);
        REQUIRE(report.witness().has_value());
        const auto &w = *report.witness();
        CHECK(report.trials() >= 1);
        CHECK(report.trials() <= 50);
        CHECK(equivalent_in_qm(w.e1, w.e2, 1e-9));
        CHECK(w.deviation > 1e-8);
        CHECK_THAT(affine_deviation(nonlinear_purification_map(), w.e1, w.e2),
                   WithinAbs(w.deviation, 1e-12));
    }
    SECTION("deterministic given the seed") {
        const auto a = certify_affine(nonlinear_purification_map(), 3, 50, 99);
        const auto b = certify_affine(nonlinear_purification_map(), 3, 50, 99);
        REQUIRE(a.witness().has_value());
        REQUIRE(b.witness().has_value());
        CHECK(a.trials() == b.trials());
        CHECK(a.witness()->deviation == b.witness()->deviation);
        CHECK(structurally_equal(a.witness()->e1, b.witness()->e1, 0.0));
    }
    SECTION("argument checks") {
        CHECK_THROWS_AS(certify_affine(identity_map(), 2, 0, 0), ValidationError);
        CHECK_THROWS_AS(certify_affine(identity_map(), 2, 1, 0, 0.0), ValidationError);
    }
}

TEST_CASE("affine_deviation on the shipped witness", "[dynamics]") {
    const Ensemble e1({{0.75, dm(ket0())}, {0.25, dm(ket1())}});
    const auto point = Ensemble::dirac(barycenter(e1));
    CHECK_THAT(affine_deviation(nonlinear_purification_map(), e1, point), WithinAbs(0.15, 1e-10));
    CHECK_THAT(affine_deviation(identity_map(), e1, point), WithinAbs(0.0, 1e-15));
    CHECK_THROWS_AS(affine_deviation(identity_map(), e1, ensemble_z()), ValidationError);
}

TEST_CASE("lift_to_ensemble", "[dynamics]") {
    const auto purify = nonlinear_purification_map();
    const auto e = random_ensemble(3, 4, 5);
    CHECK(structurally_equal(lift_to_ensemble(identity_map(), e), e, 0.0));
    CHECK(structurally_equal(lift_to_ensemble(purify, ensemble_z()), ensemble_z(), 1e-15));
    CHECK(structurally_equal(lift_to_ensemble(purify, Ensemble::dirac(diag2(0.75, 0.25))),
                             Ensemble::dirac(diag2(0.9, 0.1)), 1e-15));

    SECTION("commutes with mixing for nonlinear maps") {
        for (std::uint64_t s = 0; s < 50; ++s) {
            const auto d = 2 + static_cast<Eigen::Index>(s % 3);
            const auto e1 = random_ensemble(d, 2, 2 * s);
            const auto e2 = random_ensemble(d, 3, 2 * s + 1);
            const auto lhs = lift_to_ensemble(purify, mix_ensembles({{0.4, e1}, {0.6, e2}}));
            const auto rhs = mix_ensembles(
                {{0.4, lift_to_ensemble(purify, e1)}, {0.6, lift_to_ensemble(purify, e2)}});
            CHECK(structurally_equal(lhs, rhs, 1e-10));
        }
    }
    SECTION("barycenter commutes with the lift iff no witness is found") {
        const auto check_commutes = [](const StateMap &map, std::uint64_t seed) {
            bool commutes = true;
            for (std::uint64_t s = 0; s < 50; ++s) {
                const auto e = random_ensemble(2, 3, derive_seed(seed, s));
                commutes = commutes && trace_distance(barycenter(lift_to_ensemble(map, e)),
                                                      map(barycenter(e))) <= 1e-8;
            }
            return commutes;
        };
        const std::vector<StateMap> controls{
            identity_map(), as_state_map(depolarizing_channel(2, 0.5), "dep"),
            as_state_map(bit_flip_channel(2), "flip"), purify};
        for (const auto &map : controls) {
            const bool no_witness =
                certify_affine(map, 2, 200, 4).verdict() == AffinityVerdict::certified_affine;
            CHECK(check_commutes(map, 8) == no_witness);
        }
    }
}
