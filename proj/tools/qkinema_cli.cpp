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

// qkinema command-line driver. Every subcommand prints one JSON report to
// stdout. Exit codes: 0 expected verdict, 1 usage or validation error,
// 2 verdict differs from the expected one (witness or violation found).

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qkinema/json_io.hpp"
#include "qkinema/qkinema.hpp"

namespace {

using namespace qkinema;
using io::json;

constexpr int kExpected = 0;
constexpr int kUsage = 1;
constexpr int kViolation = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t> &flag) {
    if (flag) {
        return *flag;
    }
    if (const char *env = std::getenv("QKINEMA_SEED"); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used, 10);
            if (used != std::string(env).size()) {
                throw std::invalid_argument(env);
            }
            return v;
        } catch (const std::exception &) {
            throw UsageError(std::string("QKINEMA_SEED is not an unsigned integer: ") + env);
        }
    }
    return 0;
}

void emit(const json &report) { std::cout << report.dump(2) << '\n'; }

int demo_example2() {
    constexpr double tolerance = 1e-12;
    const auto psi = singlet();
    const DensityOperator rho = psi.projector();
    const BipartiteDims dims{2, 2};
    const Povm m = local_measurement_on_B(computational_basis_measurement(2), 2);

    const auto probs = outcome_probabilities(m, rho);
    const auto r0 = project(m, rho, 0);
    const auto r1 = project(m, rho, 1);
    const CMatrix a0 = partial_trace(r0.post_state.matrix(), dims, Subsystem::A);
    const CMatrix rho_a = partial_trace(rho.matrix(), dims, Subsystem::A);

    const CMatrix k0 = outer(basis_ket(2, 0));
    const CMatrix k1 = outer(basis_ket(2, 1));
    const json checks = {
        {"probabilities_half_half",
         std::abs(probs[0] - 0.5) <= tolerance && std::abs(probs[1] - 0.5) <= tolerance},
        {"post_state_0", approx_equal(r0.post_state.matrix(), tensor(k1, k0), tolerance)},
        {"post_state_1", approx_equal(r1.post_state.matrix(), tensor(k0, k1), tolerance)},
        {"reduced_post_state_0", approx_equal(a0, k1, tolerance)},
        {"reduced_state_A", approx_equal(rho_a, identity(2) / 2.0, tolerance)},
        {"projective", is_projective(m)},
    };
    bool passed = true;
    for (const auto &[key, value] : checks.items()) {
        passed = passed && value.get<bool>();
    }
    emit({{"demo", "example2"},
          {"state", io::to_json(rho)},
          {"measurement", io::to_json(m)},
          {"probabilities", probs},
          {"records", {io::to_json(r0), io::to_json(r1)}},
          {"reduced_post_state_0", io::to_json(a0)},
          {"reduced_state_A", io::to_json(rho_a)},
          {"checks", checks},
          {"passed", passed}});
    return passed ? kExpected : kViolation;
}

int demo_classical() {
    using namespace qkinema::classical;
    const PhaseSpace omega(5);
    const auto square = PointMap::from_function(omega, [](std::size_t w) { return (w * w) % 5; });
    const auto two = dirac(omega, 2);
    const auto three = dirac(omega, 3);
    const auto half = mix(0.5, two, three);

    const auto image_two = push_forward(square, two);
    const auto image_half = push_forward(square, half);
    const auto mixed_images = mix(0.5, push_forward(square, two), push_forward(square, three));
    double affinity_gap = 0.0;
    for (std::size_t i = 0; i < omega.size(); ++i) {
        affinity_gap = std::max(affinity_gap, std::abs(image_half[i] - mixed_images[i]));
    }
    const auto target = dirac(omega, 4);
    const bool passed = image_two.probs() == target.probs() &&
                        image_half.probs() == target.probs() && affinity_gap <= 1e-12;
    emit({{"demo", "classical"},
          {"point_map", io::to_json(square)},
          {"push_forward_dirac_2", io::to_json(image_two)},
          {"mixture", io::to_json(half)},
          {"push_forward_mixture", io::to_json(image_half)},
          {"mixture_of_push_forwards", io::to_json(mixed_images)},
          {"affinity_gap", affinity_gap},
          {"passed", passed}});
    return passed ? kExpected : kViolation;
}

BipartiteDims parse_dims(const std::string &text) {
    std::istringstream in(text);
    long long a = 0;
    long long b = 0;
    char comma = 0;
    if (!(in >> a >> comma >> b) || comma != ',' || !in.eof() || a < 1 || b < 1) {
        throw UsageError("--dims expects two positive integers 'dA,dB', got '" + text + "'");
    }
    return {a, b};
}

int verify_nosignaling(const std::string &dims_text, std::size_t trials, std::uint64_t seed,
                       double tolerance, std::size_t bases) {
    const auto dims = parse_dims(dims_text);
    double gap = 0.0;
    std::size_t checked = 0;
    try {
        for (std::size_t t = 0; t < trials; ++t) {
            const auto trial_seed = derive_seed(seed, t);
            Rng rng(trial_seed);
            const DensityOperator rho = t % 2 == 0 ? random_pure(dims.total(), rng).projector()
                                                   : random_density(dims.total(), rng);
            std::vector<Povm> measurements;
            for (std::size_t k = 0; k < bases; ++k) {
                const auto outcomes = 2 + static_cast<std::size_t>(k) % dims.dB;
                measurements.push_back(random_projective_measurement(
                    dims.dB, std::min<std::size_t>(outcomes, dims.dB), derive_seed(trial_seed, k + 1)));
            }
            const auto verdict = verify_no_signaling(rho, dims, measurements, tolerance);
            gap = std::max(gap, verdict.channel_gap());
            checked += measurements.size();
        }
    } catch (const ConsistencyError &e) {
        emit({{"theory", "QM"}, {"signaling", false}, {"violation", e.what()}, {"checked", checked}});
        return kViolation;
    }
    std::ostringstream os;
    os << checked << " steered ensembles over " << trials << " states";
    const SignalingVerdict verdict(Theory::QM, false, gap, os.str());
    json report = io::to_json(verdict);
    report["dims"] = {dims.dA, dims.dB};
    report["trials"] = trials;
    report["measurements_per_state"] = bases;
    report["seed"] = seed;
    report["tolerance"] = tolerance;
    emit(report);
    return kExpected;
}

struct MapChoice {
    StateMap map;
    AffinityVerdict expected;
};

MapChoice parse_map(const std::string &spec, Eigen::Index dim) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    std::optional<double> param;
    if (colon != std::string::npos) {
        try {
            std::size_t used = 0;
            param = std::stod(spec.substr(colon + 1), &used);
            if (used != spec.size() - colon - 1) {
                throw std::invalid_argument(spec);
            }
        } catch (const std::exception &) {
            throw UsageError("bad map parameter in '" + spec + "'");
        }
    }
    if (kind == "identity" && !param) {
        return {identity_map(), AffinityVerdict::certified_affine};
    }
    if (kind == "purify" && !param) {
        return {nonlinear_purification_map(), AffinityVerdict::witness_found};
    }
    if (kind == "depolarizing" && param) {
        return {as_state_map(depolarizing_channel(dim, *param), spec),
                AffinityVerdict::certified_affine};
    }
    if (kind == "bitflip") {
        return {as_state_map(bit_flip_channel(dim, param.value_or(1.0)), spec),
                AffinityVerdict::certified_affine};
    }
    throw UsageError("unknown map '" + spec +
                     "' (identity | depolarizing:q | purify | bitflip[:p])");
}

int certify_affine_cmd(const std::string &map_spec, Eigen::Index dim, std::size_t trials,
                       std::uint64_t seed, double threshold) {
    if (dim < 1) {
        throw UsageError("--dim must be >= 1");
    }
    const auto choice = parse_map(map_spec, dim);
    try {
        const auto report = certify_affine(choice.map, dim, trials, seed, threshold);
        json out = io::to_json(report);
        const bool as_expected = report.verdict() == choice.expected;
        out["map"] = map_spec;
        out["dim"] = dim;
        out["seed"] = seed;
        out["threshold"] = threshold;
        out["expected"] = to_string(choice.expected);
        out["as_expected"] = as_expected;
        emit(out);
        return as_expected ? kExpected : kViolation;
    } catch (const InvalidMapOutput &e) {
        emit({{"map", map_spec}, {"violation", e.what()}});
        return kViolation;
    }
}

int simulate_eqm(std::size_t shots, std::uint64_t seed) {
    const auto functional = basis_overlap_functional(PureState(basis_ket(2, 0)));
    const auto report = simulate_eqm_signaling(functional, shots, seed);
    json out = io::to_json(report);
    out["functional"] = functional.name;
    out["seed"] = seed;
    emit(out);
    return report.verdict.signaling() && report.equivalent_in_qm ? kExpected : kViolation;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"qkinema: density operators, ensembles, affinity and no-signaling checks"};
    app.require_subcommand(1);

    auto *demo = app.add_subcommand("demo", "Worked examples");
    demo->require_subcommand(1);
    auto *demo_ex2 = demo->add_subcommand("example2", "Singlet with a local Z measurement on B");
    auto *demo_cls = demo->add_subcommand("classical", "Push-forward on a 5-point phase space");

    std::optional<std::uint64_t> seed_flag;

    auto *verify = app.add_subcommand("verify", "Verification runs");
    verify->require_subcommand(1);
    auto *nosig = verify->add_subcommand("nosignaling", "Steered barycenters vs Tr_B on random states");
    std::string dims_text = "2,2";
    std::size_t nosig_trials = 100;
    double nosig_tol = 1e-9;
    std::size_t nosig_bases = 10;
    nosig->add_option("--dims", dims_text, "Subsystem dimensions dA,dB")->capture_default_str();
    nosig->add_option("--trials", nosig_trials, "Number of random bipartite states")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    nosig->add_option("--seed", seed_flag, "Seed (falls back to QKINEMA_SEED, then 0)");
    nosig->add_option("--tol", nosig_tol, "Trace-distance tolerance")->capture_default_str();
    nosig->add_option("--bases", nosig_bases, "Random projective measurements per state")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    auto *certify = app.add_subcommand("certify", "Certification runs");
    certify->require_subcommand(1);
    auto *affine = certify->add_subcommand("affine", "Randomized affinity certification of a state map");
    std::string map_spec;
    long long cert_dim = 2;
    std::size_t cert_trials = 1000;
    double cert_threshold = 1e-8;
    affine->add_option("--map", map_spec, "identity | depolarizing:q | purify | bitflip[:p]")
        ->required();
    affine->add_option("--dim", cert_dim, "Hilbert space dimension")->capture_default_str();
    affine->add_option("--trials", cert_trials, "Number of trials")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    affine->add_option("--seed", seed_flag, "Seed (falls back to QKINEMA_SEED, then 0)");
    affine->add_option("--threshold", cert_threshold, "Witness threshold (trace distance)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    auto *simulate = app.add_subcommand("simulate", "Protocol simulations");
    simulate->require_subcommand(1);
    auto *eqm = simulate->add_subcommand("eqm-signaling", "Signaling with a nonlinear ensemble functional");
    std::size_t shots = 16;
    eqm->add_option("--shots", shots, "Number of transmitted bits")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    eqm->add_option("--seed", seed_flag, "Seed (falls back to QKINEMA_SEED, then 0)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (demo_ex2->parsed()) {
            return demo_example2();
        }
        if (demo_cls->parsed()) {
            return demo_classical();
        }
        if (nosig->parsed()) {
            return verify_nosignaling(dims_text, nosig_trials, resolve_seed(seed_flag), nosig_tol,
                                      nosig_bases);
        }
        if (affine->parsed()) {
            return certify_affine_cmd(map_spec, static_cast<Eigen::Index>(cert_dim), cert_trials,
                                      resolve_seed(seed_flag), cert_threshold);
        }
        if (eqm->parsed()) {
            return simulate_eqm(shots, resolve_seed(seed_flag));
        }
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ValidationError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kViolation;
    }
    return kUsage;
}
