// Copyright 2026 The bellsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bellsim/experiment.hpp"

using bellsim::Angle;
using bellsim::ExperimentConfig;
using bellsim::FirstMover;
using bellsim::Ordering;
using bellsim::Outcome;
using bellsim::SettingMenu;
using bellsim::SettingTriple;
using bellsim::SharedStrategy;
using bellsim::SourceMode;
using bellsim::StrategyCensus;
using bellsim::TrialLog;

namespace {

Angle deg(double d) {
    return Angle::from_degrees(d);
}

ExperimentConfig quantum_config(std::vector<bellsim::SettingPair> pairs, std::uint64_t n,
                                std::uint64_t seed) {
    ExperimentConfig config;
    config.mode = SourceMode::Quantum;
    config.setting_pairs = std::move(pairs);
    config.pairs_per_setting = n;
    config.seed = seed;
    return config;
}

StrategyCensus all_transmit_census(std::uint64_t pairs) {
    const SettingMenu menu({deg(0), deg(30), deg(60)});
    const SharedStrategy all_t{{Outcome::Transmit, Outcome::Transmit, Outcome::Transmit}};
    return StrategyCensus::concentrated(menu, all_t, pairs);
}

ExperimentConfig lhv_config(std::vector<bellsim::SettingPair> pairs, std::uint64_t n,
                            std::uint64_t seed) {
    ExperimentConfig config;
    config.mode = SourceMode::Lhv;
    config.setting_pairs = std::move(pairs);
    config.pairs_per_setting = n;
    config.seed = seed;
    config.census = all_transmit_census(1000);
    return config;
}

double binomial_sigma(double p, double n) {
    return std::sqrt(p * (1.0 - p) / n);
}

}  // namespace

TEST_CASE("config validation", "[experiment]") {
    ExperimentConfig config;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);  // no setting pairs

    config.setting_pairs = {{deg(0), deg(60)}};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);  // zero pairs

    config.pairs_per_setting = 10;
    CHECK_NOTHROW(config.validate());

    config.visibility = 1.2;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.visibility = 1.0;

    config.mode = SourceMode::Lhv;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);  // census missing
    config.census = all_transmit_census(100);
    CHECK_NOTHROW(config.validate());

    config.setting_pairs.push_back({deg(0), deg(45)});  // 45 is not on the menu
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("quantum runs reproduce the cos^2 coincidence rates", "[experiment]") {
    const std::uint64_t n = 200000;
    const TrialLog log = bellsim::run_experiment(quantum_config({{deg(0), deg(60)}}, n, 101));
    REQUIRE(log.records.size() == n);
    REQUIRE(log.aggregates.size() == 1);
    const auto& agg = log.aggregates[0];
    CHECK(agg.tt + agg.tr + agg.rt + agg.rr == n);

    // Recount from the raw records; the aggregate must match exactly.
    std::uint64_t tt = 0;
    for (const auto& r : log.records) {
        tt += (r.outcome_a == Outcome::Transmit && r.outcome_b == Outcome::Transmit) ? 1 : 0;
    }
    CHECK(agg.tt == tt);

    const auto nd = static_cast<double>(n);
    CHECK(std::fabs(static_cast<double>(agg.tt) / nd - 0.125) <
          4.0 * binomial_sigma(0.125, nd));
    CHECK(std::fabs(static_cast<double>(agg.tr) / nd - 0.375) <
          4.0 * binomial_sigma(0.375, nd));
    CHECK(std::fabs(static_cast<double>(agg.rt) / nd - 0.375) <
          4.0 * binomial_sigma(0.375, nd));
    // Each side alone is a fair coin.
    CHECK(std::fabs(static_cast<double>(agg.tt + agg.tr) / nd - 0.5) <
          4.0 * binomial_sigma(0.5, nd));
}

TEST_CASE("deterministic census sources leave a fully predictable log", "[experiment]") {
    const TrialLog log = bellsim::run_experiment(lhv_config({{deg(0), deg(30)}}, 2, 77));
    CHECK(bellsim::triallog_to_csv(log) ==
          "trial,setting_a_deg,outcome_a,setting_b_deg,outcome_b,order,message_deg,verified\n"
          "0,0,T,30,T,simultaneous,,\n"
          "1,0,T,30,T,simultaneous,,\n");
    CHECK(log.aggregates[0].tt == 2);
}

TEST_CASE("runs are pure functions of the config", "[experiment]") {
    const auto config = quantum_config({{deg(0), deg(60)}, {deg(0), deg(30)}}, 3000, 9);
    const std::string one = bellsim::triallog_to_csv(bellsim::run_experiment(config, 1));
    CHECK(bellsim::triallog_to_csv(bellsim::run_experiment(config, 1)) == one);
    CHECK(bellsim::triallog_to_csv(bellsim::run_experiment(config, 4)) == one);
    CHECK(bellsim::triallog_to_csv(bellsim::run_experiment(config, 3)) == one);
    CHECK(bellsim::triallog_to_csv(bellsim::run_experiment(config, 64)) == one);

    // A different seed gives a different log.
    auto reseeded = config;
    reseeded.seed = 10;
    CHECK(bellsim::triallog_to_csv(bellsim::run_experiment(reseeded)) != one);

    // Timelike bookkeeping consumes no randomness: outcomes stay put.
    auto timelike = config;
    timelike.ordering = Ordering::Timelike;
    const TrialLog tl = bellsim::run_experiment(timelike);
    const TrialLog sl = bellsim::run_experiment(config);
    for (std::size_t i = 0; i < sl.records.size(); ++i) {
        REQUIRE(tl.records[i].outcome_a == sl.records[i].outcome_a);
        REQUIRE(tl.records[i].outcome_b == sl.records[i].outcome_b);
    }
}

TEST_CASE("timelike trials carry messages and verify on shared bases", "[experiment]") {
    auto config = quantum_config({{deg(30), deg(30)}}, 20000, 13);
    config.ordering = Ordering::Timelike;
    const TrialLog log = bellsim::run_experiment(config);

    for (const auto& r : log.records) {
        REQUIRE(r.order == bellsim::MeasurementOrder::AFirst);
        REQUIRE(r.message.has_value());
        REQUIRE(r.verified.has_value());
        // The message is the collapsed partner axis of the first outcome.
        const Angle expected = bellsim::conditional_remote_state(r.setting_a, r.outcome_a);
        REQUIRE(*r.message == expected);
    }
    CHECK(bellsim::verification_rate(log) == 1.0);

    config.first_mover = FirstMover::SideB;
    const TrialLog reversed = bellsim::run_experiment(config);
    CHECK(reversed.records[0].order == bellsim::MeasurementOrder::BFirst);
    CHECK(bellsim::verification_rate(reversed) == 1.0);
}

TEST_CASE("timelike log with deterministic census writes golden rows", "[experiment]") {
    auto config = lhv_config({{deg(0), deg(0)}}, 1, 3);
    config.ordering = Ordering::Timelike;
    const TrialLog log = bellsim::run_experiment(config);
    CHECK(bellsim::triallog_to_csv(log) ==
          "trial,setting_a_deg,outcome_a,setting_b_deg,outcome_b,order,message_deg,verified\n"
          "0,0,T,0,T,A-first,0,true\n");
}

TEST_CASE("verification rate demands timelike same-basis data", "[experiment]") {
    const TrialLog spacelike = bellsim::run_experiment(quantum_config({{deg(0), deg(0)}}, 10, 1));
    CHECK_THROWS_AS(bellsim::verification_rate(spacelike), std::invalid_argument);

    auto config = quantum_config({{deg(0), deg(30)}}, 10, 1);
    config.ordering = Ordering::Timelike;
    const TrialLog no_shared_basis = bellsim::run_experiment(config);
    CHECK_THROWS_AS(bellsim::verification_rate(no_shared_basis), std::invalid_argument);
}

TEST_CASE("an uncorrelated source verifies at chance level", "[experiment]") {
    auto config = quantum_config({{deg(45), deg(45)}}, 20000, 21);
    config.ordering = Ordering::Timelike;
    config.visibility = 0.0;
    const double rate = bellsim::verification_rate(bellsim::run_experiment(config));
    CHECK(std::fabs(rate - 0.5) < 4.0 * binomial_sigma(0.5, 20000.0));
}

TEST_CASE("empirical inequality estimate converges to the quantum rates", "[experiment]") {
    const std::uint64_t n = 200000;
    const auto config = quantum_config({{deg(0), deg(60)}, {deg(0), deg(30)}, {deg(30), deg(60)}},
                                       n, 2718);
    const TrialLog log = bellsim::run_experiment(config, 4);
    const SettingTriple triple(deg(0), deg(30), deg(60));
    const auto report = bellsim::empirical_wigner(log, log, log, triple);

    const auto nd = static_cast<double>(n);
    const double sigma_lhs = 2.0 * std::sqrt((0.125 * 0.875 + 0.125 * 0.875) / nd);
    const double sigma_rhs = 2.0 * binomial_sigma(0.375, nd);
    CHECK(std::fabs(report.lhs - 0.5) < 4.0 * sigma_lhs);
    CHECK(std::fabs(report.rhs - 0.75) < 4.0 * sigma_rhs);
    CHECK(report.violated);
    CHECK(report.note == bellsim::kFairSamplingNote);

    // The config is recognized as an inequality arrangement.
    const auto detected = bellsim::wigner_triple_of(config.setting_pairs);
    REQUIRE(detected.has_value());
    CHECK(detected->a == deg(0));
    CHECK(detected->b == deg(30));
    CHECK(detected->c == deg(60));
}

TEST_CASE("empirical estimate is exact for deterministic censuses", "[experiment]") {
    const std::uint64_t n = 1000;
    auto config = lhv_config({{deg(0), deg(60)}, {deg(0), deg(30)}, {deg(30), deg(60)}}, n, 4);
    const TrialLog log = bellsim::run_experiment(config);
    const auto report =
        bellsim::empirical_wigner(log, log, log, SettingTriple(deg(0), deg(30), deg(60)));
    // All-transmit pairs: every subensemble rate is cos^2-free and saturates.
    CHECK(report.lhs == 2.0);
    CHECK(report.rhs == 2.0);
    CHECK(report.margin == 0.0);
    CHECK_FALSE(report.violated);
}

TEST_CASE("aggregate lookup tolerates swapped setting pairs", "[experiment]") {
    const SettingMenu menu({deg(0), deg(30), deg(60)});
    const SharedStrategy trt{{Outcome::Transmit, Outcome::Reflect, Outcome::Transmit}};
    ExperimentConfig config;
    config.mode = SourceMode::Lhv;
    config.census = StrategyCensus::concentrated(menu, trt, 10);
    config.pairs_per_setting = 50;
    config.seed = 6;

    const SettingTriple triple(deg(0), deg(30), deg(60));
    config.setting_pairs = {{deg(0), deg(60)}, {deg(0), deg(30)}, {deg(30), deg(60)}};
    const auto straight = bellsim::empirical_wigner(
        bellsim::run_experiment(config), bellsim::run_experiment(config),
        bellsim::run_experiment(config), triple);

    config.setting_pairs = {{deg(0), deg(60)}, {deg(0), deg(30)}, {deg(60), deg(30)}};
    const auto swapped = bellsim::empirical_wigner(
        bellsim::run_experiment(config), bellsim::run_experiment(config),
        bellsim::run_experiment(config), triple);

    CHECK(straight.lhs == 2.0);
    CHECK(straight.rhs == 0.0);
    CHECK(swapped.lhs == straight.lhs);
    CHECK(swapped.rhs == straight.rhs);

    // Missing pair and mismatched allocation both fail loudly.
    config.setting_pairs = {{deg(0), deg(60)}};
    const TrialLog partial = bellsim::run_experiment(config);
    CHECK_THROWS_AS(bellsim::empirical_wigner(partial, partial, partial, triple),
                    std::invalid_argument);

    config.setting_pairs = {{deg(0), deg(60)}, {deg(0), deg(30)}, {deg(30), deg(60)}};
    const TrialLog full = bellsim::run_experiment(config);
    config.pairs_per_setting = 25;
    const TrialLog smaller = bellsim::run_experiment(config);
    CHECK_THROWS_AS(bellsim::empirical_wigner(full, smaller, full, triple),
                    std::invalid_argument);
}

TEST_CASE("remote setting choices leave local statistics alone", "[experiment]") {
    const std::uint64_t n = 50000;
    const auto config =
        quantum_config({{deg(0), deg(0)}, {deg(30), deg(0)}, {deg(60), deg(0)}}, n, 33);
    const TrialLog log = bellsim::run_experiment(config, 4);
    const std::array<TrialLog, 1> logs{log};
    const auto result = bellsim::no_signaling_test(logs);

    REQUIRE(result.rows.size() == 3);
    CHECK(result.local_setting == deg(0));
    for (const auto& row : result.rows) {
        CHECK(row.pairs == n);
        CHECK(std::fabs(row.transmit_rate - 0.5) <
              4.0 * binomial_sigma(0.5, static_cast<double>(n)));
    }
    CHECK(result.max_deviation < 8.0 * binomial_sigma(0.5, static_cast<double>(n)));

    // A deterministic census pins the rate to exactly one.
    auto lhv = lhv_config({{deg(0), deg(0)}, {deg(30), deg(0)}, {deg(60), deg(0)}}, 500, 8);
    const std::array<TrialLog, 1> lhv_logs{bellsim::run_experiment(lhv)};
    const auto lhv_result = bellsim::no_signaling_test(lhv_logs);
    for (const auto& row : lhv_result.rows) {
        CHECK(row.transmit_rate == 1.0);
    }
    CHECK(lhv_result.max_deviation == 0.0);

    // One remote setting is not a comparison; mixed local settings are an error.
    const std::array<TrialLog, 1> single{
        bellsim::run_experiment(quantum_config({{deg(0), deg(0)}}, 10, 1))};
    CHECK_THROWS_AS(bellsim::no_signaling_test(single), std::invalid_argument);
    const std::array<TrialLog, 1> mixed{
        bellsim::run_experiment(quantum_config({{deg(0), deg(0)}, {deg(30), deg(15)}}, 10, 1))};
    CHECK_THROWS_AS(bellsim::no_signaling_test(mixed), std::invalid_argument);
}

TEST_CASE("config serialization round-trips", "[experiment]") {
    ExperimentConfig config;
    config.mode = SourceMode::Lhv;
    config.ordering = Ordering::Timelike;
    config.setting_pairs = {{deg(0), deg(30)}, {deg(30), deg(30)}};
    config.pairs_per_setting = 123;
    config.seed = 456;
    config.first_mover = FirstMover::SideB;
    config.census = all_transmit_census(50);

    const auto j = bellsim::config_to_json(config);
    const ExperimentConfig back = bellsim::config_from_json(j);
    CHECK(bellsim::config_to_json(back) == j);
    CHECK(back.ordering == Ordering::Timelike);
    CHECK(back.first_mover == FirstMover::SideB);
    CHECK(back.census->total() == 50);

    // Defaults fill in when optional keys are absent.
    const auto sparse = nlohmann::json::parse(R"({
        "mode": "quantum",
        "setting_pairs_deg": [[0, 60]],
        "pairs_per_setting": 5,
        "seed": 1
    })");
    const ExperimentConfig defaulted = bellsim::config_from_json(sparse);
    CHECK(defaulted.ordering == Ordering::Spacelike);
    CHECK(defaulted.visibility == 1.0);
    CHECK(defaulted.first_mover == FirstMover::SideA);

    CHECK_THROWS_AS(bellsim::config_from_json(nlohmann::json::parse(
                        R"({"mode": "psychic", "setting_pairs_deg": [[0, 60]],
                            "pairs_per_setting": 5, "seed": 1})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(bellsim::config_from_json(nlohmann::json::parse(
                        R"({"mode": "quantum", "setting_pairs_deg": [[0]],
                            "pairs_per_setting": 5, "seed": 1})")),
                    std::invalid_argument);
}

TEST_CASE("run summaries expose aggregates and derived checks", "[experiment]") {
    const std::uint64_t n = 2000;
    const auto config = quantum_config({{deg(0), deg(60)}, {deg(0), deg(30)}, {deg(30), deg(60)}},
                                       n, 99);
    const auto summary = bellsim::triallog_summary_json(bellsim::run_experiment(config));
    REQUIRE(summary.contains("aggregates"));
    REQUIRE(summary.at("aggregates").size() == 3);
    std::uint64_t total = 0;
    for (const auto& counts : summary.at("aggregates").at(0).at("counts").items()) {
        total += counts.value().get<std::uint64_t>();
    }
    CHECK(total == n);
    REQUIRE(summary.contains("empirical_wigner"));
    CHECK(summary.at("empirical_wigner").at("form") == "normalized-rate");
    CHECK_FALSE(summary.contains("verification_rate"));

    auto timelike = quantum_config({{deg(30), deg(30)}}, 100, 7);
    timelike.ordering = Ordering::Timelike;
    const auto tl_summary = bellsim::triallog_summary_json(bellsim::run_experiment(timelike));
    CHECK(tl_summary.at("same_basis_trials") == 100);
    CHECK(tl_summary.at("verification_rate") == 1.0);
    CHECK_FALSE(tl_summary.contains("empirical_wigner"));
}

TEST_CASE("inequality arrangements are detected only when well-formed", "[experiment]") {
    using bellsim::wigner_triple_of;
    CHECK_FALSE(wigner_triple_of({{deg(0), deg(60)}, {deg(0), deg(30)}}).has_value());
    // A cyclic arrangement has no setting in a pure left or right role.
    CHECK_FALSE(
        wigner_triple_of({{deg(0), deg(30)}, {deg(30), deg(60)}, {deg(60), deg(0)}}).has_value());
    CHECK(wigner_triple_of({{deg(0), deg(60)}, {deg(0), deg(30)}, {deg(30), deg(60)}})
              .has_value());
}
