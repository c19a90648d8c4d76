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

#include <cmath>

#include "bellsim/quantum.hpp"

using bellsim::Angle;
using bellsim::Outcome;

namespace {
Angle deg(double d) {
    return Angle::from_degrees(d);
}
}  // namespace

TEST_CASE("joint probabilities follow the cos^2 law", "[quantum]") {
    // Parallel polarizers: equal outcomes only, and exactly so.
    CHECK(bellsim::joint_probability(deg(0), deg(0), Outcome::Transmit, Outcome::Transmit) == 0.5);
    CHECK(bellsim::joint_probability(deg(0), deg(0), Outcome::Transmit, Outcome::Reflect) == 0.0);
    CHECK(bellsim::joint_probability(deg(0), deg(0), Outcome::Reflect, Outcome::Reflect) == 0.5);

    // 60 degrees apart: cos^2(60)/2 = 1/8, sin^2(60)/2 = 3/8.
    CHECK(bellsim::joint_probability(deg(0), deg(60), Outcome::Transmit, Outcome::Transmit) ==
          Catch::Approx(0.125).margin(1e-15));
    CHECK(bellsim::joint_probability(deg(0), deg(60), Outcome::Reflect, Outcome::Reflect) ==
          Catch::Approx(0.125).margin(1e-15));
    CHECK(bellsim::joint_probability(deg(0), deg(60), Outcome::Transmit, Outcome::Reflect) ==
          Catch::Approx(0.375).margin(1e-15));

    // 30 degrees apart: sin^2(30)/2 = 1/8.
    CHECK(bellsim::joint_probability(deg(0), deg(30), Outcome::Transmit, Outcome::Reflect) ==
          Catch::Approx(0.125).margin(1e-15));
}

TEST_CASE("joint distribution is normalized, symmetric and rotation invariant", "[quantum]") {
    for (double a = 0.0; a < 180.0; a += 11.0) {
        for (double b = 0.0; b < 180.0; b += 13.0) {
            const auto d = bellsim::joint_distribution(deg(a), deg(b));
            CHECK(d.sum() == Catch::Approx(1.0).margin(1e-12));
            CHECK(d.tt == d.rr);
            CHECK(d.tr == d.rt);
            CHECK(d.tt >= 0.0);
            CHECK(d.tr >= 0.0);

            // Swapping the sides changes nothing.
            const auto swapped = bellsim::joint_distribution(deg(b), deg(a));
            CHECK(d.tt == swapped.tt);
            CHECK(d.tr == swapped.rt);

            // Rotating both polarizers together changes nothing.
            const auto rotated =
                bellsim::joint_distribution(deg(a).rotated(25.0), deg(b).rotated(25.0));
            CHECK(d.tt == Catch::Approx(rotated.tt).margin(1e-12));
            CHECK(d.tr == Catch::Approx(rotated.tr).margin(1e-12));
        }
    }
}

TEST_CASE("equal settings never disagree", "[quantum]") {
    for (double a = 0.0; a < 180.0; a += 9.0) {
        const auto d = bellsim::joint_distribution(deg(a), deg(a));
        CHECK(d.tr == 0.0);
        CHECK(d.rt == 0.0);
        CHECK(d.tt == 0.5);
    }
}

TEST_CASE("marginals are an exact coin flip", "[quantum]") {
    CHECK(bellsim::marginal_probability(deg(0), Outcome::Transmit) == 0.5);
    CHECK(bellsim::marginal_probability(deg(137), Outcome::Reflect) == 0.5);
    // Consistency with the joint law: summing out one side gives 1/2.
    for (double a = 0.0; a < 180.0; a += 19.0) {
        const auto d = bellsim::joint_distribution(deg(a), deg(a + 31.0));
        CHECK(d.tt + d.tr == Catch::Approx(0.5).margin(1e-12));
        CHECK(d.tt + d.rt == Catch::Approx(0.5).margin(1e-12));
    }
}

TEST_CASE("collapsed partner state reproduces the conditional law", "[quantum]") {
    CHECK(bellsim::conditional_remote_state(deg(20), Outcome::Transmit) == deg(20));
    CHECK(bellsim::conditional_remote_state(deg(20), Outcome::Reflect) == deg(110));
    CHECK(bellsim::conditional_remote_state(deg(170), Outcome::Reflect) == deg(80));

    // P(partner transmits at b | outcome at a) equals cos^2 of the separation
    // between the collapsed axis and b.
    for (double a = 0.0; a < 180.0; a += 23.0) {
        for (double b = 0.0; b < 180.0; b += 29.0) {
            for (Outcome o : {Outcome::Transmit, Outcome::Reflect}) {
                const Angle collapsed = bellsim::conditional_remote_state(deg(a), o);
                const double c = std::cos(bellsim::axis_difference_radians(collapsed, deg(b)));
                const double conditional =
                    2.0 * bellsim::joint_probability(deg(a), deg(b), o, Outcome::Transmit);
                CHECK(conditional == Catch::Approx(c * c).margin(1e-12));
            }
        }
    }
}

TEST_CASE("expected counts scale the joint law", "[quantum]") {
    const auto counts = bellsim::predict_counts(deg(0), deg(60), 1000);
    CHECK(counts.tt == Catch::Approx(125.0).margin(1e-9));
    CHECK(counts.tr == Catch::Approx(375.0).margin(1e-9));
    CHECK(counts.rt == Catch::Approx(375.0).margin(1e-9));
    CHECK(counts.rr == Catch::Approx(125.0).margin(1e-9));
    CHECK(counts.sum() == Catch::Approx(1000.0).margin(1e-9));
    CHECK_THROWS_AS(bellsim::predict_counts(deg(0), deg(60), 0), std::invalid_argument);
}

TEST_CASE("visibility degrades correlations but not marginals", "[quantum]") {
    const auto flat = bellsim::joint_distribution(deg(0), deg(0), 0.0);
    CHECK(flat.tt == 0.25);
    CHECK(flat.tr == 0.25);
    CHECK(flat.rt == 0.25);
    CHECK(flat.rr == 0.25);

    const auto dimmed = bellsim::joint_distribution(deg(0), deg(0), 0.9);
    CHECK(dimmed.tt == Catch::Approx(0.475).margin(1e-15));
    CHECK(dimmed.tr == Catch::Approx(0.025).margin(1e-15));
    CHECK(dimmed.tt + dimmed.tr == Catch::Approx(0.5).margin(1e-12));

    CHECK_THROWS_AS(bellsim::joint_distribution(deg(0), deg(0), 1.5), std::invalid_argument);
    CHECK_THROWS_AS(bellsim::joint_distribution(deg(0), deg(0), -0.1), std::invalid_argument);
    CHECK_THROWS_AS(bellsim::joint_distribution(deg(0), deg(0),
                                                std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
}
