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

#ifndef BELLSIM_QUANTUM_HPP
#define BELLSIM_QUANTUM_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "bellsim/angle.hpp"

namespace bellsim {

// Exact predictions for a polarization-entangled photon pair measured by
// two-channel polarizers. The joint state is rotationally invariant: it reads
// (|x>|x> + |x_perp>|x_perp>)/sqrt(2) in every axis basis x, which makes the
// statistics depend only on the separation between the two polarizer axes.
//
// With separation D the ideal per-pair rates are
//   P(T,T) = P(R,R) = cos^2(D) / 2,
//   P(T,R) = P(R,T) = sin^2(D) / 2,
// and each single-side marginal is exactly 1/2.
//
// A visibility parameter V in [0, 1] linearly degrades the correlated part:
// P(equal pair) = (1 + V cos 2D)/4 per outcome pair, P(unequal) =
// (1 - V cos 2D)/4. V = 1 is the ideal case above; V = 0 is an uncorrelated
// source with the same marginals.

inline void check_visibility(double visibility) {
    if (!(visibility >= 0.0 && visibility <= 1.0)) {
        throw std::invalid_argument("visibility must lie in [0, 1]");
    }
}

/// The four joint outcome probabilities for one pair at a fixed pair of
/// polarizer settings. Entries sum to 1.
struct JointDistribution {
    double tt = 0.0;
    double tr = 0.0;
    double rt = 0.0;
    double rr = 0.0;

    double probability(Outcome side_a, Outcome side_b) const {
        if (side_a == Outcome::Transmit) {
            return side_b == Outcome::Transmit ? tt : tr;
        }
        return side_b == Outcome::Transmit ? rt : rr;
    }

    double sum() const { return tt + tr + rt + rr; }
};

inline JointDistribution joint_distribution(Angle setting_a, Angle setting_b,
                                            double visibility = 1.0) {
    check_visibility(visibility);
    const double correlation = visibility * std::cos(2.0 * axis_difference_radians(setting_a, setting_b));
    const double equal = (1.0 + correlation) / 4.0;
    const double unequal = (1.0 - correlation) / 4.0;
    return {equal, unequal, unequal, equal};
}

inline double joint_probability(Angle setting_a, Angle setting_b, Outcome outcome_a,
                                Outcome outcome_b, double visibility = 1.0) {
    return joint_distribution(setting_a, setting_b, visibility).probability(outcome_a, outcome_b);
}

/// Single-side outcome probability. Independent of the setting and of the
/// outcome: a polarizer sequence on one side alone looks like a fair coin,
/// which is what makes the source useless for signaling.
inline double marginal_probability(Angle /*setting*/, Outcome /*outcome*/) {
    return 0.5;
}

/// Pure polarization axis the unmeasured partner is left in once this side's
/// result is known: the measured axis itself on Transmit, its perpendicular
/// on Reflect.
inline Angle conditional_remote_state(Angle setting, Outcome outcome) {
    return outcome == Outcome::Transmit ? setting : setting.perpendicular();
}

/// Expected (real-valued) coincidence counts out of `pairs` emissions.
struct ExpectedCounts {
    double tt = 0.0;
    double tr = 0.0;
    double rt = 0.0;
    double rr = 0.0;

    double sum() const { return tt + tr + rt + rr; }
};

inline ExpectedCounts predict_counts(Angle setting_a, Angle setting_b, std::uint64_t pairs,
                                     double visibility = 1.0) {
    if (pairs == 0) {
        throw std::invalid_argument("predict_counts: pair count must be positive");
    }
    const JointDistribution joint = joint_distribution(setting_a, setting_b, visibility);
    const auto n = static_cast<double>(pairs);
    return {n * joint.tt, n * joint.tr, n * joint.rt, n * joint.rr};
}

}  // namespace bellsim

#endif  // BELLSIM_QUANTUM_HPP
