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

#ifndef BELLSIM_OPTIMIZE_HPP
#define BELLSIM_OPTIMIZE_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellsim/angle.hpp"
#include "bellsim/inequality.hpp"
#include "bellsim/lhv.hpp"

namespace bellsim {

// Two complementary searches. On the local side the inequality margin is
// linear in the census, so its maximum over all censuses is attained at one
// of the 2^k deterministic strategies; enumerating those vertices gives the
// exact local bound. On the quantum side the normalized margin is a smooth
// function of the collinear angles (a,b) = theta1, (b,c) = theta2 and a grid
// scan plus golden-section refinement locates the maximal violation.

/// Per-pair inequality margin (rhs - lhs) of a single shared strategy whose
/// menu positions 0, 1, 2 are read as a, b, c. Integer-valued; the census
/// margin is the count-weighted average of these.
inline int strategy_margin(const SharedStrategy& strategy) {
    if (strategy.outcomes.size() != 3) {
        throw std::invalid_argument("strategy margin needs a 3-setting strategy");
    }
    const bool a_t = strategy.outcomes[0] == Outcome::Transmit;
    const bool b_t = strategy.outcomes[1] == Outcome::Transmit;
    const bool c_t = strategy.outcomes[2] == Outcome::Transmit;
    const int n_ac = (a_t && c_t) ? 1 : 0;
    const int n_aperp_b = (!a_t && b_t) ? 1 : 0;
    const int n_bc = (b_t && c_t) ? 1 : 0;
    return n_bc - (n_ac + n_aperp_b);
}

/// Exact maximum of the inequality margin over every local model.
struct BoundResult {
    double max_margin = 0.0;        // per pair; the theorem says this is <= 0
    SharedStrategy best_strategy;   // first attaining strategy in enumeration order
    std::uint64_t vertices_examined = 0;
};

inline BoundResult local_bound(const SettingTriple& triple) {
    const SettingMenu menu({triple.a, triple.b, triple.c});
    BoundResult result;
    bool first = true;
    for (const SharedStrategy& s : enumerate_shared_strategies(menu)) {
        const int margin = strategy_margin(s);
        if (first || margin > result.max_margin) {
            result.max_margin = margin;
            result.best_strategy = s;
            first = false;
        }
        ++result.vertices_examined;
    }
    return result;
}

/// Normalized quantum margin for the collinear arrangement
/// (a,b) = theta1, (b,c) = theta2, (a,c) = theta1 + theta2:
///     cos^2(theta2) - cos^2(theta1 + theta2) - sin^2(theta1).
/// Positive means the inequality is violated.
inline double quantum_margin(double theta1_deg, double theta2_deg) {
    if (!(theta1_deg > 0.0 && theta1_deg < 90.0 && theta2_deg > 0.0 && theta2_deg < 90.0)) {
        throw std::invalid_argument("quantum_margin: angles must lie in (0, 90) degrees");
    }
    constexpr double rad = std::numbers::pi / 180.0;
    const double c2 = std::cos(theta2_deg * rad);
    const double c12 = std::cos((theta1_deg + theta2_deg) * rad);
    const double s1 = std::sin(theta1_deg * rad);
    return c2 * c2 - c12 * c12 - s1 * s1;
}

struct MaximizeResult {
    double theta1_deg = 0.0;
    double theta2_deg = 0.0;
    double margin = 0.0;
    std::uint64_t evaluations = 0;
};

namespace detail {

// Same closed form as quantum_margin, without the open-interval check, so
// refinement brackets may touch the boundary where the margin extends
// continuously.
inline double collinear_margin(double theta1_deg, double theta2_deg) {
    constexpr double rad = std::numbers::pi / 180.0;
    const double c2 = std::cos(theta2_deg * rad);
    const double c12 = std::cos((theta1_deg + theta2_deg) * rad);
    const double s1 = std::sin(theta1_deg * rad);
    return c2 * c2 - c12 * c12 - s1 * s1;
}

// Golden-section maximization of f over [lo, hi] down to bracket width tol.
template <typename F>
double golden_section_max(F&& f, double lo, double hi, double tol, std::uint64_t& evals) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    evals += 2;
    while (hi - lo > tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
        ++evals;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Coarse grid scan over (0, 90)^2 followed by coordinate-wise
/// golden-section refinement. Grid ties resolve to the lexicographically
/// smallest point, so the result is deterministic.
inline MaximizeResult maximize_violation(double grid_step_deg = 1.0,
                                         double refine_tolerance_deg = 1e-4) {
    if (!(grid_step_deg > 0.0 && grid_step_deg <= 5.0)) {
        throw std::invalid_argument("maximize_violation: grid step must lie in (0, 5] degrees");
    }
    if (!(refine_tolerance_deg >= 1e-6)) {
        throw std::invalid_argument("maximize_violation: tolerance must be >= 1e-6 degrees");
    }
    MaximizeResult result;
    bool first = true;
    for (double t1 = grid_step_deg; t1 < 90.0 - 1e-12; t1 += grid_step_deg) {
        for (double t2 = grid_step_deg; t2 < 90.0 - 1e-12; t2 += grid_step_deg) {
            const double m = detail::collinear_margin(t1, t2);
            ++result.evaluations;
            if (first || m > result.margin) {
                result.theta1_deg = t1;
                result.theta2_deg = t2;
                result.margin = m;
                first = false;
            }
        }
    }
    // Coordinate descent: shrink each coordinate's bracket below the
    // tolerance, repeating until a full round no longer moves the point.
    double t1 = result.theta1_deg;
    double t2 = result.theta2_deg;
    for (int round = 0; round < 50; ++round) {
        const double prev1 = t1;
        const double prev2 = t2;
        t1 = detail::golden_section_max(
            [&](double x) { return detail::collinear_margin(x, t2); },
            std::max(t1 - grid_step_deg, 0.0), std::min(t1 + grid_step_deg, 90.0),
            refine_tolerance_deg, result.evaluations);
        t2 = detail::golden_section_max(
            [&](double x) { return detail::collinear_margin(t1, x); },
            std::max(t2 - grid_step_deg, 0.0), std::min(t2 + grid_step_deg, 90.0),
            refine_tolerance_deg, result.evaluations);
        if (std::fabs(t1 - prev1) < refine_tolerance_deg &&
            std::fabs(t2 - prev2) < refine_tolerance_deg) {
            break;
        }
    }
    result.theta1_deg = t1;
    result.theta2_deg = t2;
    result.margin = detail::collinear_margin(t1, t2);
    ++result.evaluations;
    return result;
}

/// One row of the symmetric sweep (a,b) = (b,c) = theta, (a,c) = 2 theta.
struct SweepRow {
    double theta_deg = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

inline SweepResult sweep_symmetric(double theta_min_deg, double theta_max_deg, double step_deg) {
    if (!(theta_min_deg >= 0.0 && theta_min_deg < theta_max_deg && theta_max_deg <= 90.0)) {
        throw std::invalid_argument("sweep range must satisfy 0 <= min < max <= 90 degrees");
    }
    if (!(step_deg > 0.0)) {
        throw std::invalid_argument("sweep step must be positive");
    }
    constexpr double rad = std::numbers::pi / 180.0;
    SweepResult result;
    for (std::uint64_t i = 0;; ++i) {
        const double theta = theta_min_deg + static_cast<double>(i) * step_deg;
        if (theta > theta_max_deg + 1e-9) {
            break;
        }
        const double c2t = std::cos(2.0 * theta * rad);
        const double st = std::sin(theta * rad);
        const double ct = std::cos(theta * rad);
        SweepRow row;
        row.theta_deg = theta;
        row.lhs = c2t * c2t + st * st;
        row.rhs = ct * ct;
        row.margin = row.rhs - row.lhs;
        result.rows.push_back(row);
    }
    return result;
}

inline std::string sweep_to_csv(const SweepResult& sweep) {
    std::string csv = "theta_deg,lhs,rhs,margin\n";
    for (const SweepRow& row : sweep.rows) {
        csv += detail::format_double(row.theta_deg);
        csv += ',';
        csv += detail::format_double(row.lhs);
        csv += ',';
        csv += detail::format_double(row.rhs);
        csv += ',';
        csv += detail::format_double(row.margin);
        csv += '\n';
    }
    return csv;
}

}  // namespace bellsim

#endif  // BELLSIM_OPTIMIZE_HPP
