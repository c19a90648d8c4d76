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

#ifndef BELLSIM_INEQUALITY_HPP
#define BELLSIM_INEQUALITY_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bellsim/angle.hpp"
#include "bellsim/lhv.hpp"

namespace bellsim {

// The Wigner-D'Espagnat inequality over three settings a, b, c:
//
//     N(a,c) + N(a_perp,b)  >=  N(b,c).
//
// For instruction-set censuses it is an integer identity: splitting each
// term on the remaining setting gives
//     N(a,c)      = N(a,b,c) + N(a,b_perp,c)
//     N(a_perp,b) = N(a_perp,b,c) + N(a_perp,b,c_perp)
//     N(b,c)      = N(a,b,c) + N(a_perp,b,c)
// so LHS - RHS = N(a,b_perp,c) + N(a_perp,b,c_perp) >= 0, a sum of two
// nonnegative census classes. The quantum rates put cos^2/sin^2 of the
// pairwise separations in place of the counts and can push LHS below RHS.

/// Probability comparisons in the normalized form use this absolute
/// tolerance; count form comparisons are exact integer arithmetic.
inline constexpr double kViolationTolerance = 1e-9;

struct SettingTriple {
    Angle a;
    Angle b;
    Angle c;

    SettingTriple(Angle a_, Angle b_, Angle c_) : a(a_), b(b_), c(c_) {
        if (a == b || a == c || b == c) {
            throw std::invalid_argument("triple settings must be pairwise distinct mod 180");
        }
    }
};

enum class ReportForm : unsigned char { Count, NormalizedRate };

inline const char* to_string(ReportForm form) {
    return form == ReportForm::Count ? "count" : "normalized-rate";
}

/// Outcome of evaluating the inequality once. margin = rhs - lhs, so a
/// positive margin means the bound failed. In count form lhs/rhs hold exact
/// integers.
struct InequalityReport {
    ReportForm form = ReportForm::NormalizedRate;
    double a_deg = 0.0;
    double b_deg = 0.0;
    double c_deg = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool violated = false;
    std::string note;  // empirical reports document their sampling assumption
};

namespace detail {

inline InequalityReport make_report(ReportForm form, const SettingTriple& triple, double lhs,
                                    double rhs) {
    InequalityReport report;
    report.form = form;
    report.a_deg = triple.a.degrees();
    report.b_deg = triple.b.degrees();
    report.c_deg = triple.c.degrees();
    report.lhs = lhs;
    report.rhs = rhs;
    report.margin = rhs - lhs;
    report.violated = report.margin > kViolationTolerance;
    return report;
}

}  // namespace detail

/// Count form: evaluates the inequality on a finite emission census.
/// Violated is false for every census; that is the theorem.
inline InequalityReport wigner_counts(const StrategyCensus& census, const SettingTriple& triple) {
    const auto n_ac = census_count(census, {{triple.a, Polarity::Parallel},
                                            {triple.c, Polarity::Parallel}});
    const auto n_aperp_b = census_count(census, {{triple.a, Polarity::Perpendicular},
                                                 {triple.b, Polarity::Parallel}});
    const auto n_bc = census_count(census, {{triple.b, Polarity::Parallel},
                                            {triple.c, Polarity::Parallel}});
    return detail::make_report(ReportForm::Count, triple, static_cast<double>(n_ac + n_aperp_b),
                               static_cast<double>(n_bc));
}

/// Quantum form, in units of N0/2 so the paper triple reads 0.5 vs 0.75:
/// lhs = cos^2(a,c) + sin^2(a,b), rhs = cos^2(b,c).
inline InequalityReport wigner_quantum(const SettingTriple& triple) {
    const double cos_ac = std::cos(axis_difference_radians(triple.a, triple.c));
    const double sin_ab = std::sin(axis_difference_radians(triple.a, triple.b));
    const double cos_bc = std::cos(axis_difference_radians(triple.b, triple.c));
    const double lhs = cos_ac * cos_ac + sin_ab * sin_ab;
    const double rhs = cos_bc * cos_bc;
    return detail::make_report(ReportForm::NormalizedRate, triple, lhs, rhs);
}

/// Every intermediate count in the derivation, for one census and triple.
/// The slack of the two monotonicity steps equals the residual census class
/// dropped by each, and their sum is exactly LHS - RHS.
struct DerivationTrace {
    std::uint64_t n_bc = 0;        // N(b,c)
    std::uint64_t n_abc = 0;       // N(a,b,c)
    std::uint64_t n_aperp_bc = 0;  // N(a_perp,b,c)

    std::uint64_t n_ac = 0;       // N(a,c)
    std::uint64_t n_aperp_b = 0;  // N(a_perp,b)

    std::uint64_t slack_ac = 0;       // N(a,c) - N(a,b,c)
    std::uint64_t slack_aperp_b = 0;  // N(a_perp,b) - N(a_perp,b,c)

    std::uint64_t n_a_bperp_c = 0;       // residual class of the first slack
    std::uint64_t n_aperp_b_cperp = 0;   // residual class of the second slack

    std::int64_t lhs_minus_rhs = 0;  // = n_a_bperp_c + n_aperp_b_cperp
    InequalityReport report;
};

inline DerivationTrace derivation_trace(const StrategyCensus& census, const SettingTriple& triple) {
    const Angle a = triple.a;
    const Angle b = triple.b;
    const Angle c = triple.c;
    DerivationTrace t;
    t.n_bc = census_count(census, {{b, Polarity::Parallel}, {c, Polarity::Parallel}});
    t.n_abc = census_count(census, {{a, Polarity::Parallel},
                                    {b, Polarity::Parallel},
                                    {c, Polarity::Parallel}});
    t.n_aperp_bc = census_count(census, {{a, Polarity::Perpendicular},
                                         {b, Polarity::Parallel},
                                         {c, Polarity::Parallel}});
    t.n_ac = census_count(census, {{a, Polarity::Parallel}, {c, Polarity::Parallel}});
    t.n_aperp_b = census_count(census, {{a, Polarity::Perpendicular}, {b, Polarity::Parallel}});
    t.slack_ac = t.n_ac - t.n_abc;
    t.slack_aperp_b = t.n_aperp_b - t.n_aperp_bc;
    t.n_a_bperp_c = census_count(census, {{a, Polarity::Parallel},
                                          {b, Polarity::Perpendicular},
                                          {c, Polarity::Parallel}});
    t.n_aperp_b_cperp = census_count(census, {{a, Polarity::Perpendicular},
                                              {b, Polarity::Parallel},
                                              {c, Polarity::Perpendicular}});
    t.lhs_minus_rhs = static_cast<std::int64_t>(t.n_ac + t.n_aperp_b) -
                      static_cast<std::int64_t>(t.n_bc);
    t.report = wigner_counts(census, triple);
    return t;
}

inline nlohmann::ordered_json report_to_json(const InequalityReport& report) {
    nlohmann::ordered_json j;
    j["form"] = to_string(report.form);
    j["angles_deg"] = {{"a", report.a_deg}, {"b", report.b_deg}, {"c", report.c_deg}};
    if (report.form == ReportForm::Count) {
        j["lhs"] = static_cast<std::uint64_t>(report.lhs);
        j["rhs"] = static_cast<std::uint64_t>(report.rhs);
        j["margin"] = static_cast<std::int64_t>(report.margin);
    } else {
        j["lhs"] = report.lhs;
        j["rhs"] = report.rhs;
        j["margin"] = report.margin;
    }
    j["violated"] = report.violated;
    if (!report.note.empty()) {
        j["note"] = report.note;
    }
    return j;
}

inline nlohmann::ordered_json trace_to_json(const DerivationTrace& t) {
    nlohmann::ordered_json j;
    j["n_bc"] = t.n_bc;
    j["n_abc"] = t.n_abc;
    j["n_aperp_bc"] = t.n_aperp_bc;
    j["n_ac"] = t.n_ac;
    j["n_aperp_b"] = t.n_aperp_b;
    j["slack_ac"] = t.slack_ac;
    j["slack_aperp_b"] = t.slack_aperp_b;
    j["n_a_bperp_c"] = t.n_a_bperp_c;
    j["n_aperp_b_cperp"] = t.n_aperp_b_cperp;
    j["lhs_minus_rhs"] = t.lhs_minus_rhs;
    j["report"] = report_to_json(t.report);
    return j;
}

}  // namespace bellsim

#endif  // BELLSIM_INEQUALITY_HPP
