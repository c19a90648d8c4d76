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

#ifndef BELLSIM_EXPERIMENT_HPP
#define BELLSIM_EXPERIMENT_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bellsim/angle.hpp"
#include "bellsim/inequality.hpp"
#include "bellsim/lhv.hpp"
#include "bellsim/philox.hpp"
#include "bellsim/quantum.hpp"

namespace bellsim {

// Seeded Monte Carlo pair-by-pair simulation. Trial t draws all of its
// randomness from the counter-based stream (seed, t), so the log is a pure
// function of the config and comes out bitwise identical whether trials run
// serially or partitioned across threads.

enum class SourceMode : unsigned char { Quantum, Lhv };
enum class Ordering : unsigned char { Spacelike, Timelike };
enum class FirstMover : unsigned char { SideA, SideB };
enum class MeasurementOrder : unsigned char { Simultaneous, AFirst, BFirst };

inline const char* to_string(MeasurementOrder order) {
    switch (order) {
        case MeasurementOrder::AFirst:
            return "A-first";
        case MeasurementOrder::BFirst:
            return "B-first";
        default:
            return "simultaneous";
    }
}

struct SettingPair {
    Angle a;
    Angle b;
};

struct ExperimentConfig {
    SourceMode mode = SourceMode::Quantum;
    Ordering ordering = Ordering::Spacelike;
    std::vector<SettingPair> setting_pairs;
    std::uint64_t pairs_per_setting = 0;
    std::uint64_t seed = 0;
    double visibility = 1.0;                    // quantum mode only
    FirstMover first_mover = FirstMover::SideA; // timelike mode only
    std::optional<StrategyCensus> census;       // lhv mode only

    void validate() const {
        if (setting_pairs.empty()) {
            throw std::invalid_argument("config needs at least one setting pair");
        }
        if (pairs_per_setting == 0) {
            throw std::invalid_argument("pairs_per_setting must be positive");
        }
        check_visibility(visibility);
        if (mode == SourceMode::Lhv) {
            if (!census.has_value()) {
                throw std::invalid_argument("lhv mode needs a strategy census");
            }
            if (census->total() == 0) {
                throw std::invalid_argument("lhv census must contain at least one pair");
            }
            for (const SettingPair& p : setting_pairs) {
                census->menu().index_of(p.a);
                census->menu().index_of(p.b);
            }
        }
    }
};

/// One emitted pair: the two settings and outcomes plus, in timelike mode,
/// the first observer's message (the partner state they predict) and the
/// second observer's verification when the bases coincide.
struct TrialRecord {
    std::uint64_t trial = 0;
    Angle setting_a;
    Outcome outcome_a = Outcome::Transmit;
    Angle setting_b;
    Outcome outcome_b = Outcome::Transmit;
    MeasurementOrder order = MeasurementOrder::Simultaneous;
    std::optional<Angle> message;
    std::optional<bool> verified;
};

/// Coincidence tallies for one setting pair.
struct PairAggregate {
    Angle setting_a;
    Angle setting_b;
    std::uint64_t pairs = 0;
    std::uint64_t tt = 0;
    std::uint64_t tr = 0;
    std::uint64_t rt = 0;
    std::uint64_t rr = 0;

    std::uint64_t count(Outcome a, Outcome b) const {
        if (a == Outcome::Transmit) {
            return b == Outcome::Transmit ? tt : tr;
        }
        return b == Outcome::Transmit ? rt : rr;
    }
};

struct TrialLog {
    ExperimentConfig config;
    std::vector<TrialRecord> records;
    std::vector<PairAggregate> aggregates;  // one per setting pair, config order
};

namespace detail {

inline TrialRecord simulate_trial(const ExperimentConfig& config, std::uint64_t global_index,
                                  const SettingPair& pair) {
    PhiloxRng rng(config.seed, global_index);

    const bool b_first =
        config.ordering == Ordering::Timelike && config.first_mover == FirstMover::SideB;
    const Angle s_first = b_first ? pair.b : pair.a;
    const Angle s_second = b_first ? pair.a : pair.b;

    Outcome o_first{};
    Outcome o_second{};
    if (config.mode == SourceMode::Quantum) {
        o_first = rng.next_double() < 0.5 ? Outcome::Transmit : Outcome::Reflect;
        // Conditional law for the partner; reduces to the cos^2/sin^2 rule
        // against the collapsed axis when visibility is 1.
        const double p_second_transmit =
            2.0 * joint_probability(s_first, s_second, o_first, Outcome::Transmit,
                                    config.visibility);
        o_second = rng.next_double() < p_second_transmit ? Outcome::Transmit : Outcome::Reflect;
    } else {
        const SharedStrategy strategy = sample_pair(*config.census, rng);
        const SettingMenu& menu = config.census->menu();
        o_first = strategy.respond(menu.index_of(s_first));
        o_second = strategy.respond(menu.index_of(s_second));
    }

    TrialRecord record;
    record.trial = global_index;
    record.setting_a = pair.a;
    record.setting_b = pair.b;
    record.outcome_a = b_first ? o_second : o_first;
    record.outcome_b = b_first ? o_first : o_second;
    if (config.ordering == Ordering::Timelike) {
        record.order = b_first ? MeasurementOrder::BFirst : MeasurementOrder::AFirst;
        const Angle predicted_partner = conditional_remote_state(s_first, o_first);
        record.message = predicted_partner;
        if (s_second == s_first) {
            const Outcome expected =
                predicted_partner == s_second ? Outcome::Transmit : Outcome::Reflect;
            record.verified = (o_second == expected);
        }
    }
    return record;
}

}  // namespace detail

inline TrialLog run_experiment(const ExperimentConfig& config, unsigned threads = 1) {
    config.validate();
    const std::uint64_t per_pair = config.pairs_per_setting;
    const std::uint64_t total = per_pair * config.setting_pairs.size();

    TrialLog log;
    log.config = config;
    log.records.resize(total);

    auto worker = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t g = begin; g < end; ++g) {
            const auto pair_index = static_cast<std::size_t>(g / per_pair);
            log.records[g] = detail::simulate_trial(config, g, config.setting_pairs[pair_index]);
        }
    };

    if (threads <= 1 || total < 2) {
        worker(0, total);
    } else {
        const unsigned n = std::min<std::uint64_t>(threads, total);
        std::vector<std::thread> pool;
        pool.reserve(n);
        const std::uint64_t chunk = (total + n - 1) / n;
        for (unsigned i = 0; i < n; ++i) {
            const std::uint64_t begin = std::min<std::uint64_t>(i * chunk, total);
            const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, total);
            pool.emplace_back(worker, begin, end);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }

    log.aggregates.reserve(config.setting_pairs.size());
    for (std::size_t p = 0; p < config.setting_pairs.size(); ++p) {
        PairAggregate agg;
        agg.setting_a = config.setting_pairs[p].a;
        agg.setting_b = config.setting_pairs[p].b;
        agg.pairs = per_pair;
        for (std::uint64_t g = p * per_pair; g < (p + 1) * per_pair; ++g) {
            const TrialRecord& r = log.records[g];
            if (r.outcome_a == Outcome::Transmit) {
                (r.outcome_b == Outcome::Transmit ? agg.tt : agg.tr) += 1;
            } else {
                (r.outcome_b == Outcome::Transmit ? agg.rt : agg.rr) += 1;
            }
        }
        log.aggregates.push_back(agg);
    }
    return log;
}

namespace detail {

struct LocatedAggregate {
    const PairAggregate* aggregate = nullptr;
    bool swapped = false;  // true when the log ran the pair as (second, first)
};

inline LocatedAggregate find_aggregate(const TrialLog& log, Angle first, Angle second) {
    for (const PairAggregate& agg : log.aggregates) {
        if (agg.setting_a == first && agg.setting_b == second) {
            return {&agg, false};
        }
    }
    for (const PairAggregate& agg : log.aggregates) {
        if (agg.setting_a == second && agg.setting_b == first) {
            return {&agg, true};
        }
    }
    throw std::invalid_argument("log has no aggregate for settings (" +
                                format_double(first.degrees()) + ", " +
                                format_double(second.degrees()) + ") deg");
}

inline std::uint64_t oriented_count(const LocatedAggregate& located, Outcome at_first,
                                    Outcome at_second) {
    return located.swapped ? located.aggregate->count(at_second, at_first)
                           : located.aggregate->count(at_first, at_second);
}

}  // namespace detail

inline constexpr const char* kFairSamplingNote =
    "empirical rates compare three independently sampled subensembles with equal allocation, "
    "assuming each is a fair sample of the source";

/// Empirical inequality estimate from three equally sized runs measured at
/// (a,c), (a,b) and (b,c). Rates are scaled by 2 (units of N0/2) to match
/// the normalized quantum form.
inline InequalityReport empirical_wigner(const TrialLog& log_ac, const TrialLog& log_ab,
                                         const TrialLog& log_bc, const SettingTriple& triple) {
    const auto ac = detail::find_aggregate(log_ac, triple.a, triple.c);
    const auto ab = detail::find_aggregate(log_ab, triple.a, triple.b);
    const auto bc = detail::find_aggregate(log_bc, triple.b, triple.c);
    const std::uint64_t n = ac.aggregate->pairs;
    if (ab.aggregate->pairs != n || bc.aggregate->pairs != n) {
        throw std::invalid_argument("empirical_wigner needs equal pair allocations per setting");
    }
    const auto tt_ac = detail::oriented_count(ac, Outcome::Transmit, Outcome::Transmit);
    const auto rt_ab = detail::oriented_count(ab, Outcome::Reflect, Outcome::Transmit);
    const auto tt_bc = detail::oriented_count(bc, Outcome::Transmit, Outcome::Transmit);
    const double scale = 2.0 / static_cast<double>(n);
    InequalityReport report = detail::make_report(
        ReportForm::NormalizedRate, triple,
        scale * static_cast<double>(tt_ac + rt_ab), scale * static_cast<double>(tt_bc));
    report.note = kFairSamplingNote;
    return report;
}

struct NoSignalingRow {
    Angle remote_setting;
    std::uint64_t pairs = 0;
    double transmit_rate = 0.0;  // side-B Transmit frequency
};

struct NoSignalingResult {
    Angle local_setting;  // side B's fixed setting
    std::vector<NoSignalingRow> rows;
    double max_deviation = 0.0;  // largest pairwise rate difference
};

/// Checks that side B's outcome statistics do not depend on which setting
/// side A chose. All logs must share one side-B setting; aggregates are
/// grouped by the side-A setting.
inline NoSignalingResult no_signaling_test(std::span<const TrialLog> logs) {
    std::optional<Angle> local;
    std::map<double, std::pair<std::uint64_t, std::uint64_t>> groups;  // a_deg -> (b transmit, pairs)
    for (const TrialLog& log : logs) {
        for (const PairAggregate& agg : log.aggregates) {
            if (!local.has_value()) {
                local = agg.setting_b;
            } else if (*local != agg.setting_b) {
                throw std::invalid_argument(
                    "no_signaling_test needs a fixed side-B setting across all logs");
            }
            auto& [transmits, pairs] = groups[agg.setting_a.degrees()];
            transmits += agg.tt + agg.rt;
            pairs += agg.pairs;
        }
    }
    if (groups.size() < 2) {
        throw std::invalid_argument("no_signaling_test needs at least two side-A settings");
    }
    NoSignalingResult result;
    result.local_setting = *local;
    double lo = 1.0;
    double hi = 0.0;
    for (const auto& [a_deg, tally] : groups) {
        NoSignalingRow row;
        row.remote_setting = Angle::from_degrees(a_deg);
        row.pairs = tally.second;
        row.transmit_rate = static_cast<double>(tally.first) / static_cast<double>(tally.second);
        lo = std::min(lo, row.transmit_rate);
        hi = std::max(hi, row.transmit_rate);
        result.rows.push_back(row);
    }
    result.max_deviation = hi - lo;
    return result;
}

/// Fraction of same-basis timelike trials whose verification succeeded.
/// Exactly 1.0 for the ideal quantum source and for any shared-strategy
/// source.
inline double verification_rate(const TrialLog& log) {
    if (log.config.ordering != Ordering::Timelike) {
        throw std::invalid_argument("verification_rate needs a timelike log");
    }
    std::uint64_t checked = 0;
    std::uint64_t passed = 0;
    for (const TrialRecord& r : log.records) {
        if (r.verified.has_value()) {
            ++checked;
            if (*r.verified) {
                ++passed;
            }
        }
    }
    if (checked == 0) {
        throw std::invalid_argument("log has no same-basis timelike trials to verify");
    }
    return static_cast<double>(passed) / static_cast<double>(checked);
}

// --- serialization -----------------------------------------------------------

inline std::string triallog_to_csv(const TrialLog& log) {
    std::string csv = "trial,setting_a_deg,outcome_a,setting_b_deg,outcome_b,order,message_deg,verified\n";
    for (const TrialRecord& r : log.records) {
        csv += std::to_string(r.trial);
        csv += ',';
        csv += detail::format_double(r.setting_a.degrees());
        csv += ',';
        csv += outcome_char(r.outcome_a);
        csv += ',';
        csv += detail::format_double(r.setting_b.degrees());
        csv += ',';
        csv += outcome_char(r.outcome_b);
        csv += ',';
        csv += to_string(r.order);
        csv += ',';
        if (r.message.has_value()) {
            csv += detail::format_double(r.message->degrees());
        }
        csv += ',';
        if (r.verified.has_value()) {
            csv += *r.verified ? "true" : "false";
        }
        csv += '\n';
    }
    return csv;
}

inline nlohmann::ordered_json config_to_json(const ExperimentConfig& config) {
    nlohmann::ordered_json j;
    j["mode"] = config.mode == SourceMode::Quantum ? "quantum" : "lhv";
    j["ordering"] = config.ordering == Ordering::Spacelike ? "spacelike" : "timelike";
    j["setting_pairs_deg"] = nlohmann::ordered_json::array();
    for (const SettingPair& p : config.setting_pairs) {
        j["setting_pairs_deg"].push_back({p.a.degrees(), p.b.degrees()});
    }
    j["pairs_per_setting"] = config.pairs_per_setting;
    j["seed"] = config.seed;
    j["visibility"] = config.visibility;
    j["first_mover"] = config.first_mover == FirstMover::SideA ? "A" : "B";
    if (config.census.has_value()) {
        j["census"] = census_to_json(*config.census);
    }
    return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig config;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "quantum") {
        config.mode = SourceMode::Quantum;
    } else if (mode == "lhv") {
        config.mode = SourceMode::Lhv;
    } else {
        throw std::invalid_argument("config mode must be 'quantum' or 'lhv'");
    }
    const std::string ordering = j.value("ordering", std::string("spacelike"));
    if (ordering == "spacelike") {
        config.ordering = Ordering::Spacelike;
    } else if (ordering == "timelike") {
        config.ordering = Ordering::Timelike;
    } else {
        throw std::invalid_argument("config ordering must be 'spacelike' or 'timelike'");
    }
    for (const auto& pair : j.at("setting_pairs_deg")) {
        if (!pair.is_array() || pair.size() != 2) {
            throw std::invalid_argument("setting_pairs_deg entries must be [a_deg, b_deg]");
        }
        config.setting_pairs.push_back({Angle::from_degrees(pair[0].get<double>()),
                                        Angle::from_degrees(pair[1].get<double>())});
    }
    config.pairs_per_setting = j.at("pairs_per_setting").get<std::uint64_t>();
    config.seed = j.at("seed").get<std::uint64_t>();
    config.visibility = j.value("visibility", 1.0);
    const std::string mover = j.value("first_mover", std::string("A"));
    if (mover == "A") {
        config.first_mover = FirstMover::SideA;
    } else if (mover == "B") {
        config.first_mover = FirstMover::SideB;
    } else {
        throw std::invalid_argument("config first_mover must be 'A' or 'B'");
    }
    if (j.contains("census")) {
        config.census = census_from_json(j.at("census"));
    }
    config.validate();
    return config;
}

/// Recognizes a three-pair config shaped like {(a,c), (a,b), (b,c)} so the
/// summary can report the empirical inequality without being told the
/// labels: a only ever appears on the left, c only on the right, b once on
/// each side.
inline std::optional<SettingTriple> wigner_triple_of(const std::vector<SettingPair>& pairs) {
    if (pairs.size() != 3) {
        return std::nullopt;
    }
    std::map<double, std::pair<int, int>> sides;  // degrees -> (left uses, right uses)
    for (const SettingPair& p : pairs) {
        sides[p.a.degrees()].first += 1;
        sides[p.b.degrees()].second += 1;
    }
    if (sides.size() != 3) {
        return std::nullopt;
    }
    std::optional<Angle> a;
    std::optional<Angle> b;
    std::optional<Angle> c;
    for (const auto& [deg, uses] : sides) {
        if (uses == std::pair<int, int>{2, 0}) {
            a = Angle::from_degrees(deg);
        } else if (uses == std::pair<int, int>{1, 1}) {
            b = Angle::from_degrees(deg);
        } else if (uses == std::pair<int, int>{0, 2}) {
            c = Angle::from_degrees(deg);
        }
    }
    if (!a || !b || !c) {
        return std::nullopt;
    }
    auto has_pair = [&](Angle x, Angle y) {
        return std::any_of(pairs.begin(), pairs.end(),
                           [&](const SettingPair& p) { return p.a == x && p.b == y; });
    };
    if (!has_pair(*a, *c) || !has_pair(*a, *b) || !has_pair(*b, *c)) {
        return std::nullopt;
    }
    return SettingTriple{*a, *b, *c};
}

inline nlohmann::ordered_json triallog_summary_json(const TrialLog& log) {
    nlohmann::ordered_json j;
    j["config"] = config_to_json(log.config);
    j["aggregates"] = nlohmann::ordered_json::array();
    for (const PairAggregate& agg : log.aggregates) {
        nlohmann::ordered_json entry;
        entry["setting_a_deg"] = agg.setting_a.degrees();
        entry["setting_b_deg"] = agg.setting_b.degrees();
        entry["pairs"] = agg.pairs;
        entry["counts"] = {{"TT", agg.tt}, {"TR", agg.tr}, {"RT", agg.rt}, {"RR", agg.rr}};
        j["aggregates"].push_back(entry);
    }
    if (log.config.ordering == Ordering::Timelike) {
        std::uint64_t checked = 0;
        for (const TrialRecord& r : log.records) {
            checked += r.verified.has_value() ? 1 : 0;
        }
        if (checked > 0) {
            j["same_basis_trials"] = checked;
            j["verification_rate"] = verification_rate(log);
        }
    }
    if (auto triple = wigner_triple_of(log.config.setting_pairs)) {
        j["empirical_wigner"] = report_to_json(empirical_wigner(log, log, log, *triple));
    }
    return j;
}

}  // namespace bellsim

#endif  // BELLSIM_EXPERIMENT_HPP
