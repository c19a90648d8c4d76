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

#ifndef BELLSIM_LHV_HPP
#define BELLSIM_LHV_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bellsim/angle.hpp"
#include "bellsim/philox.hpp"

namespace bellsim {

// Local-hidden-variable instruction sets. A pair that must show perfect
// correlations at every common setting, without either photon being able to
// affect the other, has to leave the source carrying a deterministic answer
// for every setting it could meet. The model therefore reduces to finitely
// many "strategies" (one Transmit/Reflect instruction per menu setting) and
// a finite emission run reduces to integer counts per strategy. No
// distribution over hidden states is ever needed; every identity below is an
// identity between integers.

/// The ordered list of polarizer orientations a source must be prepared for.
class SettingMenu {
  public:
    static constexpr std::size_t kMaxSettings = 16;  // 2^k enumeration guard

    explicit SettingMenu(std::vector<Angle> settings) : settings_(std::move(settings)) {
        if (settings_.empty()) {
            throw std::invalid_argument("setting menu must not be empty");
        }
        if (settings_.size() > kMaxSettings) {
            throw std::invalid_argument("setting menu larger than 16 settings");
        }
        for (std::size_t i = 0; i < settings_.size(); ++i) {
            for (std::size_t j = i + 1; j < settings_.size(); ++j) {
                if (settings_[i] == settings_[j]) {
                    throw std::invalid_argument("menu settings must be distinct mod 180 degrees");
                }
            }
        }
    }

    std::size_t size() const { return settings_.size(); }
    const std::vector<Angle>& settings() const { return settings_; }
    Angle setting(std::size_t i) const { return settings_.at(i); }

    std::optional<std::size_t> find(Angle setting) const {
        for (std::size_t i = 0; i < settings_.size(); ++i) {
            if (settings_[i] == setting) {
                return i;
            }
        }
        return std::nullopt;
    }

    std::size_t index_of(Angle setting) const {
        if (auto i = find(setting)) {
            return *i;
        }
        throw std::invalid_argument("setting " + detail::format_double(setting.degrees()) +
                                    " deg is not on the menu");
    }

    std::size_t strategy_space_size() const { return std::size_t{1} << settings_.size(); }

    friend bool operator==(const SettingMenu& lhs, const SettingMenu& rhs) {
        return lhs.settings_ == rhs.settings_;
    }

  private:
    std::vector<Angle> settings_;
};

/// One pair's instruction set: a total map from menu settings to outcomes,
/// obeyed identically by both photons.
struct SharedStrategy {
    std::vector<Outcome> outcomes;  // one per menu position

    Outcome respond(std::size_t menu_index) const { return outcomes.at(menu_index); }

    /// "TTR"-style key, one letter per menu position.
    std::string key() const {
        std::string k;
        k.reserve(outcomes.size());
        for (Outcome o : outcomes) {
            k.push_back(outcome_char(o));
        }
        return k;
    }

    friend bool operator==(const SharedStrategy& lhs, const SharedStrategy& rhs) {
        return lhs.outcomes == rhs.outcomes;
    }
};

/// Independent instruction sets for the two sides. The general local model
/// before perfect correlations are imposed.
struct ProductStrategy {
    std::vector<Outcome> side_a;
    std::vector<Outcome> side_b;

    friend bool operator==(const ProductStrategy& lhs, const ProductStrategy& rhs) {
        return lhs.side_a == rhs.side_a && lhs.side_b == rhs.side_b;
    }
};

namespace detail {

// Strategies are numbered lexicographically: menu position 0 is the most
// significant digit and Transmit (bit 0) sorts before Reflect (bit 1), so
// index 0 is the all-Transmit strategy.
inline Outcome strategy_bit(std::size_t strategy_index, std::size_t menu_index,
                            std::size_t menu_size) {
    const std::size_t bit = (strategy_index >> (menu_size - 1 - menu_index)) & 1u;
    return bit == 0 ? Outcome::Transmit : Outcome::Reflect;
}

inline std::vector<Outcome> strategy_outcomes(std::size_t strategy_index, std::size_t menu_size) {
    std::vector<Outcome> outcomes(menu_size);
    for (std::size_t j = 0; j < menu_size; ++j) {
        outcomes[j] = strategy_bit(strategy_index, j, menu_size);
    }
    return outcomes;
}

}  // namespace detail

inline std::vector<SharedStrategy> enumerate_shared_strategies(const SettingMenu& menu) {
    const std::size_t k = menu.size();
    std::vector<SharedStrategy> out;
    out.reserve(std::size_t{1} << k);
    for (std::size_t i = 0; i < (std::size_t{1} << k); ++i) {
        out.push_back(SharedStrategy{detail::strategy_outcomes(i, k)});
    }
    return out;
}

inline std::vector<ProductStrategy> enumerate_product_strategies(const SettingMenu& menu) {
    const std::size_t k = menu.size();
    std::vector<ProductStrategy> out;
    out.reserve(std::size_t{1} << (2 * k));
    for (std::size_t a = 0; a < (std::size_t{1} << k); ++a) {
        for (std::size_t b = 0; b < (std::size_t{1} << k); ++b) {
            out.push_back(ProductStrategy{detail::strategy_outcomes(a, k),
                                          detail::strategy_outcomes(b, k)});
        }
    }
    return out;
}

/// Keeps the product strategies that can never show one photon transmitted
/// and the other reflected at a common setting, i.e. those with identical
/// side-A and side-B instructions. This is the step where perfect
/// correlations plus locality force the two photons to share one strategy.
inline std::vector<SharedStrategy> filter_perfectly_correlated(
    const std::vector<ProductStrategy>& strategies, const SettingMenu& menu) {
    std::vector<SharedStrategy> out;
    for (const ProductStrategy& s : strategies) {
        if (s.side_a.size() != menu.size() || s.side_b.size() != menu.size()) {
            throw std::invalid_argument("product strategy does not match the menu size");
        }
        if (s.side_a == s.side_b) {
            out.push_back(SharedStrategy{s.side_a});
        }
    }
    return out;
}

/// Which polarizer channel a selector clause counts: Parallel counts pairs
/// prepared to Transmit at the setting, Perpendicular counts Reflect.
enum class Polarity : unsigned char { Parallel, Perpendicular };

/// One N(...) subscript: a setting together with the channel to count.
struct SelectorClause {
    Angle setting;
    Polarity polarity = Polarity::Parallel;
};

using Selector = std::vector<SelectorClause>;

/// Integer bookkeeping for one finite emission run: how many pairs left the
/// source carrying each strategy. Total N0; all derived counts stay exact.
class StrategyCensus {
  public:
    StrategyCensus(SettingMenu menu, std::vector<std::uint64_t> counts)
        : menu_(std::move(menu)), counts_(std::move(counts)) {
        if (counts_.size() != menu_.strategy_space_size()) {
            throw std::invalid_argument("census needs one count per strategy (2^k entries)");
        }
        total_ = 0;
        for (std::uint64_t c : counts_) {
            total_ += c;
        }
    }

    static StrategyCensus uniform(SettingMenu menu, std::uint64_t count_per_strategy) {
        std::vector<std::uint64_t> counts(menu.strategy_space_size(), count_per_strategy);
        return StrategyCensus(std::move(menu), std::move(counts));
    }

    static StrategyCensus concentrated(SettingMenu menu, const SharedStrategy& strategy,
                                       std::uint64_t pairs) {
        std::vector<std::uint64_t> counts(menu.strategy_space_size(), 0);
        if (strategy.outcomes.size() != menu.size()) {
            throw std::invalid_argument("strategy does not match the menu size");
        }
        std::size_t index = 0;
        for (Outcome o : strategy.outcomes) {
            index = (index << 1) | (o == Outcome::Reflect ? 1u : 0u);
        }
        counts[index] = pairs;
        return StrategyCensus(std::move(menu), std::move(counts));
    }

    const SettingMenu& menu() const { return menu_; }
    std::uint64_t total() const { return total_; }
    std::size_t strategy_space_size() const { return counts_.size(); }
    std::uint64_t count_at(std::size_t strategy_index) const { return counts_.at(strategy_index); }

    SharedStrategy strategy_at(std::size_t strategy_index) const {
        return SharedStrategy{detail::strategy_outcomes(strategy_index, menu_.size())};
    }

  private:
    SettingMenu menu_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

/// N(...) evaluator: the number of emitted pairs whose instructions satisfy
/// every clause. An empty selector counts everything, so it returns N0.
inline std::uint64_t census_count(const StrategyCensus& census, const Selector& selector) {
    const std::size_t k = census.menu().size();
    // Precompute bit positions; unknown settings are an error, not zero.
    std::vector<std::pair<std::size_t, Outcome>> clauses;
    clauses.reserve(selector.size());
    for (const SelectorClause& clause : selector) {
        const std::size_t pos = census.menu().index_of(clause.setting);
        const Outcome wanted =
            clause.polarity == Polarity::Parallel ? Outcome::Transmit : Outcome::Reflect;
        clauses.emplace_back(pos, wanted);
    }
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < census.strategy_space_size(); ++i) {
        bool match = true;
        for (const auto& [pos, wanted] : clauses) {
            if (detail::strategy_bit(i, pos, k) != wanted) {
                match = false;
                break;
            }
        }
        if (match) {
            total += census.count_at(i);
        }
    }
    return total;
}

/// Draws one emitted pair's strategy with probability count/N0.
inline SharedStrategy sample_pair(const StrategyCensus& census, PhiloxRng& rng) {
    if (census.total() == 0) {
        throw std::invalid_argument("cannot sample from an empty census");
    }
    std::uint64_t r = rng.next_below(census.total());
    for (std::size_t i = 0; i < census.strategy_space_size(); ++i) {
        const std::uint64_t c = census.count_at(i);
        if (r < c) {
            return census.strategy_at(i);
        }
        r -= c;
    }
    throw std::logic_error("census counts inconsistent with total");
}

// --- census file format -----------------------------------------------------
//
// {"menu_deg": [0, 30, 60], "counts": {"TTT": 100, "TTR": 100, ...}}
//
// Keys are T/R strings in menu order; strategies absent from "counts" are
// taken as zero.

inline StrategyCensus census_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("menu_deg") || !j.contains("counts")) {
        throw std::invalid_argument("census JSON needs 'menu_deg' and 'counts'");
    }
    std::vector<Angle> settings;
    for (const auto& v : j.at("menu_deg")) {
        settings.push_back(Angle::from_degrees(v.get<double>()));
    }
    SettingMenu menu(std::move(settings));
    const std::size_t k = menu.size();
    std::vector<std::uint64_t> counts(menu.strategy_space_size(), 0);
    for (const auto& [key, value] : j.at("counts").items()) {
        if (key.size() != k) {
            throw std::invalid_argument("census strategy key '" + key +
                                        "' does not match the menu size");
        }
        std::size_t index = 0;
        for (char c : key) {
            index = (index << 1) | (outcome_from_char(c) == Outcome::Reflect ? 1u : 0u);
        }
        if (!value.is_number_integer() ||
            (!value.is_number_unsigned() && value.get<std::int64_t>() < 0)) {
            throw std::invalid_argument("census count for '" + key +
                                        "' must be a nonnegative integer");
        }
        counts[index] = value.get<std::uint64_t>();
    }
    return StrategyCensus(std::move(menu), std::move(counts));
}

inline nlohmann::ordered_json census_to_json(const StrategyCensus& census) {
    nlohmann::ordered_json j;
    j["menu_deg"] = nlohmann::ordered_json::array();
    for (Angle a : census.menu().settings()) {
        j["menu_deg"].push_back(a.degrees());
    }
    nlohmann::ordered_json counts = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < census.strategy_space_size(); ++i) {
        counts[census.strategy_at(i).key()] = census.count_at(i);
    }
    j["counts"] = std::move(counts);
    return j;
}

}  // namespace bellsim

#endif  // BELLSIM_LHV_HPP
