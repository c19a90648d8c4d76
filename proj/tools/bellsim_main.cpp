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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellsim/bellsim.hpp"

namespace {

using bellsim::Angle;
using bellsim::detail::parse_double;

std::uint64_t parse_u64(const std::string& text, const char* what) {
    std::uint64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw std::invalid_argument(std::string("invalid ") + what + ": '" + text + "'");
    }
    return value;
}

Angle parse_angle(const std::string& text, const char* what) {
    return Angle::from_degrees(parse_double(text, what));
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    return nlohmann::json::parse(in);
}

void write_file(const std::string& path, const std::string& payload) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path);
    }
    out << payload;
}

void emit(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload;
    } else {
        write_file(out_path, payload);
    }
}

std::string dump(const nlohmann::ordered_json& j) {
    return j.dump(2) + "\n";
}

struct PredictArgs {
    std::string angle_a, angle_b, pairs, visibility = "1", format = "json", out;
};

struct InequalityArgs {
    std::string a, b, c, census, out;
};

struct SimulateArgs {
    std::string config_file;
    std::string mode, ordering = "spacelike", pairs, seed = "0", visibility = "1";
    std::string first_mover = "A", census, format = "json", out;
    std::vector<std::string> angles;
    unsigned threads = 1;
};

struct TripleArgs {
    std::string a, b, c, out;
};

struct SweepArgs {
    std::string min, max, step, format = "json", out;
};

struct MaximizeArgs {
    std::string grid_step = "1", tol = "1e-4", out;
};

void run_predict(const PredictArgs& args) {
    const Angle a = parse_angle(args.angle_a, "angle");
    const Angle b = parse_angle(args.angle_b, "angle");
    const double visibility = parse_double(args.visibility, "visibility");
    const auto joint = bellsim::joint_distribution(a, b, visibility);
    std::optional<bellsim::ExpectedCounts> counts;
    std::uint64_t pairs = 0;
    if (!args.pairs.empty()) {
        pairs = parse_u64(args.pairs, "pair count");
        counts = bellsim::predict_counts(a, b, pairs, visibility);
    }
    if (args.format == "csv") {
        std::string csv = counts ? "outcome_a,outcome_b,probability,expected_count\n"
                                 : "outcome_a,outcome_b,probability\n";
        const char* labels[4] = {"T,T", "T,R", "R,T", "R,R"};
        const double probs[4] = {joint.tt, joint.tr, joint.rt, joint.rr};
        const double expect[4] = {counts ? counts->tt : 0, counts ? counts->tr : 0,
                                  counts ? counts->rt : 0, counts ? counts->rr : 0};
        for (int i = 0; i < 4; ++i) {
            csv += labels[i];
            csv += ',';
            csv += bellsim::detail::format_double(probs[i]);
            if (counts) {
                csv += ',';
                csv += bellsim::detail::format_double(expect[i]);
            }
            csv += '\n';
        }
        emit(csv, args.out);
        return;
    }
    if (args.format != "json") {
        throw std::invalid_argument("format must be 'json' or 'csv'");
    }
    nlohmann::ordered_json j;
    j["setting_a_deg"] = a.degrees();
    j["setting_b_deg"] = b.degrees();
    j["visibility"] = visibility;
    j["probabilities"] = {{"TT", joint.tt}, {"TR", joint.tr}, {"RT", joint.rt}, {"RR", joint.rr}};
    if (counts) {
        j["pairs"] = pairs;
        j["expected_counts"] = {
            {"TT", counts->tt}, {"TR", counts->tr}, {"RT", counts->rt}, {"RR", counts->rr}};
    }
    emit(dump(j), args.out);
}

void run_inequality(const InequalityArgs& args) {
    const bellsim::SettingTriple triple(parse_angle(args.a, "angle"), parse_angle(args.b, "angle"),
                                        parse_angle(args.c, "angle"));
    bellsim::InequalityReport report;
    if (args.census.empty()) {
        report = bellsim::wigner_quantum(triple);
    } else {
        const auto census = bellsim::census_from_json(load_json(args.census));
        report = bellsim::wigner_counts(census, triple);
    }
    emit(dump(bellsim::report_to_json(report)), args.out);
}

bellsim::ExperimentConfig config_from_flags(const SimulateArgs& args) {
    bellsim::ExperimentConfig config;
    if (args.mode == "quantum") {
        config.mode = bellsim::SourceMode::Quantum;
    } else if (args.mode == "lhv") {
        config.mode = bellsim::SourceMode::Lhv;
    } else {
        throw std::invalid_argument("--mode must be 'quantum' or 'lhv'");
    }
    if (args.ordering == "spacelike") {
        config.ordering = bellsim::Ordering::Spacelike;
    } else if (args.ordering == "timelike") {
        config.ordering = bellsim::Ordering::Timelike;
    } else {
        throw std::invalid_argument("--ordering must be 'spacelike' or 'timelike'");
    }
    if (args.angles.empty()) {
        throw std::invalid_argument("simulate needs at least one --angles A,B pair");
    }
    for (const std::string& pair : args.angles) {
        const auto comma = pair.find(',');
        if (comma == std::string::npos || pair.find(',', comma + 1) != std::string::npos) {
            throw std::invalid_argument("--angles expects 'A,B' in degrees, got '" + pair + "'");
        }
        config.setting_pairs.push_back({parse_angle(pair.substr(0, comma), "angle"),
                                        parse_angle(pair.substr(comma + 1), "angle")});
    }
    if (args.pairs.empty()) {
        throw std::invalid_argument("simulate needs --pairs");
    }
    config.pairs_per_setting = parse_u64(args.pairs, "pair count");
    config.seed = parse_u64(args.seed, "seed");
    config.visibility = parse_double(args.visibility, "visibility");
    if (args.first_mover == "A") {
        config.first_mover = bellsim::FirstMover::SideA;
    } else if (args.first_mover == "B") {
        config.first_mover = bellsim::FirstMover::SideB;
    } else {
        throw std::invalid_argument("--first-mover must be 'A' or 'B'");
    }
    if (!args.census.empty()) {
        config.census = bellsim::census_from_json(load_json(args.census));
    }
    config.validate();
    return config;
}

void run_simulate(const SimulateArgs& args) {
    bellsim::ExperimentConfig config;
    if (!args.config_file.empty()) {
        if (!args.mode.empty() || !args.pairs.empty() || !args.angles.empty() ||
            !args.census.empty()) {
            throw std::invalid_argument("--config cannot be combined with experiment flags");
        }
        config = bellsim::config_from_json(load_json(args.config_file));
    } else {
        config = config_from_flags(args);
    }
    const bellsim::TrialLog log = bellsim::run_experiment(config, args.threads);
    const std::string summary = dump(bellsim::triallog_summary_json(log));
    if (!args.out.empty()) {
        write_file(args.out + ".csv", bellsim::triallog_to_csv(log));
        write_file(args.out + ".json", summary);
        return;
    }
    if (args.format == "csv") {
        std::cout << bellsim::triallog_to_csv(log);
    } else if (args.format == "json") {
        std::cout << summary;
    } else {
        throw std::invalid_argument("format must be 'json' or 'csv'");
    }
}

void run_bound(const TripleArgs& args) {
    const bellsim::SettingTriple triple(parse_angle(args.a, "angle"), parse_angle(args.b, "angle"),
                                        parse_angle(args.c, "angle"));
    const bellsim::BoundResult result = bellsim::local_bound(triple);
    nlohmann::ordered_json j;
    j["angles_deg"] = {{"a", triple.a.degrees()}, {"b", triple.b.degrees()},
                       {"c", triple.c.degrees()}};
    j["max_margin"] = result.max_margin;
    j["best_strategy"] = result.best_strategy.key();
    j["vertices_examined"] = result.vertices_examined;
    emit(dump(j), args.out);
}

void run_sweep(const SweepArgs& args) {
    const double lo = parse_double(args.min, "sweep bound");
    const double hi = parse_double(args.max, "sweep bound");
    const double step = parse_double(args.step, "sweep step");
    const bellsim::SweepResult sweep = bellsim::sweep_symmetric(lo, hi, step);
    if (args.format == "csv") {
        emit(bellsim::sweep_to_csv(sweep), args.out);
        return;
    }
    if (args.format != "json") {
        throw std::invalid_argument("format must be 'json' or 'csv'");
    }
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const bellsim::SweepRow& row : sweep.rows) {
        rows.push_back({{"theta_deg", row.theta_deg},
                        {"lhs", row.lhs},
                        {"rhs", row.rhs},
                        {"margin", row.margin}});
    }
    emit(dump(rows), args.out);
}

void run_maximize(const MaximizeArgs& args) {
    const double step = parse_double(args.grid_step, "grid step");
    const double tol = parse_double(args.tol, "tolerance");
    const bellsim::MaximizeResult result = bellsim::maximize_violation(step, tol);
    nlohmann::ordered_json j;
    j["theta1_deg"] = result.theta1_deg;
    j["theta2_deg"] = result.theta2_deg;
    j["margin"] = result.margin;
    j["evaluations"] = result.evaluations;
    emit(dump(j), args.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entangled photon-pair simulator and Wigner-D'Espagnat inequality toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "bellsim 0.1.0");

    PredictArgs predict_args;
    auto* predict = app.add_subcommand(
        "predict", "Joint outcome probabilities (and expected counts) for one setting pair");
    predict->add_option("--angle-a", predict_args.angle_a, "side-A polarizer angle, degrees")
        ->required();
    predict->add_option("--angle-b", predict_args.angle_b, "side-B polarizer angle, degrees")
        ->required();
    predict->add_option("--pairs", predict_args.pairs, "emitted pair count for expected counts");
    predict->add_option("--visibility", predict_args.visibility, "source visibility in [0,1]");
    predict->add_option("--format", predict_args.format, "output format: json|csv");
    predict->add_option("--out", predict_args.out, "write output to this file");

    InequalityArgs inequality_args;
    auto* inequality = app.add_subcommand(
        "inequality", "Evaluate the inequality: quantum form, or count form with --census");
    inequality->add_option("--a", inequality_args.a, "setting a, degrees")->required();
    inequality->add_option("--b", inequality_args.b, "setting b, degrees")->required();
    inequality->add_option("--c", inequality_args.c, "setting c, degrees")->required();
    inequality->add_option("--census", inequality_args.census, "census JSON file (count form)");
    inequality->add_option("--out", inequality_args.out, "write output to this file");

    SimulateArgs simulate_args;
    auto* simulate =
        app.add_subcommand("simulate", "Run a seeded Monte Carlo photon-pair experiment");
    simulate->add_option("--config", simulate_args.config_file, "experiment config JSON file");
    simulate->add_option("--mode", simulate_args.mode, "source: quantum|lhv");
    simulate->add_option("--ordering", simulate_args.ordering, "spacelike|timelike");
    simulate->add_option("--pairs", simulate_args.pairs, "pairs per setting pair");
    simulate->add_option("--seed", simulate_args.seed, "64-bit master seed");
    simulate->add_option("--angles", simulate_args.angles,
                         "setting pair 'A,B' in degrees (repeatable)");
    simulate->add_option("--census", simulate_args.census, "census JSON file (lhv mode)");
    simulate->add_option("--visibility", simulate_args.visibility, "source visibility in [0,1]");
    simulate->add_option("--first-mover", simulate_args.first_mover,
                         "who measures first in timelike mode: A|B");
    simulate->add_option("--threads", simulate_args.threads,
                         "worker threads (does not change the output)");
    simulate->add_option("--format", simulate_args.format,
                         "stdout format when --out is absent: json|csv");
    simulate->add_option("--out", simulate_args.out,
                         "output prefix; writes PREFIX.csv and PREFIX.json");

    TripleArgs bound_args;
    auto* bound = app.add_subcommand(
        "bound", "Exact local bound: margin maximized over all instruction sets");
    bound->add_option("--a", bound_args.a, "setting a, degrees")->required();
    bound->add_option("--b", bound_args.b, "setting b, degrees")->required();
    bound->add_option("--c", bound_args.c, "setting c, degrees")->required();
    bound->add_option("--out", bound_args.out, "write output to this file");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand(
        "sweep", "Sweep the symmetric arrangement (a,b) = (b,c) = theta");
    sweep->add_option("--min", sweep_args.min, "smallest theta, degrees")->required();
    sweep->add_option("--max", sweep_args.max, "largest theta, degrees")->required();
    sweep->add_option("--step", sweep_args.step, "theta increment, degrees")->required();
    sweep->add_option("--format", sweep_args.format, "output format: json|csv");
    sweep->add_option("--out", sweep_args.out, "write output to this file");

    MaximizeArgs maximize_args;
    auto* maximize = app.add_subcommand(
        "maximize", "Search for the angles with the largest quantum violation");
    maximize->add_option("--grid-step", maximize_args.grid_step, "coarse grid step, degrees");
    maximize->add_option("--tol", maximize_args.tol, "refinement tolerance, degrees");
    maximize->add_option("--out", maximize_args.out, "write output to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // 0 covers --help/--version
    }

    try {
        if (predict->parsed()) {
            run_predict(predict_args);
        } else if (inequality->parsed()) {
            run_inequality(inequality_args);
        } else if (simulate->parsed()) {
            run_simulate(simulate_args);
        } else if (bound->parsed()) {
            run_bound(bound_args);
        } else if (sweep->parsed()) {
            run_sweep(sweep_args);
        } else if (maximize->parsed()) {
            run_maximize(maximize_args);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
