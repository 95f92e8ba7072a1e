// Copyright 2026 The eavesim developers.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: `simulate` runs the shot routine and writes a
// transcript plus a detection report, `curves` emits analytic
// mutual-information tables, `detect` re-analyzes a transcript. Exit codes:
// 0 success, 2 configuration error, 3 I/O error, 4 transcript parse error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eavesim/detection.hpp"
#include "eavesim/infotheory.hpp"
#include "eavesim/protocol.hpp"
#include "eavesim/transcript_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitParse = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using eavesim::io::format_number;

// Loads the optional JSON config file and back-fills every option the
// command line did not set explicitly; flags win.
void apply_config_file(const std::string &path, CLI::App *cmd) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read config file: " + path);
    nlohmann::json config;
    try {
        config = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    if (!config.is_object())
        throw ConfigError("config file " + path + ": expected a JSON object");
    for (const auto &[key, value] : config.items()) {
        // Config keys use underscores where flags use dashes.
        std::string flag = "--" + key;
        for (auto &ch : flag)
            if (ch == '_')
                ch = '-';
        CLI::Option *opt = cmd->get_option_no_throw(flag);
        if (opt == nullptr && flag == "--apparatus-d")
            opt = cmd->get_option_no_throw("--apparatus-D");
        if (opt == nullptr)
            throw ConfigError("config field '" + key +
                              "' is not an option of this command");
        if (opt->count() > 0)
            continue; // explicit flag wins
        std::stringstream text;
        if (value.is_string())
            text << value.get<std::string>();
        else if (value.is_array()) {
            std::string joined;
            for (const auto &item : value) {
                if (!joined.empty())
                    joined += ',';
                joined += item.dump();
            }
            text << joined;
        } else
            text << value.dump();
        try {
            opt->add_result(text.str());
            opt->run_callback();
        } catch (const CLI::Error &e) {
            throw ConfigError("config field '" + key + "': " + e.what());
        }
    }
}

void require_probability(double v, const std::string &field, double hi = 1.0) {
    if (!(v >= 0.0 && v <= hi))
        throw ConfigError("field '" + field + "' must lie in [0, " +
                          format_number(hi) + "], got " + format_number(v));
}

std::ofstream open_output(const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write output file: " + path);
    return out;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string config_path;
    std::uint64_t seed = 1;
    std::int64_t shots = 1000;
    double p_announce = 0.1;
    double apparatus_d = 0.0;
    double attack_d = -1.0; // negative: no attack
    int bit = 0;
    std::string out;
};

int run_simulate(const SimulateArgs &args) {
    require_probability(args.p_announce, "p-announce");
    require_probability(args.apparatus_d, "apparatus-D", 0.5);
    if (args.shots < 1)
        throw ConfigError("field 'shots' must be at least 1");
    if (args.bit != 0 && args.bit != 1)
        throw ConfigError("field 'bit' must be 0 or 1");
    if (args.attack_d >= 0.0)
        require_probability(args.attack_d, "attack-d", 0.5);
    if (args.out.empty())
        throw ConfigError("field 'out' is required");

    eavesim::protocol::ProtocolConfig config;
    config.n_shots = args.shots;
    config.p_announce = args.p_announce;
    config.apparatus =
        eavesim::channel::ChannelParams::symmetric_noise(args.apparatus_d);
    config.seed = args.seed;

    std::optional<eavesim::eavesdropper::ProbeAttack> attack;
    if (args.attack_d >= 0.0)
        attack = eavesim::eavesdropper::build_probe_attack(args.attack_d);

    eavesim::Rng rng(config.seed);
    const auto transcript =
        eavesim::protocol::run_protocol(config, args.bit, attack, rng);

    {
        auto out = open_output(args.out);
        eavesim::io::write_transcript(out, transcript);
        if (!out)
            throw IoError("failed while writing " + args.out);
    }
    const auto report = eavesim::detection::build_detection_report(transcript);
    const std::string report_path = args.out + ".report.json";
    {
        auto out = open_output(report_path);
        out << eavesim::io::render_report_json(report) << '\n';
    }

    // Bob's channel model: configured apparatus noise composed with the
    // observed result-announcement mismatch rate.
    const double observed = std::min(report.d_mean, 0.5);
    const double assumed =
        eavesim::channel::compose_mismatch(args.apparatus_d, observed);
    const auto decode =
        eavesim::protocol::bob_aggregate_decode(transcript, assumed);
    std::cout << "decoded_bit=" << decode.bit
              << " confidence=" << format_number(decode.confidence) << '\n'
              << "transcript=" << args.out << '\n'
              << "report=" << report_path << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// curves
// ---------------------------------------------------------------------------

struct CurvesArgs {
    std::string config_path;
    std::string kind;
    double grid_step = 0.025;
    std::vector<std::int64_t> k_list = {1, 3, 5, 7};
    std::int64_t shots = 50;
    double p_announce = 0.3;
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 0; // accepted for interface uniformity; unused
};

std::vector<double> strength_grid(double step) {
    if (!(step > 0.0 && step <= 0.5))
        throw ConfigError("field 'grid-step' must lie in (0, 1/2]");
    const auto n = static_cast<std::int64_t>(std::llround(0.5 / step));
    if (n < 1)
        throw ConfigError("field 'grid-step' produces an empty grid");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n) + 1);
    for (std::int64_t i = 0; i < n; ++i)
        grid.push_back(static_cast<double>(i) * step);
    grid.push_back(0.5);
    return grid;
}

void write_table(std::ostream &os, const std::string &format,
                 const std::string &kind, const std::string &params,
                 const std::vector<std::string> &columns,
                 const std::vector<std::vector<double>> &rows) {
    if (format == "csv") {
        os << "# eavesim.curves v1 kind=" << kind;
        if (!params.empty())
            os << ' ' << params;
        os << '\n';
        for (std::size_t c = 0; c < columns.size(); ++c)
            os << (c ? "," : "") << columns[c];
        os << '\n';
        for (const auto &row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                os << (c ? "," : "") << format_number(row[c]);
            os << '\n';
        }
        return;
    }
    nlohmann::ordered_json header;
    header["format"] = "eavesim.curves";
    header["version"] = 1;
    header["kind"] = kind;
    if (!params.empty())
        header["params"] = params;
    header["columns"] = columns;
    os << header.dump() << '\n';
    for (const auto &row : rows) {
        std::string line = "{";
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c)
                line += ',';
            line += "\"" + columns[c] + "\":" + format_number(row[c]);
        }
        line += "}";
        os << line << '\n';
    }
}

int run_curves(const CurvesArgs &args) {
    if (args.kind != "eve_info" && args.kind != "bc_info" &&
        args.kind != "fuchs_bound")
        throw ConfigError(
            "field 'kind' must be one of eve_info, bc_info, fuchs_bound");
    if (args.format != "csv" && args.format != "json-lines")
        throw ConfigError("field 'format' must be csv or json-lines");
    const auto grid = strength_grid(args.grid_step);

    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string params;
    if (args.kind == "eve_info") {
        if (args.k_list.empty())
            throw ConfigError("field 'k-list' must not be empty");
        columns.push_back("d");
        for (const auto k : args.k_list) {
            if (k < 0)
                throw ConfigError("field 'k-list' entries must be >= 0");
            columns.push_back("I_" + std::to_string(k));
        }
        for (const double d : grid) {
            std::vector<double> row = {d};
            for (const auto k : args.k_list)
                row.push_back(eavesim::infotheory::mutual_info_be_k(k, d));
            rows.push_back(std::move(row));
        }
    } else if (args.kind == "bc_info") {
        if (args.shots < 1)
            throw ConfigError("field 'shots' must be at least 1");
        require_probability(args.p_announce, "p-announce");
        params = "N=" + std::to_string(args.shots) +
                 " p_a=" + format_number(args.p_announce);
        columns = {"D", "I_BC"};
        for (const double D : grid)
            rows.push_back({D, eavesim::infotheory::mutual_info_bc(
                                   args.shots, args.p_announce, D)
                                   .value});
    } else {
        columns = {"d", "bound"};
        for (const double d : grid)
            rows.push_back({d, eavesim::infotheory::fuchs_bound(d)});
    }

    if (args.out.empty()) {
        write_table(std::cout, args.format, args.kind, params, columns, rows);
    } else {
        auto out = open_output(args.out);
        write_table(out, args.format, args.kind, params, columns, rows);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// detect
// ---------------------------------------------------------------------------

struct DetectArgs {
    std::string config_path;
    std::string in;
    double grid_step = 1e-4;
    double sigmas = 2.0;
    double mass = 0.95;
    std::string out;
    std::uint64_t seed = 0; // accepted for interface uniformity; unused
};

int run_detect(const DetectArgs &args) {
    if (args.in.empty())
        throw ConfigError("field 'in' is required");
    if (!(args.mass > 0.0 && args.mass < 1.0))
        throw ConfigError("field 'mass' must lie in (0, 1)");
    if (args.sigmas < 0.0)
        throw ConfigError("field 'sigmas' must be nonnegative");
    if (!(args.grid_step > 0.0 && args.grid_step <= 0.5))
        throw ConfigError("field 'grid-step' must lie in (0, 1/2]");

    std::ifstream in(args.in);
    if (!in)
        throw IoError("cannot read transcript: " + args.in);
    const auto transcript = eavesim::io::parse_transcript(in);

    eavesim::detection::DetectionOptions options;
    options.num_sigmas = args.sigmas;
    options.credible_mass = args.mass;
    options.grid_step = args.grid_step;
    const auto report =
        eavesim::detection::build_detection_report(transcript, options);
    const std::string json = eavesim::io::render_report_json(report);
    if (args.out.empty()) {
        std::cout << json << '\n';
    } else {
        auto out = open_output(args.out);
        out << json << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Simulator and analysis toolkit for a quantum "
                 "eavesdropper-detection protocol"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App *simulate =
        app.add_subcommand("simulate", "Run the shot routine and write a "
                                       "transcript plus a detection report");
    simulate->add_option("--config", sim.config_path,
                         "JSON config file; explicit flags override it");
    simulate->add_option("--seed", sim.seed, "Run seed");
    simulate->add_option("--shots", sim.shots, "Number of shots N");
    simulate->add_option("--p-announce", sim.p_announce,
                         "Bit-announcement probability p_a");
    simulate->add_option("--apparatus-D", sim.apparatus_d,
                         "Apparatus mismatch probability D");
    simulate->add_option("--attack-d", sim.attack_d,
                         "Eavesdropper strength d (omit for no attack)");
    simulate->add_option("--bit", sim.bit, "Message bit b");
    simulate->add_option("--out", sim.out, "Transcript output path");

    CurvesArgs cur;
    CLI::App *curves = app.add_subcommand(
        "curves", "Emit analytic mutual-information tables");
    curves->add_option("--config", cur.config_path,
                       "JSON config file; explicit flags override it");
    curves->add_option("--kind", cur.kind,
                       "One of eve_info, bc_info, fuchs_bound");
    curves->add_option("--grid-step", cur.grid_step,
                       "Strength grid step over [0, 1/2]");
    curves->add_option("--k-list", cur.k_list,
                       "Announcement counts for eve_info columns")
        ->delimiter(',');
    curves->add_option("--shots", cur.shots, "N for bc_info");
    curves->add_option("--p-announce", cur.p_announce, "p_a for bc_info");
    curves->add_option("--out", cur.out, "Output path (default stdout)");
    curves->add_option("--format", cur.format, "csv or json-lines");
    curves->add_option("--seed", cur.seed, "Accepted for uniformity");

    DetectArgs det;
    CLI::App *detect = app.add_subcommand(
        "detect", "Analyze a transcript and print the detection report");
    detect->add_option("--config", det.config_path,
                       "JSON config file; explicit flags override it");
    detect->add_option("--in", det.in, "Transcript path");
    detect->add_option("--grid-step", det.grid_step, "Posterior grid step");
    detect->add_option("--sigmas", det.sigmas,
                       "Frequentist bound width in standard errors");
    detect->add_option("--mass", det.mass, "Credible mass for d_hat");
    detect->add_option("--out", det.out, "Report path (default stdout)");
    detect->add_option("--seed", det.seed, "Accepted for uniformity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) { // --help
            app.exit(e);
            return kExitOk;
        }
        std::cerr << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (app.got_subcommand(simulate)) {
            if (!sim.config_path.empty())
                apply_config_file(sim.config_path, simulate);
            return run_simulate(sim);
        }
        if (app.got_subcommand(curves)) {
            if (!cur.config_path.empty())
                apply_config_file(cur.config_path, curves);
            return run_curves(cur);
        }
        if (!det.config_path.empty())
            apply_config_file(det.config_path, detect);
        return run_detect(det);
    } catch (const eavesim::io::ParseError &e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError &e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
}
