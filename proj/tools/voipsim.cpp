// voipsim: discrete-event simulator comparing router queuing disciplines
// (FIFO, PQ, WFQ) by their effect on VoIP delay, jitter, and loss.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "voipsim/voipsim.hpp"

namespace {

namespace fs = std::filesystem;
using namespace voipsim;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write output file '" + path.string() + "'");
    out << content;
}

ScenarioConfig load_scenario(const std::string& path) {
    ParseResult parsed = parse_scenario(read_file(path));
    if (!parsed.ok()) {
        throw ValidationError(path + ": invalid scenario\n" + parsed.diagnostics_text());
    }
    return std::move(*parsed.config);
}

struct Overrides {
    std::string qdisc;
    std::optional<double> duration;
    std::optional<uint64_t> seed;
    std::string out_dir;
};

void apply_overrides(ScenarioConfig& cfg, const Overrides& ov) {
    if (!ov.qdisc.empty()) {
        auto d = discipline_from_string(ov.qdisc);
        if (!d) throw ValidationError("unknown qdisc '" + ov.qdisc + "' (expected fifo, pq, or wfq)");
        cfg.qdisc.discipline = *d;
    }
    if (ov.duration) cfg.duration_s = *ov.duration;
    if (ov.seed) cfg.seed = *ov.seed;
    if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
    auto diags = validate_scenario(cfg);
    if (!diags.empty()) {
        std::string text;
        for (const auto& d : diags) text += to_string(d) + "\n";
        throw ValidationError("overrides left the scenario invalid:\n" + text);
    }
}

fs::path artifact_path(const ScenarioConfig& cfg, const char* suffix) {
    return fs::path(cfg.out_dir) / (cfg.name + "-" + to_string(cfg.qdisc.discipline) + suffix);
}

void write_run_artifacts(const RunArtifacts& run) {
    write_file(artifact_path(run.config, "-timeseries.csv"), run.timeseries_csv);
    write_file(artifact_path(run.config, "-summary.kv"), run.summary_kv);
}

int cmd_run(const std::string& scenario_path, const Overrides& ov) {
    ScenarioConfig cfg = load_scenario(scenario_path);
    apply_overrides(cfg, ov);
    RunArtifacts run = run_scenario(cfg);
    write_run_artifacts(run);
    std::cout << run_table(run);
    std::cout << "wrote " << artifact_path(cfg, "-timeseries.csv").string() << "\n";
    std::cout << "wrote " << artifact_path(cfg, "-summary.kv").string() << "\n";
    return 0;
}

int cmd_compare(const std::string& scenario_path, const Overrides& ov, bool serial) {
    ScenarioConfig cfg = load_scenario(scenario_path);
    apply_overrides(cfg, ov);
    ComparisonResult result = compare_scenarios(cfg, /*parallel=*/!serial);
    for (const RunArtifacts& run : result.runs) write_run_artifacts(run);
    const fs::path kv_path = fs::path(cfg.out_dir) / (cfg.name + "-comparison.kv");
    write_file(kv_path, comparison_kv(result));
    std::cout << comparison_table(result);
    std::cout << "wrote " << kv_path.string() << "\n";
    return 0;
}

int cmd_validate(const std::string& scenario_path) {
    ParseResult parsed = parse_scenario(read_file(scenario_path));
    if (!parsed.ok()) {
        std::cerr << scenario_path << ": invalid scenario\n" << parsed.diagnostics_text();
        return 1;
    }
    const ScenarioConfig& cfg = *parsed.config;
    std::cout << scenario_path << ": ok (" << cfg.nodes.size() << " nodes, " << cfg.links.size()
              << " links, " << cfg.traffic.size() << " traffic sources, qdisc "
              << to_string(cfg.qdisc.discipline) << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"voipsim: VoIP QoS under FIFO / PQ / WFQ router queuing"};
    app.require_subcommand(1);

    std::string scenario_path;
    Overrides ov;
    bool serial = false;

    auto* run = app.add_subcommand("run", "simulate one scenario and write CSV + summary");
    run->add_option("--scenario", scenario_path, "scenario file")->required();
    run->add_option("--qdisc", ov.qdisc, "override the discipline: fifo|pq|wfq");
    run->add_option("--duration", ov.duration, "override the simulated duration (seconds)");
    run->add_option("--seed", ov.seed, "override the scenario seed");
    run->add_option("--out", ov.out_dir, "output directory");

    auto* compare = app.add_subcommand("compare", "run fifo, pq, and wfq on the same scenario");
    compare->add_option("--scenario", scenario_path, "scenario file")->required();
    compare->add_option("--duration", ov.duration, "override the simulated duration (seconds)");
    compare->add_option("--seed", ov.seed, "override the scenario seed");
    compare->add_option("--out", ov.out_dir, "output directory");
    compare->add_flag("--serial", serial, "run the three simulations sequentially");

    auto* validate = app.add_subcommand("validate", "parse and validate a scenario file");
    validate->add_option("--scenario", scenario_path, "scenario file")->required();

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(run)) return cmd_run(scenario_path, ov);
        if (app.got_subcommand(compare)) return cmd_compare(scenario_path, ov, serial);
        if (app.got_subcommand(validate)) return cmd_validate(scenario_path);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const InvariantViolation& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
}
