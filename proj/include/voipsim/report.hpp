#pragma once

#include <array>
#include <cstdio>
#include <future>
#include <sstream>
#include <string>

#include "voipsim/metrics.hpp"
#include "voipsim/scenario.hpp"
#include "voipsim/simulation.hpp"
#include "voipsim/util.hpp"

namespace voipsim {

/// Report plus its serialized artifacts for one (scenario, discipline) run.
struct RunArtifacts {
    ScenarioConfig config;
    QosReport report;
    uint64_t scenario_hash = 0;  // qdisc dimension masked
    std::string timeseries_csv;
    std::string summary_kv;
};

/// Per-second throughput series, UTF-8, '.' decimals, fixed column order.
/// Rows ordered by class (enum order, active classes only), then bin.
inline std::string timeseries_csv(const QosReport& report) {
    std::string out = "time_bin_s,class,sent_pps,received_pps\n";
    for (const ClassReport& cr : report.classes) {
        if (!cr.active) continue;
        for (std::size_t bin = 0; bin < cr.sent_pps.size(); ++bin) {
            out += std::to_string(bin);
            out += ',';
            out += to_string(cr.cls);
            out += ',';
            out += std::to_string(cr.sent_pps[bin]);
            out += ',';
            out += std::to_string(cr.received_pps[bin]);
            out += '\n';
        }
    }
    return out;
}

/// Machine-readable summary: one `key value` pair per line. Metrics without
/// samples render as `absent`, never as zero.
inline std::string summary_kv(const RunArtifacts& run) {
    std::ostringstream out;
    const ScenarioConfig& cfg = run.config;
    out << "scenario.name " << cfg.name << "\n";
    out << "scenario.qdisc " << to_string(cfg.qdisc.discipline) << "\n";
    out << "scenario.seed " << cfg.seed << "\n";
    out << "scenario.duration_s " << format_double(cfg.duration_s) << "\n";
    out << "scenario.warmup_s " << format_double(cfg.warmup_s) << "\n";
    out << "scenario.hash " << hash_hex(run.scenario_hash) << "\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("absent"); };
    for (const ClassReport& cr : run.report.classes) {
        if (!cr.active) continue;
        const std::string prefix = to_string(cr.cls);
        out << prefix << ".sent " << cr.counts.sent << "\n";
        out << prefix << ".delivered " << cr.counts.delivered << "\n";
        out << prefix << ".lost " << cr.counts.lost << "\n";
        out << prefix << ".in_flight_at_end " << cr.counts.in_flight_at_end << "\n";
        out << prefix << ".delay_s " << opt(cr.delay_s) << "\n";
        out << prefix << ".jitter_s " << opt(cr.jitter_s) << "\n";
        out << prefix << ".loss_pct " << opt(cr.loss_pct) << "\n";
        out << prefix << ".sent_pps_mean " << format_double(cr.sent_pps_mean) << "\n";
        out << prefix << ".received_pps_mean " << format_double(cr.received_pps_mean) << "\n";
        out << prefix << ".delay_verdict " << to_string(cr.verdicts.delay) << "\n";
        out << prefix << ".jitter_verdict " << to_string(cr.verdicts.jitter) << "\n";
        out << prefix << ".loss_verdict " << to_string(cr.verdicts.loss) << "\n";
    }
    return out.str();
}

namespace detail {

inline std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

inline std::string opt_fixed(const std::optional<double>& v, int decimals) {
    return v ? fixed(*v, decimals) : std::string("absent");
}

}  // namespace detail

/// Human summary of a single run, one row per active class.
inline std::string run_table(const RunArtifacts& run) {
    std::ostringstream out;
    out << "Run: " << run.config.name << "  qdisc=" << to_string(run.config.qdisc.discipline)
        << "  duration=" << format_double(run.config.duration_s) << "s"
        << "  seed=" << run.config.seed << "\n";
    char head[160];
    std::snprintf(head, sizeof(head), "%-12s %12s %12s %10s %12s %16s %16s %12s\n", "class", "delay_s",
                  "jitter_s", "loss_pct", "sent", "delay_verdict", "jitter_verdict", "loss_verdict");
    out << head;
    for (const ClassReport& cr : run.report.classes) {
        if (!cr.active) continue;
        char row[200];
        std::snprintf(row, sizeof(row), "%-12s %12s %12s %10s %12llu %16s %16s %12s\n", to_string(cr.cls),
                      detail::opt_fixed(cr.delay_s, 5).c_str(), detail::opt_fixed(cr.jitter_s, 5).c_str(),
                      detail::opt_fixed(cr.loss_pct, 2).c_str(),
                      static_cast<unsigned long long>(cr.counts.sent), to_string(cr.verdicts.delay),
                      to_string(cr.verdicts.jitter), to_string(cr.verdicts.loss));
        out << row;
    }
    return out.str();
}

/// Executes one scenario and renders its artifacts.
inline RunArtifacts run_scenario(const ScenarioConfig& cfg) {
    RunArtifacts out;
    out.config = cfg;
    out.scenario_hash = scenario_hash_excluding_qdisc(cfg);
    Simulation sim(cfg);
    out.report = sim.run();
    out.timeseries_csv = timeseries_csv(out.report);
    out.summary_kv = summary_kv(out);
    return out;
}

/// One QosReport per discipline from otherwise-identical scenarios.
struct ComparisonResult {
    std::array<RunArtifacts, kDisciplineCount> runs;  // indexed by Discipline

    const RunArtifacts& for_discipline(Discipline d) const { return runs[static_cast<std::size_t>(d)]; }
};

/// Runs the scenario under FIFO, PQ, and WFQ, changing nothing else. The
/// three simulations are independent; `parallel` only chooses whether they
/// share a wall clock, never the results.
inline ComparisonResult compare_scenarios(const ScenarioConfig& base, bool parallel = true) {
    std::array<ScenarioConfig, kDisciplineCount> configs{base, base, base};
    for (std::size_t d = 0; d < kDisciplineCount; ++d) {
        configs[d].qdisc.discipline = static_cast<Discipline>(d);
    }

    ComparisonResult result;
    if (parallel) {
        std::array<std::future<RunArtifacts>, kDisciplineCount> futures;
        for (std::size_t d = 0; d < kDisciplineCount; ++d) {
            futures[d] = std::async(std::launch::async, [&configs, d] { return run_scenario(configs[d]); });
        }
        for (std::size_t d = 0; d < kDisciplineCount; ++d) result.runs[d] = futures[d].get();
    } else {
        for (std::size_t d = 0; d < kDisciplineCount; ++d) result.runs[d] = run_scenario(configs[d]);
    }

    const uint64_t hash = result.runs[0].scenario_hash;
    for (const RunArtifacts& run : result.runs) {
        invariant(run.scenario_hash == hash, "comparison legs diverged outside the qdisc dimension");
    }
    return result;
}

/// Five-row comparison table: jitter, end-to-end delay, received pps,
/// sent pps, loss — one column per discipline, voice class.
inline std::string comparison_table(const ComparisonResult& result) {
    const ScenarioConfig& cfg = result.runs[0].config;
    std::ostringstream out;
    out << "Comparison: " << cfg.name << "  duration=" << format_double(cfg.duration_s) << "s"
        << "  seed=" << cfg.seed << "\n";
    char head[160];
    std::snprintf(head, sizeof(head), "%-38s %12s %12s %12s\n", "Parameter", "FIFO", "PQ", "WFQ");
    out << head;

    auto voice = [&](Discipline d) -> const ClassReport& {
        return result.for_discipline(d).report.for_class(TrafficClass::Voice);
    };
    auto row = [&](const char* label, auto select, int decimals) {
        char buf[200];
        std::snprintf(buf, sizeof(buf), "%-38s %12s %12s %12s\n", label,
                      detail::opt_fixed(select(voice(Discipline::Fifo)), decimals).c_str(),
                      detail::opt_fixed(select(voice(Discipline::Pq)), decimals).c_str(),
                      detail::opt_fixed(select(voice(Discipline::Wfq)), decimals).c_str());
        out << buf;
    };
    row("Voice jitter (s)", [](const ClassReport& cr) { return cr.jitter_s; }, 5);
    row("Voice packet end-to-end delay (s)", [](const ClassReport& cr) { return cr.delay_s; }, 5);
    row("Voice traffic received (pps)",
        [](const ClassReport& cr) { return std::optional<double>(cr.received_pps_mean); }, 1);
    row("Voice traffic sent (pps)",
        [](const ClassReport& cr) { return std::optional<double>(cr.sent_pps_mean); }, 1);
    row("Voice packet loss (%)", [](const ClassReport& cr) { return cr.loss_pct; }, 2);
    return out.str();
}

/// Key/value form of the comparison, prefixed per discipline.
inline std::string comparison_kv(const ComparisonResult& result) {
    std::string out;
    for (const RunArtifacts& run : result.runs) {
        const std::string prefix = to_string(run.config.qdisc.discipline);
        std::istringstream lines(run.summary_kv);
        std::string line;
        while (std::getline(lines, line)) {
            out += prefix;
            out += '.';
            out += line;
            out += '\n';
        }
    }
    return out;
}

}  // namespace voipsim
