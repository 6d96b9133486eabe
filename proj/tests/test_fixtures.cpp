// Whole-run checks on the bundled fixtures (full 480 s simulations).

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "support/paths.hpp"
#include "voipsim/report.hpp"

using namespace voipsim;

namespace {

ScenarioConfig load(const char* file) {
    return parse_scenario_or_throw(testsupport::read_scenario(file));
}

}  // namespace

TEST_CASE("aggregated and expanded fixtures report statistically equal voice QoS") {
    ScenarioConfig aggregated = load("paper-topology.scn");
    ScenarioConfig expanded = load("paper-topology-expanded.scn");

    for (Discipline d : {Discipline::Fifo, Discipline::Pq, Discipline::Wfq}) {
        aggregated.qdisc.discipline = d;
        expanded.qdisc.discipline = d;
        Simulation agg_sim(aggregated), exp_sim(expanded);
        const QosReport agg = agg_sim.run();
        const QosReport exp = exp_sim.run();
        const ClassReport& va = agg.for_class(TrafficClass::Voice);
        const ClassReport& ve = exp.for_class(TrafficClass::Voice);

        INFO("discipline " << to_string(d));
        REQUIRE(va.counts.sent == ve.counts.sent);  // identical offered load
        REQUIRE(static_cast<int>(va.verdicts.delay) == static_cast<int>(ve.verdicts.delay));
        REQUIRE(static_cast<int>(va.verdicts.jitter) == static_cast<int>(ve.verdicts.jitter));
        REQUIRE(static_cast<int>(va.verdicts.loss) == static_cast<int>(ve.verdicts.loss));
        REQUIRE(std::abs(*va.delay_s - *ve.delay_s) < 0.020);
        REQUIRE(std::abs(*va.loss_pct - *ve.loss_pct) < 2.0);
        if (d != Discipline::Fifo) {
            REQUIRE(*va.loss_pct == 0.0);
            REQUIRE(*ve.loss_pct == 0.0);
        }
    }
}

TEST_CASE("expanded fixture keeps the 400 pps aggregate voice rate") {
    ScenarioConfig expanded = load("paper-topology-expanded.scn");
    expanded.duration_s = 30.0;
    for (TrafficSpec& t : expanded.traffic) t.stop_s = 30.0;
    Simulation sim(expanded);
    const QosReport report = sim.run();
    for (uint32_t bin : report.for_class(TrafficClass::Voice).sent_pps) REQUIRE(bin == 400);
}
