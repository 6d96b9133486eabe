// Acceptance suite: end-to-end checks of the simulator against its
// contract. Each criterion prints exactly one [PASS]/[FAIL] line; the
// binary exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../support/generators.hpp"
#include "../support/paths.hpp"
#include "../support/port_driver.hpp"
#include "../support/reference_schedulers.hpp"
#include "voipsim/voipsim.hpp"

using namespace voipsim;
using testsupport::drive_port;
using testsupport::identity_tos_map;
using testsupport::random_instance;
using testsupport::reference_port;

namespace {

struct Checker {
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

struct CriterionRunner {
    int failed = 0;

    void run(int id, const std::string& title, const std::function<void(Checker&)>& body) {
        Checker check;
        std::string error;
        try {
            body(check);
        } catch (const std::exception& e) {
            error = e.what();
        }
        if (error.empty() && check.failures.empty()) {
            std::printf("[PASS] criterion %d: %s\n", id, title.c_str());
            return;
        }
        ++failed;
        std::printf("[FAIL] criterion %d: %s\n", id, title.c_str());
        if (!error.empty()) std::printf("       exception: %s\n", error.c_str());
        for (const std::string& f : check.failures) std::printf("       %s\n", f.c_str());
    }
};

ScenarioConfig default_scenario() {
    return parse_scenario_or_throw(testsupport::read_scenario("paper-topology.scn"));
}

const ClassReport& voice_of(const ComparisonResult& result, Discipline d) {
    return result.for_discipline(d).report.for_class(TrafficClass::Voice);
}

// Cohort goodput: packets counted by creation second, delivered ever.
struct Cohorts {
    std::vector<uint32_t> sent;
    std::vector<uint32_t> delivered;
};

Cohorts voice_cohorts(const Simulation& sim, double duration_s) {
    Cohorts cohorts;
    const auto bins = static_cast<std::size_t>(duration_s);
    cohorts.sent.assign(bins, 0);
    cohorts.delivered.assign(bins, 0);
    for (const Packet& p : sim.packets().all()) {
        if (p.cls != TrafficClass::Voice) continue;
        const auto bin = static_cast<std::size_t>(p.created_at);
        ++cohorts.sent[bin];
        if (p.delivered_at) ++cohorts.delivered[bin];
    }
    return cohorts;
}

std::string fmt(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

}  // namespace

int main() {
    CriterionRunner runner;
    const ScenarioConfig base = default_scenario();

    // Shared full-length comparison runs (criteria 1, 3, 8, 9).
    const auto wall_start = std::chrono::steady_clock::now();
    const ComparisonResult parallel = compare_scenarios(base, /*parallel=*/true);
    const double compare_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    const ComparisonResult serial = compare_scenarios(base, /*parallel=*/false);

    runner.run(1, "Table-1 qualitative reproduction on the default congested scenario", [&](Checker& c) {
        const ClassReport& fifo = voice_of(parallel, Discipline::Fifo);
        const ClassReport& pq = voice_of(parallel, Discipline::Pq);
        const ClassReport& wfq = voice_of(parallel, Discipline::Wfq);

        c.expect(*fifo.delay_s > 0.150, "fifo voice delay " + fmt(*fifo.delay_s) + " must exceed 0.150 s");
        c.expect(fifo.verdicts.delay == Verdict::Fail, "fifo voice delay verdict must be Fail");
        c.expect(*fifo.loss_pct > 3.0, "fifo voice loss " + fmt(*fifo.loss_pct) + "% must exceed 3%");
        c.expect(*pq.loss_pct == 0.0, "pq voice loss must be exactly 0.0%");
        c.expect(*wfq.loss_pct == 0.0, "wfq voice loss must be exactly 0.0%");
        c.expect(*pq.delay_s <= 0.150, "pq voice delay " + fmt(*pq.delay_s) + " must be <= 0.150 s");
        c.expect(*wfq.delay_s <= 0.150, "wfq voice delay " + fmt(*wfq.delay_s) + " must be <= 0.150 s");
        for (const auto* cr : {&fifo, &pq, &wfq}) {
            c.expect(*cr->jitter_s <= 0.075,
                     "voice jitter " + fmt(*cr->jitter_s) + " must be <= 0.075 s for every discipline");
        }
        c.expect(compare_seconds < 60.0,
                 "three-way 480 s comparison took " + fmt(compare_seconds) + " s (budget 60 s)");
    });

    runner.run(2, "loss arithmetic: 20 lost of 400 sent is exactly 5%", [&](Checker& c) {
        c.expect(*loss_ratio_percent(20, 400) == 5.0, "loss_ratio(20, 400) != 5.0");
        c.expect(*loss_ratio_percent(0, 400) == 0.0, "loss_ratio(0, 400) != 0.0");
    });

    runner.run(3, "voice sent rate is exactly 400 pps in every whole-second bin", [&](Checker& c) {
        for (Discipline d : {Discipline::Fifo, Discipline::Pq, Discipline::Wfq}) {
            const ClassReport& voice = voice_of(parallel, d);
            c.expect(voice.sent_pps.size() == 480, "expected 480 bins");
            for (std::size_t bin = 0; bin < voice.sent_pps.size(); ++bin) {
                if (voice.sent_pps[bin] != 400) {
                    c.expect(false, std::string(to_string(d)) + " bin " + std::to_string(bin) + " sent " +
                                        std::to_string(voice.sent_pps[bin]) + " != 400");
                    break;
                }
            }
        }
    });

    runner.run(4, "received throughput: FIFO < PQ == WFQ == 400 pps in steady state", [&](Checker& c) {
        // Goodput per creation-second cohort: with zero loss every cohort
        // that is not truncated by the run end must come through complete.
        std::array<Cohorts, kDisciplineCount> cohorts;
        for (std::size_t d = 0; d < kDisciplineCount; ++d) {
            ScenarioConfig cfg = base;
            cfg.qdisc.discipline = static_cast<Discipline>(d);
            Simulation sim(cfg);
            sim.run();
            cohorts[d] = voice_cohorts(sim, cfg.duration_s);
        }
        const auto last = cohorts[0].sent.size() - 1;  // final cohort is truncated by the end
        for (Discipline d : {Discipline::Pq, Discipline::Wfq}) {
            const Cohorts& co = cohorts[static_cast<std::size_t>(d)];
            for (std::size_t s = 0; s < last; ++s) {
                if (co.delivered[s] != 400) {
                    c.expect(false, std::string(to_string(d)) + " cohort " + std::to_string(s) +
                                        " delivered " + std::to_string(co.delivered[s]) + " != 400");
                    break;
                }
            }
        }
        // FIFO strictly lower on the steady-state window.
        const auto first = static_cast<std::size_t>(base.warmup_s) + 1;
        double fifo_sum = 0.0;
        for (std::size_t s = first; s < last; ++s) {
            fifo_sum += cohorts[static_cast<std::size_t>(Discipline::Fifo)].delivered[s];
        }
        const double fifo_mean = fifo_sum / static_cast<double>(last - first);
        c.expect(fifo_mean < 400.0, "fifo steady-state goodput " + fmt(fifo_mean) + " must be < 400");
        c.expect(fifo_mean > 0.0, "fifo must still deliver voice");
    });

    runner.run(5, "WFQ conformance: GPS delay bound and weighted fairness on random instances",
               [&](Checker& c) {
        std::mt19937_64 rng(424242);
        int instances = 0;
        for (int round = 0; round < 400; ++round) {
            const auto inst = random_instance(rng);
            ++instances;
            const auto queues = static_cast<uint32_t>(inst.weights.size());
            Qdisc port(QdiscConfig::wfq(identity_tos_map(queues),
                                        std::vector<uint32_t>(queues, 1000), inst.weights),
                       inst.rate_bps);
            const auto trace = drive_port(port, inst.arrivals, inst.rate_bps);
            const auto gps = gps_oracle(inst.arrivals, inst.weights, inst.rate_bps);
            const double slack = inst.max_size_bytes * 8.0 / inst.rate_bps;

            for (std::size_t i = 0; i < inst.arrivals.size(); ++i) {
                if (trace.packets[i].dropped) {
                    c.expect(false, "instance must be drop-free");
                    break;
                }
                if (!(trace.packets[i].completion <= gps.finish_time[i] + slack)) {
                    c.expect(false, "round " + std::to_string(round) + " packet " + std::to_string(i) +
                                        ": completion " + fmt(trace.packets[i].completion) +
                                        " exceeds GPS " + fmt(gps.finish_time[i]) + " + " + fmt(slack));
                    break;
                }
            }

            // |served_i/w_i - served_j/w_j| <= Lmax (1/w_i + 1/w_j) over
            // every interval where both queues hold reference backlog.
            for (uint32_t qi = 0; qi < queues; ++qi) {
                for (uint32_t qj = qi + 1; qj < queues; ++qj) {
                    for (const GpsInterval& a : gps.backlog[qi]) {
                        for (const GpsInterval& b : gps.backlog[qj]) {
                            const double t1 = std::max(a.begin, b.begin);
                            const double t2 = std::min(a.end, b.end);
                            if (t2 <= t1) continue;
                            const double si =
                                testsupport::served_bytes(trace, qi, t1, t2, inst.rate_bps) /
                                inst.weights[qi];
                            const double sj =
                                testsupport::served_bytes(trace, qj, t1, t2, inst.rate_bps) /
                                inst.weights[qj];
                            const double bound = inst.max_size_bytes *
                                                 (1.0 / inst.weights[qi] + 1.0 / inst.weights[qj]);
                            if (!(std::abs(si - sj) <= bound)) {
                                c.expect(false, "fairness violated in round " + std::to_string(round) +
                                                    ": |" + fmt(si) + " - " + fmt(sj) + "| > " +
                                                    fmt(bound));
                            }
                        }
                    }
                }
            }
        }
        c.expect(instances >= 200, "at least 200 instances required");
    });

    runner.run(6, "FIFO and PQ match the brute-force reference on 1200 random instances",
               [&](Checker& c) {
        std::mt19937_64 rng(777);
        int mismatches = 0;
        for (int round = 0; round < 1200; ++round) {
            const auto inst = random_instance(rng);
            const auto queues = static_cast<uint32_t>(inst.weights.size());
            const bool strict_priority = round % 2 == 1;
            const uint32_t capacity = std::uniform_int_distribution<uint32_t>(1, 8)(rng);

            QdiscConfig cfg = strict_priority
                                  ? QdiscConfig::pq(identity_tos_map(queues),
                                                    std::vector<uint32_t>(queues, capacity))
                                  : QdiscConfig::fifo(capacity);
            Qdisc port(cfg, inst.rate_bps);
            const auto impl = drive_port(port, inst.arrivals, inst.rate_bps);
            const auto ref = reference_port(inst.arrivals, inst.rate_bps, strict_priority, queues,
                                            std::vector<uint32_t>(queues, capacity));
            if (impl.dequeue_order != ref.dequeue_order || impl.drop_order != ref.drop_order) {
                ++mismatches;
                if (mismatches == 1) {
                    c.expect(false, "first mismatch in round " + std::to_string(round) + " (" +
                                        (strict_priority ? "pq" : "fifo") + ")");
                }
            }
        }
        c.expect(mismatches == 0, std::to_string(mismatches) + " mismatching instances");
    });

    runner.run(7, "streaming delay statistics equal batch evaluation within 1e-12 relative",
               [&](Checker& c) {
        std::mt19937_64 rng(99);
        for (int round = 0; round < 200; ++round) {
            const int n = std::uniform_int_distribution<int>(2, 10000)(rng);
            std::uniform_real_distribution<double> delay(0.0, 0.5);
            DelayAccumulator acc;
            std::vector<double> samples(n);
            for (double& d : samples) {
                d = delay(rng);
                acc.record(d);
            }
            double mean = 0.0;
            for (double d : samples) mean += d;
            mean /= n;
            double sq = 0.0;
            for (double d : samples) sq += (d - mean) * (d - mean);
            const double jitter = std::sqrt(sq / (n - 1));
            if (std::abs(*acc.average() - mean) > 1e-12 * std::abs(mean)) {
                c.expect(false, "mean diverged in round " + std::to_string(round));
                break;
            }
            if (std::abs(*acc.jitter() - jitter) > 1e-12 * std::abs(jitter)) {
                c.expect(false, "jitter diverged in round " + std::to_string(round));
                break;
            }
        }
        DelayAccumulator constant;
        for (int i = 0; i < 5000; ++i) constant.record(0.0421);
        c.expect(*constant.jitter() == 0.0, "constant delays must give exactly zero jitter");
    });

    runner.run(8, "determinism: equal seeds give byte-identical artifacts, serial == parallel",
               [&](Checker& c) {
        for (std::size_t d = 0; d < kDisciplineCount; ++d) {
            c.expect(parallel.runs[d].timeseries_csv == serial.runs[d].timeseries_csv,
                     std::string(to_string(static_cast<Discipline>(d))) + " csv differs between runs");
            c.expect(parallel.runs[d].summary_kv == serial.runs[d].summary_kv,
                     std::string(to_string(static_cast<Discipline>(d))) + " summary differs between runs");
        }
        // one more independent rerun of a single leg
        ScenarioConfig cfg = base;
        cfg.qdisc.discipline = Discipline::Pq;
        const RunArtifacts again = run_scenario(cfg);
        c.expect(again.timeseries_csv == parallel.for_discipline(Discipline::Pq).timeseries_csv,
                 "rerun of the pq leg produced different csv bytes");
    });

    runner.run(9, "conservation: sent == delivered + dropped + in-flight for every class", [&](Checker& c) {
        for (const ComparisonResult* result : {&parallel, &serial}) {
            for (const RunArtifacts& run : result->runs) {
                for (const ClassReport& cr : run.report.classes) {
                    c.expect(cr.total_sent == cr.total_delivered + cr.total_dropped + cr.total_in_flight,
                             std::string("whole-run conservation broken for ") + to_string(cr.cls));
                    c.expect(cr.counts.sent ==
                                 cr.counts.delivered + cr.counts.lost + cr.counts.in_flight_at_end,
                             std::string("windowed conservation broken for ") + to_string(cr.cls));
                }
            }
        }
    });

    if (runner.failed == 0) {
        std::printf("acceptance: all 9 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", runner.failed);
    return 1;
}
