#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "voipsim/error.hpp"
#include "voipsim/packet.hpp"

namespace voipsim {

/// Streaming one-way delay statistics for one traffic class. Welford's
/// update keeps the running mean and sum of squared deviations, so the
/// average and the deviation-based jitter match a batch evaluation of the
/// same samples without a second pass.
struct DelayAccumulator {
    uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    double min_d = std::numeric_limits<double>::infinity();
    double max_d = -std::numeric_limits<double>::infinity();

    void record(double delay_s) {
        invariant(delay_s >= 0.0 && std::isfinite(delay_s), "delay sample must be finite and non-negative");
        ++n;
        const double d1 = delay_s - mean;
        mean += d1 / static_cast<double>(n);
        m2 += d1 * (delay_s - mean);
        min_d = std::min(min_d, delay_s);
        max_d = std::max(max_d, delay_s);
    }

    /// Mean one-way delay; absent without samples (never rendered as zero).
    std::optional<double> average() const {
        if (n < 1) return std::nullopt;
        return mean;
    }

    /// Sample standard deviation of the delays (divisor n-1); equal delays
    /// give exactly zero. Needs at least two samples.
    std::optional<double> jitter() const {
        if (n < 2) return std::nullopt;
        return std::sqrt(m2 / static_cast<double>(n - 1));
    }
};

/// Loss ratio in percent: lost / sent * 100. Packets still in flight count
/// toward sent but not toward lost.
inline std::optional<double> loss_ratio_percent(uint64_t lost, uint64_t sent) {
    if (sent < 1) return std::nullopt;
    return static_cast<double>(lost) * 100.0 / static_cast<double>(sent);
}

/// Per-class packet accounting. in_flight_at_end covers packets neither
/// delivered nor dropped when the run ends; sent always equals
/// delivered + lost + in_flight_at_end.
struct LossAccumulator {
    uint64_t sent = 0;
    uint64_t delivered = 0;
    uint64_t lost = 0;
    uint64_t in_flight_at_end = 0;

    std::optional<double> loss_percent() const { return loss_ratio_percent(lost, sent); }
};

struct ItuThresholds {
    double delay_pref_s = 0.100;
    double delay_max_s = 0.150;
    double jitter_pref_s = 0.040;
    double jitter_max_s = 0.075;
    double loss_pref_pct = 1.0;
    double loss_max_pct = 3.0;
};

enum class Verdict : uint8_t { PassPreferred = 0, PassMaximum = 1, Fail = 2, Absent = 3 };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::PassPreferred: return "pass-preferred";
        case Verdict::PassMaximum: return "pass-maximum";
        case Verdict::Fail: return "fail";
        case Verdict::Absent: return "absent";
    }
    return "?";
}

inline Verdict itu_verdict(std::optional<double> value, double preferred, double maximum) {
    invariant(preferred <= maximum, "preferred threshold must not exceed the maximum");
    if (!value.has_value()) return Verdict::Absent;
    if (*value <= preferred) return Verdict::PassPreferred;
    if (*value <= maximum) return Verdict::PassMaximum;
    return Verdict::Fail;
}

struct VerdictTriple {
    Verdict delay = Verdict::Absent;
    Verdict jitter = Verdict::Absent;
    Verdict loss = Verdict::Absent;
};

inline VerdictTriple itu_verdicts(std::optional<double> delay_s, std::optional<double> jitter_s,
                                  std::optional<double> loss_pct, const ItuThresholds& itu = {}) {
    return VerdictTriple{
        itu_verdict(delay_s, itu.delay_pref_s, itu.delay_max_s),
        itu_verdict(jitter_s, itu.jitter_pref_s, itu.jitter_max_s),
        itu_verdict(loss_pct, itu.loss_pref_pct, itu.loss_max_pct),
    };
}

/// Everything reported for one traffic class after a run.
struct ClassReport {
    TrafficClass cls = TrafficClass::Voice;
    bool active = false;  // any packet of this class generated

    // Measurement window [warmup, duration): delay statistics and loss.
    DelayAccumulator delay;
    LossAccumulator counts;
    std::optional<double> delay_s;
    std::optional<double> jitter_s;
    std::optional<double> loss_pct;
    VerdictTriple verdicts;

    // Whole run, for conservation and the throughput series.
    uint64_t total_sent = 0;
    uint64_t total_delivered = 0;
    uint64_t total_dropped = 0;
    uint64_t total_in_flight = 0;
    std::vector<uint32_t> sent_pps;      // 1 s bins over [0, duration)
    std::vector<uint32_t> received_pps;  // binned by delivery time
    double sent_pps_mean = 0.0;          // over [warmup, duration) bins
    double received_pps_mean = 0.0;
};

struct QosReport {
    double duration_s = 0.0;
    double warmup_s = 0.0;
    std::array<ClassReport, kTrafficClassCount> classes;

    const ClassReport& for_class(TrafficClass cls) const {
        return classes[static_cast<std::size_t>(cls)];
    }
};

/// Per-second sent/received counts for one class, computed from the packet
/// arena. Deliveries landing exactly on the end boundary fall into one
/// trailing overflow bin that is never reported.
inline void bin_throughput(const PacketStore& store, TrafficClass cls, double duration_s,
                           std::vector<uint32_t>& sent_out, std::vector<uint32_t>& received_out) {
    const std::size_t bins = static_cast<std::size_t>(std::ceil(duration_s));
    sent_out.assign(bins, 0);
    std::vector<uint32_t> received(bins + 1, 0);
    for (const Packet& p : store.all()) {
        if (p.cls != cls) continue;
        const auto sent_bin = static_cast<std::size_t>(p.created_at);
        invariant(sent_bin < bins, "packet created past the run end");
        ++sent_out[sent_bin];
        if (p.delivered_at) {
            const auto recv_bin = std::min(static_cast<std::size_t>(*p.delivered_at), bins);
            ++received[recv_bin];
        }
    }
    received.resize(bins);
    received_out = std::move(received);
}

/// Accumulates samples during a run and assembles the final report.
/// Delay/loss statistics cover packets created at or after the warm-up
/// cutoff; the throughput series covers the whole run.
class MetricsCollector {
  public:
    MetricsCollector(double duration_s, double warmup_s) : duration_s_(duration_s), warmup_s_(warmup_s) {
        invariant(duration_s > 0.0, "duration must be positive");
        invariant(warmup_s >= 0.0 && warmup_s < duration_s, "warm-up must fit inside the run");
    }

    void on_generated(const Packet& p) {
        if (p.created_at >= warmup_s_) ++acc_[idx(p.cls)].counts.sent;
    }

    void on_delivered(const Packet& p) {
        invariant(p.delivered_at.has_value(), "delivery notification without a delivery stamp");
        if (p.created_at >= warmup_s_) {
            auto& acc = acc_[idx(p.cls)];
            ++acc.counts.delivered;
            acc.delay.record(*p.delivered_at - p.created_at);
        }
    }

    void on_dropped(const Packet& p) {
        if (p.created_at >= warmup_s_) ++acc_[idx(p.cls)].counts.lost;
    }

    /// Closes the books: derives in-flight counts from the arena, checks
    /// conservation (sent == delivered + dropped + in-flight, whole run and
    /// measurement window), and computes series, means, and verdicts.
    QosReport finalize(const PacketStore& store, const ItuThresholds& itu = {}) const {
        QosReport report;
        report.duration_s = duration_s_;
        report.warmup_s = warmup_s_;

        struct Scan {
            uint64_t sent = 0, delivered = 0, dropped = 0, in_flight = 0;
            uint64_t w_sent = 0, w_delivered = 0, w_dropped = 0, w_in_flight = 0;
        };
        std::array<Scan, kTrafficClassCount> scan;
        for (const Packet& p : store.all()) {
            Scan& s = scan[idx(p.cls)];
            const bool windowed = p.created_at >= warmup_s_;
            ++s.sent;
            if (windowed) ++s.w_sent;
            if (p.delivered_at) {
                ++s.delivered;
                if (windowed) ++s.w_delivered;
            } else if (p.dropped_at) {
                ++s.dropped;
                if (windowed) ++s.w_dropped;
            } else {
                ++s.in_flight;
                if (windowed) ++s.w_in_flight;
            }
        }

        for (std::size_t c = 0; c < kTrafficClassCount; ++c) {
            ClassReport& cr = report.classes[c];
            cr.cls = static_cast<TrafficClass>(c);
            cr.delay = acc_[c].delay;
            cr.counts = acc_[c].counts;
            cr.counts.in_flight_at_end = scan[c].w_in_flight;

            // The incremental counters and the arena scan must agree.
            invariant(cr.counts.sent == scan[c].w_sent, "windowed sent counter diverged from the arena");
            invariant(cr.counts.delivered == scan[c].w_delivered,
                      "windowed delivered counter diverged from the arena");
            invariant(cr.counts.lost == scan[c].w_dropped, "windowed loss counter diverged from the arena");
            invariant(cr.counts.sent == cr.counts.delivered + cr.counts.lost + cr.counts.in_flight_at_end,
                      "windowed packet conservation violated");
            invariant(scan[c].sent == scan[c].delivered + scan[c].dropped + scan[c].in_flight,
                      "whole-run packet conservation violated");

            cr.total_sent = scan[c].sent;
            cr.total_delivered = scan[c].delivered;
            cr.total_dropped = scan[c].dropped;
            cr.total_in_flight = scan[c].in_flight;
            cr.active = cr.total_sent > 0;

            cr.delay_s = cr.delay.average();
            cr.jitter_s = cr.delay.jitter();
            cr.loss_pct = cr.counts.loss_percent();
            cr.verdicts = itu_verdicts(cr.delay_s, cr.jitter_s, cr.loss_pct, itu);

            bin_throughput(store, cr.cls, duration_s_, cr.sent_pps, cr.received_pps);
            const auto first = static_cast<std::size_t>(std::ceil(warmup_s_));
            uint64_t sent_sum = 0, recv_sum = 0;
            for (std::size_t b = first; b < cr.sent_pps.size(); ++b) {
                sent_sum += cr.sent_pps[b];
                recv_sum += cr.received_pps[b];
            }
            const auto window_bins = static_cast<double>(cr.sent_pps.size() - first);
            cr.sent_pps_mean = window_bins > 0 ? static_cast<double>(sent_sum) / window_bins : 0.0;
            cr.received_pps_mean = window_bins > 0 ? static_cast<double>(recv_sum) / window_bins : 0.0;
        }
        return report;
    }

  private:
    struct ClassAccumulator {
        DelayAccumulator delay;
        LossAccumulator counts;
    };

    static std::size_t idx(TrafficClass cls) { return static_cast<std::size_t>(cls); }

    double duration_s_;
    double warmup_s_;
    std::array<ClassAccumulator, kTrafficClassCount> acc_{};
};

}  // namespace voipsim
