#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "voipsim/error.hpp"

namespace voipsim {

/// One packet offered to the fluid reference server.
struct GpsArrival {
    double time = 0.0;
    uint32_t queue = 0;
    uint32_t size_bytes = 0;
};

/// Closed interval during which a queue held fluid backlog.
struct GpsInterval {
    double begin = 0.0;
    double end = 0.0;
};

struct GpsTrace {
    std::vector<double> finish_time;               // per arrival, input order
    std::vector<std::vector<GpsInterval>> backlog;  // per queue, maximal intervals
};

/// Exact fluid Generalized Processor Sharing reference: at every instant the
/// server rate is split across backlogged queues in proportion to their
/// weights, and each queue drains through its packets in arrival order. The
/// stepping is event-driven (arrivals and queue-drain instants), so rates
/// are constant within each step.
///
/// Test-scale only: intended for small instances (tens of packets, a handful
/// of queues). Independent of the packetized scheduler on purpose.
inline GpsTrace gps_oracle(std::span<const GpsArrival> arrivals, std::span<const double> weights,
                           double rate_bps) {
    invariant(rate_bps > 0.0, "gps oracle requires a positive rate");
    for (const GpsArrival& a : arrivals) {
        invariant(a.queue < weights.size(), "gps arrival names a queue without a weight");
        invariant(a.size_bytes > 0, "gps arrival must carry bytes");
    }
    const double rate_bytes = rate_bps / 8.0;
    const std::size_t queue_count = weights.size();

    // Arrival order within a queue follows input order; across queues,
    // arrival time (stable for ties).
    std::vector<std::size_t> order(arrivals.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return arrivals[x].time < arrivals[y].time; });

    struct FluidPacket {
        std::size_t index;
        double remaining_bytes;
    };
    std::vector<std::deque<FluidPacket>> queues(queue_count);

    GpsTrace trace;
    trace.finish_time.assign(arrivals.size(), 0.0);
    trace.backlog.resize(queue_count);

    auto open_backlog = [&](uint32_t q, double t) {
        auto& spans = trace.backlog[q];
        if (!spans.empty() && spans.back().end == t) return;  // merge touching intervals
        spans.push_back(GpsInterval{t, t});
    };
    auto close_backlog = [&](uint32_t q, double t) { trace.backlog[q].back().end = t; };

    std::size_t next_arrival = 0;
    double t = arrivals.empty() ? 0.0 : arrivals[order[0]].time;

    auto ingest_arrivals_at = [&](double when) {
        while (next_arrival < order.size() && arrivals[order[next_arrival]].time <= when) {
            const GpsArrival& a = arrivals[order[next_arrival]];
            if (queues[a.queue].empty()) open_backlog(a.queue, when);
            queues[a.queue].push_back(FluidPacket{order[next_arrival], static_cast<double>(a.size_bytes)});
            ++next_arrival;
        }
    };
    ingest_arrivals_at(t);

    auto total_backlogged = [&]() {
        double sum = 0.0;
        for (std::size_t q = 0; q < queue_count; ++q) {
            if (!queues[q].empty()) sum += weights[q];
        }
        return sum;
    };

    while (true) {
        double weight_sum = total_backlogged();
        if (weight_sum == 0.0) {
            if (next_arrival >= order.size()) break;
            t = arrivals[order[next_arrival]].time;
            ingest_arrivals_at(t);
            continue;
        }

        // Next rate change: an arrival, or some queue draining completely.
        double step_end = std::numeric_limits<double>::infinity();
        if (next_arrival < order.size()) step_end = arrivals[order[next_arrival]].time;
        std::size_t emptying_queue = queue_count;
        for (std::size_t q = 0; q < queue_count; ++q) {
            if (queues[q].empty()) continue;
            double backlog = 0.0;
            for (const FluidPacket& p : queues[q]) backlog += p.remaining_bytes;
            const double drain_rate = rate_bytes * weights[q] / weight_sum;
            const double empty_at = t + backlog / drain_rate;
            if (empty_at < step_end) {
                step_end = empty_at;
                emptying_queue = q;
            }
        }

        const double dt = step_end - t;
        for (std::size_t q = 0; q < queue_count; ++q) {
            if (queues[q].empty()) continue;
            const double drain_rate = rate_bytes * weights[q] / weight_sum;
            double budget = (q == emptying_queue) ? std::numeric_limits<double>::infinity() : drain_rate * dt;
            double clock = t;
            while (!queues[q].empty() && queues[q].front().remaining_bytes <= budget) {
                FluidPacket head = queues[q].front();
                queues[q].pop_front();
                clock += head.remaining_bytes / drain_rate;
                if (budget != std::numeric_limits<double>::infinity()) budget -= head.remaining_bytes;
                trace.finish_time[head.index] = std::min(clock, step_end);
            }
            if (!queues[q].empty()) {
                queues[q].front().remaining_bytes -= budget;
            } else {
                close_backlog(static_cast<uint32_t>(q), step_end);
            }
        }

        t = step_end;
        ingest_arrivals_at(t);
    }
    return trace;
}

}  // namespace voipsim
