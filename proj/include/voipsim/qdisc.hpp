#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "voipsim/engine.hpp"
#include "voipsim/error.hpp"
#include "voipsim/packet.hpp"

namespace voipsim {

enum class Discipline : uint8_t { Fifo = 0, Pq = 1, Wfq = 2 };

inline constexpr std::size_t kDisciplineCount = 3;

inline const char* to_string(Discipline d) {
    switch (d) {
        case Discipline::Fifo: return "fifo";
        case Discipline::Pq: return "pq";
        case Discipline::Wfq: return "wfq";
    }
    return "?";
}

inline std::optional<Discipline> discipline_from_string(std::string_view s) {
    if (s == "fifo") return Discipline::Fifo;
    if (s == "pq") return Discipline::Pq;
    if (s == "wfq") return Discipline::Wfq;
    return std::nullopt;
}

inline constexpr uint32_t kUnboundedCapacity = std::numeric_limits<uint32_t>::max();

/// Scheduler parameters for one output port. Every ToS value 0..7 maps to
/// exactly one queue index; queue 0 is the highest priority under PQ.
struct QdiscConfig {
    Discipline discipline = Discipline::Fifo;
    uint32_t queue_count = 1;
    std::array<uint8_t, 8> tos_to_queue{};   // ignored by FIFO (single queue)
    std::vector<uint32_t> capacity_pkts;     // FIFO: [0] is the total; PQ/WFQ: per queue
    std::vector<double> weights;             // WFQ only, strictly positive

    static QdiscConfig fifo(uint32_t total_capacity) {
        QdiscConfig cfg;
        cfg.discipline = Discipline::Fifo;
        cfg.queue_count = 1;
        cfg.tos_to_queue.fill(0);
        cfg.capacity_pkts = {total_capacity};
        return cfg;
    }

    static QdiscConfig pq(const std::array<uint8_t, 8>& tos_map, std::vector<uint32_t> capacities) {
        QdiscConfig cfg;
        cfg.discipline = Discipline::Pq;
        cfg.tos_to_queue = tos_map;
        cfg.capacity_pkts = std::move(capacities);
        cfg.queue_count = static_cast<uint32_t>(cfg.capacity_pkts.size());
        return cfg;
    }

    static QdiscConfig wfq(const std::array<uint8_t, 8>& tos_map, std::vector<uint32_t> capacities,
                           std::vector<double> queue_weights) {
        QdiscConfig cfg = pq(tos_map, std::move(capacities));
        cfg.discipline = Discipline::Wfq;
        cfg.weights = std::move(queue_weights);
        return cfg;
    }

    /// Deterministic ToS -> queue index. FIFO collapses everything to queue 0.
    uint8_t classify(uint8_t tos) const {
        invariant(tos < 8, "ToS out of range");
        if (discipline == Discipline::Fifo) return 0;
        return tos_to_queue[tos];
    }

    void validate() const {
        if (queue_count == 0 || queue_count > 8) {
            throw ValidationError("qdisc queue count must be between 1 and 8");
        }
        if (discipline == Discipline::Fifo) {
            if (capacity_pkts.size() != 1 || capacity_pkts[0] == 0) {
                throw ValidationError("fifo requires a single positive total capacity");
            }
            return;
        }
        if (capacity_pkts.size() != queue_count) {
            throw ValidationError("per-queue capacities must match the queue count");
        }
        for (uint32_t c : capacity_pkts) {
            if (c == 0) throw ValidationError("queue capacity must be positive");
        }
        for (uint8_t q : tos_to_queue) {
            if (q >= queue_count) throw ValidationError("ToS map points past the last queue");
        }
        if (discipline == Discipline::Wfq) {
            if (weights.size() != queue_count) {
                throw ValidationError("wfq weights must match the queue count");
            }
            for (double w : weights) {
                if (!(w > 0.0)) throw ValidationError("wfq weights must be strictly positive");
            }
        }
    }
};

enum class EnqueueOutcome : uint8_t { Accepted, Dropped };

/// One buffered packet plus its scheduling bookkeeping.
struct QueuedPacket {
    PacketId packet = 0;
    uint8_t tos = 0;
    uint32_t size_bytes = 0;
    uint64_t enqueue_seq = 0;   // assigned on accept; WFQ/FIFO tie-break
    double finish_tag = 0.0;    // WFQ only, byte units
};

/// A pluggable output-port scheduler: FIFO, strict priority, or weighted
/// fair queuing behind one enqueue/dequeue interface.
///
/// WFQ uses the virtual-time / finish-tag formulation. Virtual time tracks
/// the fluid reference system of the accepted arrivals: between arrival
/// events it advances at rate (bytes/s) / sum(weights of queues whose last
/// finish tag exceeds it), and resets to zero when that reference system
/// drains. A queue's finish tags are non-decreasing in arrival order, so the
/// head packet always carries the queue's minimum tag.
///
/// Capacity counts waiting packets only; a transmission in progress has
/// already left its buffer and always completes (no preemption).
class Qdisc {
  public:
    Qdisc(QdiscConfig config, double rate_bps) : cfg_(std::move(config)), rate_bytes_(rate_bps / 8.0) {
        cfg_.validate();
        if (!(rate_bps > 0.0)) throw ValidationError("qdisc port rate must be positive");
        queues_.resize(cfg_.queue_count);
        last_finish_tag_.assign(cfg_.queue_count, 0.0);
    }

    const QdiscConfig& config() const { return cfg_; }

    /// Tail drop: a packet arriving to a full queue is rejected and never
    /// buffered. On accept under WFQ the packet receives
    /// max(virtual_time, last_finish_tag[q]) + size_bytes / weight[q].
    EnqueueOutcome enqueue(PacketId packet, uint8_t tos, uint32_t size_bytes, SimTime now) {
        const uint8_t q = cfg_.classify(tos);
        const uint32_t occupancy =
            cfg_.discipline == Discipline::Fifo ? buffered_ : static_cast<uint32_t>(queues_[q].size());
        const uint32_t capacity = cfg_.discipline == Discipline::Fifo ? cfg_.capacity_pkts[0] : cfg_.capacity_pkts[q];
        if (occupancy >= capacity) {
            return EnqueueOutcome::Dropped;
        }
        QueuedPacket item{packet, tos, size_bytes, enqueue_counter_++, 0.0};
        if (cfg_.discipline == Discipline::Wfq) {
            advance_virtual_time(now);
            const double start = std::max(virtual_time_, last_finish_tag_[q]);
            item.finish_tag = start + static_cast<double>(size_bytes) / cfg_.weights[q];
            last_finish_tag_[q] = item.finish_tag;
        }
        queues_[q].push_back(item);
        ++buffered_;
        return EnqueueOutcome::Accepted;
    }

    /// FIFO: oldest buffered packet. PQ: head of the highest-priority
    /// non-empty queue (queue 0 first). WFQ: buffered packet with the
    /// minimum finish tag, ties broken by enqueue order.
    std::optional<QueuedPacket> dequeue(SimTime now) {
        (void)now;  // virtual time is a function of arrivals only
        if (buffered_ == 0) return std::nullopt;
        switch (cfg_.discipline) {
            case Discipline::Fifo:
                return pop_front(0);
            case Discipline::Pq:
                for (uint32_t q = 0; q < cfg_.queue_count; ++q) {
                    if (!queues_[q].empty()) return pop_front(q);
                }
                return std::nullopt;
            case Discipline::Wfq: {
                uint32_t best = cfg_.queue_count;
                for (uint32_t q = 0; q < cfg_.queue_count; ++q) {
                    if (queues_[q].empty()) continue;
                    if (best == cfg_.queue_count || tag_before(queues_[q].front(), queues_[best].front())) {
                        best = q;
                    }
                }
                return pop_front(best);
            }
        }
        return std::nullopt;
    }

    bool busy() const { return busy_; }
    void set_busy(bool busy) { busy_ = busy; }

    uint32_t buffered() const { return buffered_; }
    bool empty() const { return buffered_ == 0; }
    uint32_t queue_depth(uint32_t q) const {
        invariant(q < cfg_.queue_count, "queue index out of range");
        return static_cast<uint32_t>(queues_[q].size());
    }
    double last_finish_tag(uint32_t q) const {
        invariant(q < cfg_.queue_count, "queue index out of range");
        return last_finish_tag_[q];
    }

    /// Snapshot of the fluid reference clock advanced to time t (which must
    /// not precede the last arrival). Read-only; lets tests check the tag
    /// recurrence against an independently advanced copy.
    struct ReferenceState {
        double virtual_time = 0.0;
        std::vector<double> last_finish_tags;
    };
    ReferenceState reference_state_at(SimTime t) const {
        Qdisc copy(*this);
        copy.advance_virtual_time(t);
        return ReferenceState{copy.virtual_time_, copy.last_finish_tag_};
    }

    /// Virtual time the scheduler would hold at time t >= the last arrival.
    double virtual_time_at(SimTime t) const { return reference_state_at(t).virtual_time; }

  private:
    QueuedPacket pop_front(uint32_t q) {
        QueuedPacket item = queues_[q].front();
        queues_[q].pop_front();
        --buffered_;
        return item;
    }

    static bool tag_before(const QueuedPacket& x, const QueuedPacket& y) {
        if (x.finish_tag != y.finish_tag) return x.finish_tag < y.finish_tag;
        return x.enqueue_seq < y.enqueue_seq;
    }

    // Piecewise-linear advance of the fluid reference clock. A queue stays
    // in the reference backlog until virtual time reaches its last finish
    // tag; when no queue remains the reference system is empty and both the
    // clock and the tags reset for the next busy period.
    void advance_virtual_time(SimTime now) {
        invariant(now >= vt_clock_, "virtual time driven backwards");
        double dt = now - vt_clock_;
        vt_clock_ = now;
        while (true) {
            double weight_sum = 0.0;
            double next_tag = std::numeric_limits<double>::infinity();
            for (uint32_t q = 0; q < cfg_.queue_count; ++q) {
                if (last_finish_tag_[q] > virtual_time_) {
                    weight_sum += cfg_.weights[q];
                    next_tag = std::min(next_tag, last_finish_tag_[q]);
                }
            }
            if (weight_sum == 0.0) {
                virtual_time_ = 0.0;
                last_finish_tag_.assign(cfg_.queue_count, 0.0);
                return;
            }
            const double rate = rate_bytes_ / weight_sum;
            if (virtual_time_ + dt * rate < next_tag) {
                virtual_time_ += dt * rate;
                return;
            }
            dt = std::max(0.0, dt - (next_tag - virtual_time_) / rate);
            virtual_time_ = next_tag;
        }
    }

    QdiscConfig cfg_;
    double rate_bytes_;
    std::vector<std::deque<QueuedPacket>> queues_;
    std::vector<double> last_finish_tag_;
    double virtual_time_ = 0.0;
    SimTime vt_clock_ = 0.0;
    uint64_t enqueue_counter_ = 0;
    uint32_t buffered_ = 0;
    bool busy_ = false;
};

}  // namespace voipsim
