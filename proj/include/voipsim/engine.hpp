#pragma once

#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "voipsim/error.hpp"

namespace voipsim {

/// Simulation time in seconds. The clock never decreases across dispatched
/// events and is always finite and non-negative.
using SimTime = double;

enum class EventKind : uint8_t {
    GeneratePacket,         // a = traffic spec index, b = packet ordinal k
    LinkArrival,            // a = packet id, b = node id receiving the packet
    TransmissionComplete,   // a = channel id, b = packet id leaving the port
    SimulationEnd,          // no payload
};

inline const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::GeneratePacket: return "generate";
        case EventKind::LinkArrival: return "arrival";
        case EventKind::TransmissionComplete: return "tx-complete";
        case EventKind::SimulationEnd: return "end";
    }
    return "?";
}

/// A timestamped simulation action. (time, seq) is globally unique: seq is
/// assigned in scheduling order, so equal-time events dispatch in the order
/// they were scheduled.
struct Event {
    SimTime time = 0.0;
    uint64_t seq = 0;
    EventKind kind = EventKind::SimulationEnd;
    uint64_t a = 0;
    uint64_t b = 0;
};

/// Min-queue over events, lexicographic on (time, seq).
class EventQueue {
  public:
    void push(const Event& e) { heap_.push(e); }

    const Event& top() const { return heap_.top(); }

    Event pop() {
        Event e = heap_.top();
        heap_.pop();
        return e;
    }

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

  private:
    struct After {
        bool operator()(const Event& x, const Event& y) const {
            if (x.time != y.time) return x.time > y.time;
            return x.seq > y.seq;
        }
    };
    std::priority_queue<Event, std::vector<Event>, After> heap_;
};

/// Deterministic discrete-event loop: a monotone clock and a time-ordered
/// event queue. Dispatch order is a pure function of the schedule calls, so
/// identical inputs replay identical event sequences.
class Engine {
  public:
    SimTime now() const { return clock_; }
    uint64_t dispatched() const { return dispatched_; }
    std::size_t pending() const { return queue_.size(); }

    void schedule(SimTime time, EventKind kind, uint64_t a = 0, uint64_t b = 0) {
        if (!std::isfinite(time) || time < 0.0) {
            throw ValidationError("event scheduled at a non-finite or negative time");
        }
        if (time < clock_) {
            throw ValidationError("event scheduled in the past (before the current clock)");
        }
        queue_.push(Event{time, next_seq_++, kind, a, b});
    }

    /// Dispatches every event with time <= end in (time, seq) order, then
    /// leaves the clock at end. Returns the final clock. An exhausted queue
    /// simply ends the loop early; the clock still advances to end.
    template <typename Handler>
    SimTime run_until(SimTime end, Handler&& handle) {
        if (!std::isfinite(end) || end <= 0.0) {
            throw ValidationError("run_until requires a positive, finite end time");
        }
        while (!queue_.empty() && queue_.top().time <= end) {
            Event e = queue_.pop();
            invariant(e.time >= clock_, "event queue violated clock monotonicity");
            clock_ = e.time;
            ++dispatched_;
            handle(e);
        }
        clock_ = end;
        return clock_;
    }

  private:
    EventQueue queue_;
    SimTime clock_ = 0.0;
    uint64_t next_seq_ = 0;
    uint64_t dispatched_ = 0;
};

}  // namespace voipsim
