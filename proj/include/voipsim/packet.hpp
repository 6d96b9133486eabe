#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "voipsim/engine.hpp"
#include "voipsim/error.hpp"

namespace voipsim {

using NodeId = uint32_t;
using PacketId = uint32_t;

enum class TrafficClass : uint8_t { Voice = 0, Video = 1, Ftp = 2, Background = 3 };

inline constexpr std::size_t kTrafficClassCount = 4;

inline const char* to_string(TrafficClass cls) {
    switch (cls) {
        case TrafficClass::Voice: return "voice";
        case TrafficClass::Video: return "video";
        case TrafficClass::Ftp: return "ftp";
        case TrafficClass::Background: return "background";
    }
    return "?";
}

inline std::optional<TrafficClass> traffic_class_from_string(std::string_view s) {
    if (s == "voice") return TrafficClass::Voice;
    if (s == "video") return TrafficClass::Video;
    if (s == "ftp") return TrafficClass::Ftp;
    if (s == "background") return TrafficClass::Background;
    return std::nullopt;
}

/// Aggregation key for per-class accounting; stable for the scenario lifetime.
struct FlowId {
    NodeId src = 0;
    NodeId dst = 0;
    TrafficClass cls = TrafficClass::Voice;
};

/// A simulated datagram, the unit of all measurement. At most one of
/// delivered_at / dropped_at is ever set.
struct Packet {
    PacketId id = 0;
    FlowId flow;
    TrafficClass cls = TrafficClass::Voice;
    uint8_t tos = 0;
    uint32_t size_bytes = 0;
    SimTime created_at = 0.0;
    std::optional<SimTime> delivered_at;
    std::optional<SimTime> dropped_at;

    bool in_flight() const { return !delivered_at && !dropped_at; }
};

/// Arena owning every packet generated in one run, indexed by id.
class PacketStore {
  public:
    PacketId create(FlowId flow, uint8_t tos, uint32_t size_bytes, SimTime now) {
        invariant(size_bytes > 0, "packet size must be positive");
        PacketId id = static_cast<PacketId>(packets_.size());
        packets_.push_back(Packet{id, flow, flow.cls, tos, size_bytes, now, {}, {}});
        return id;
    }

    void mark_delivered(PacketId id, SimTime now) {
        Packet& p = at(id);
        invariant(!p.dropped_at.has_value(), "packet delivered after being dropped");
        invariant(!p.delivered_at.has_value(), "packet delivered twice");
        invariant(now >= p.created_at, "packet delivered before it was created");
        p.delivered_at = now;
    }

    void mark_dropped(PacketId id, SimTime now) {
        Packet& p = at(id);
        invariant(p.in_flight(), "packet dropped after delivery or a previous drop");
        p.dropped_at = now;
    }

    Packet& at(PacketId id) {
        invariant(id < packets_.size(), "packet id out of range");
        return packets_[id];
    }
    const Packet& at(PacketId id) const {
        invariant(id < packets_.size(), "packet id out of range");
        return packets_[id];
    }

    std::size_t size() const { return packets_.size(); }
    const std::vector<Packet>& all() const { return packets_; }

  private:
    std::vector<Packet> packets_;
};

}  // namespace voipsim
