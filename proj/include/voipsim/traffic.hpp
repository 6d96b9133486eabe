#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "voipsim/engine.hpp"
#include "voipsim/error.hpp"
#include "voipsim/packet.hpp"

namespace voipsim {

enum class TrafficPattern : uint8_t { Cbr = 0, OnOff = 1 };

inline const char* to_string(TrafficPattern p) {
    return p == TrafficPattern::Cbr ? "cbr" : "onoff";
}

/// One traffic source: a packet class, a constant packet rate, and an
/// active window. OnOff sources keep the CBR spacing but emit only inside
/// the on-intervals of an on/off cycle.
struct TrafficSpec {
    std::string name;
    TrafficClass cls = TrafficClass::Voice;
    uint8_t tos = 0;
    double rate_pps = 0.0;
    uint32_t packet_size_bytes = 0;
    SimTime start_s = 0.0;
    SimTime stop_s = 0.0;
    TrafficPattern pattern = TrafficPattern::Cbr;
    double on_s = 0.0;   // OnOff only
    double off_s = 0.0;  // OnOff only
    uint64_t jitter_seed = 0;  // 0 keeps the phase aligned to start_s
    NodeId src = 0;
    NodeId dst = 0;
    int line = 0;  // scenario file position, for diagnostics
};

/// Phase offset for a source: zero by default, or a seeded uniform draw
/// from [0, 1/rate) when the spec carries a jitter seed. Folding the
/// scenario seed in keeps distinct runs reproducible.
inline SimTime phase_offset(const TrafficSpec& spec, uint64_t scenario_seed) {
    if (spec.jitter_seed == 0) return 0.0;
    std::mt19937_64 rng(scenario_seed * 0x9e3779b97f4a7c15ull + spec.jitter_seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0 / spec.rate_pps);
    return dist(rng);
}

/// Generation time of the k-th packet (k >= 0), strictly increasing in k.
/// CBR: start + k/rate. OnOff: the same tick spacing, with ticks past an
/// on-interval carried into the next cycle.
inline SimTime next_generation_time(const TrafficSpec& spec, uint64_t k, SimTime phase = 0.0) {
    invariant(spec.rate_pps > 0.0, "traffic rate must be positive");
    if (spec.pattern == TrafficPattern::Cbr) {
        return spec.start_s + phase + static_cast<double>(k) / spec.rate_pps;
    }
    invariant(spec.on_s > 0.0 && spec.off_s > 0.0, "on/off durations must be positive");
    const uint64_t per_burst =
        std::max<uint64_t>(1, static_cast<uint64_t>(std::floor(spec.on_s * spec.rate_pps + 1e-9)));
    const uint64_t burst = k / per_burst;
    const uint64_t offset = k % per_burst;
    const double cycle = spec.on_s + spec.off_s;
    return spec.start_s + phase + static_cast<double>(burst) * cycle +
           static_cast<double>(offset) / spec.rate_pps;
}

/// Materializes packet k of a flow at its generation time. The caller owns
/// the sent counter; ids are unique by construction of the store.
inline PacketId make_packet(PacketStore& store, const TrafficSpec& spec, FlowId flow, SimTime now) {
    invariant(spec.packet_size_bytes > 0, "traffic packet size must be positive");
    return store.create(flow, spec.tos, spec.packet_size_bytes, now);
}

}  // namespace voipsim
