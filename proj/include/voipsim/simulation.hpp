#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "voipsim/engine.hpp"
#include "voipsim/metrics.hpp"
#include "voipsim/network.hpp"
#include "voipsim/scenario.hpp"
#include "voipsim/traffic.hpp"

namespace voipsim {

/// One complete, self-contained simulation run. Two instances built from
/// the same config are fully independent and may execute on different
/// threads; given equal configs they dispatch identical event sequences.
class Simulation {
  public:
    explicit Simulation(ScenarioConfig cfg)
        : cfg_(std::move(cfg)), net_(cfg_), metrics_(cfg_.duration_s, cfg_.warmup_s) {
        phases_.reserve(cfg_.traffic.size());
        for (const TrafficSpec& spec : cfg_.traffic) {
            phases_.push_back(phase_offset(spec, cfg_.seed));
        }
        for (std::size_t i = 0; i < cfg_.traffic.size(); ++i) {
            schedule_generation(static_cast<uint32_t>(i), 0);
        }
        engine_.schedule(cfg_.duration_s, EventKind::SimulationEnd);
    }

    /// Runs to the configured duration and closes the books. In-flight
    /// packets are truncated where they are; they count as sent, not lost.
    QosReport run() {
        invariant(!finished_, "simulation can only run once");
        finished_ = true;
        engine_.run_until(cfg_.duration_s, [this](const Event& e) { dispatch(e); });
        return metrics_.finalize(store_);
    }

    const ScenarioConfig& config() const { return cfg_; }
    const Network& network() const { return net_; }
    const PacketStore& packets() const { return store_; }
    const Engine& engine() const { return engine_; }

    /// Observer invoked for every dispatched event; test instrumentation.
    void set_trace(std::function<void(const Event&)> sink) { trace_ = std::move(sink); }

  private:
    void dispatch(const Event& e) {
        if (trace_) trace_(e);
        switch (e.kind) {
            case EventKind::GeneratePacket:
                on_generate(static_cast<uint32_t>(e.a), e.b);
                break;
            case EventKind::LinkArrival:
                forward(static_cast<NodeId>(e.b), static_cast<PacketId>(e.a));
                break;
            case EventKind::TransmissionComplete:
                on_transmission_complete(static_cast<uint32_t>(e.a), static_cast<PacketId>(e.b));
                break;
            case EventKind::SimulationEnd:
                break;  // marker; the loop bound does the truncation
        }
    }

    void on_generate(uint32_t spec_index, uint64_t k) {
        const TrafficSpec& spec = cfg_.traffic[spec_index];
        const SimTime now = engine_.now();
        const FlowId flow{spec.src, spec.dst, spec.cls};
        const PacketId packet = make_packet(store_, spec, flow, now);
        metrics_.on_generated(store_.at(packet));
        schedule_generation(spec_index, k + 1);
        forward(spec.src, packet);
    }

    void schedule_generation(uint32_t spec_index, uint64_t k) {
        const TrafficSpec& spec = cfg_.traffic[spec_index];
        const SimTime t = next_generation_time(spec, k, phases_[spec_index]);
        // stop_s is exclusive; the run end also bounds generation so the
        // throughput bins stay within [0, duration).
        if (t >= spec.stop_s || t >= cfg_.duration_s) return;
        engine_.schedule(t, EventKind::GeneratePacket, spec_index, k);
    }

    /// Store-and-forward step: deliver locally, hop through a cloud with
    /// its fixed transit delay, or hand the packet to the output port's
    /// scheduler and start transmitting if the port is idle.
    void forward(NodeId at, PacketId packet_id) {
        Packet& packet = store_.at(packet_id);
        const SimTime now = engine_.now();
        if (at == packet.flow.dst) {
            deliver(packet_id, now);
            return;
        }
        const uint32_t ch_id = net_.next_hop_channel(at, packet.flow.dst);
        invariant(ch_id != kNoChannel, "packet reached a node with no route to its destination");
        Channel& ch = net_.channel(ch_id);

        if (net_.node(at).kind == NodeKind::Cloud) {
            // Fixed-delay, infinite-bandwidth, zero-loss transit.
            engine_.schedule(now + net_.node(at).transit_delay_s + ch.prop_delay_s, EventKind::LinkArrival,
                             packet_id, ch.to);
            return;
        }

        const EnqueueOutcome outcome = ch.qdisc.enqueue(packet_id, packet.tos, packet.size_bytes, now);
        if (outcome == EnqueueOutcome::Dropped) {
            store_.mark_dropped(packet_id, now);
            metrics_.on_dropped(store_.at(packet_id));
            return;
        }
        if (!ch.qdisc.busy()) {
            start_transmission(ch, now);
        }
    }

    void start_transmission(Channel& ch, SimTime now) {
        auto item = ch.qdisc.dequeue(now);
        invariant(item.has_value(), "transmission started on an empty port");
        ch.qdisc.set_busy(true);
        engine_.schedule(now + serialization_delay(item->size_bytes, ch.rate_bps),
                         EventKind::TransmissionComplete, ch.id, item->packet);
    }

    void on_transmission_complete(uint32_t ch_id, PacketId packet_id) {
        Channel& ch = net_.channel(ch_id);
        const SimTime now = engine_.now();
        engine_.schedule(now + ch.prop_delay_s, EventKind::LinkArrival, packet_id, ch.to);
        if (!ch.qdisc.empty()) {
            start_transmission(ch, now);  // work conservation
        } else {
            ch.qdisc.set_busy(false);
        }
    }

    void deliver(PacketId packet_id, SimTime now) {
        store_.mark_delivered(packet_id, now);
        metrics_.on_delivered(store_.at(packet_id));
    }

    ScenarioConfig cfg_;
    Network net_;
    Engine engine_;
    PacketStore store_;
    MetricsCollector metrics_;
    std::vector<SimTime> phases_;
    std::function<void(const Event&)> trace_;
    bool finished_ = false;
};

}  // namespace voipsim
