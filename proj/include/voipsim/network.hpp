#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

#include "voipsim/error.hpp"
#include "voipsim/qdisc.hpp"
#include "voipsim/scenario.hpp"

namespace voipsim {

inline constexpr uint32_t kNoChannel = std::numeric_limits<uint32_t>::max();

/// Serialization delay: the time to clock a packet onto a link.
inline double serialization_delay(uint32_t size_bytes, double rate_bps) {
    invariant(rate_bps > 0.0, "serialization requires a positive link rate");
    return static_cast<double>(size_bytes) * 8.0 / rate_bps;
}

/// One direction of a bidirectional link: a dedicated output port (with its
/// own scheduler) on the sending node.
struct Channel {
    uint32_t id = 0;
    NodeId from = 0;
    NodeId to = 0;
    double rate_bps = 0.0;
    double prop_delay_s = 0.0;
    bool wan = false;  // router port facing a cloud node; carries the configured qdisc
    Qdisc qdisc;

    Channel(uint32_t id_, NodeId from_, NodeId to_, double rate_bps_, double prop_delay_s_, bool wan_,
            QdiscConfig qcfg)
        : id(id_), from(from_), to(to_), rate_bps(rate_bps_), prop_delay_s(prop_delay_s_), wan(wan_),
          qdisc(std::move(qcfg), rate_bps_) {}
};

struct RuntimeNode {
    NodeKind kind = NodeKind::Host;
    double transit_delay_s = 0.0;
    std::vector<uint32_t> out_channels;
};

/// The static network: nodes, simplex channels, and a next-hop table
/// computed once at load by breadth-first search (deterministic: neighbors
/// expand in declaration order). Cloud nodes forward with infinite
/// bandwidth and no loss, adding only their transit delay; switches and
/// hosts use unbounded FIFO ports; router WAN ports carry the scenario's
/// scheduler under test.
class Network {
  public:
    explicit Network(const ScenarioConfig& cfg) {
        auto diags = validate_scenario(cfg);
        if (!diags.empty()) {
            std::string text;
            for (const auto& d : diags) text += to_string(d) + "\n";
            throw ValidationError("scenario failed validation:\n" + text);
        }

        nodes_.resize(cfg.nodes.size());
        for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
            nodes_[i].kind = cfg.nodes[i].kind;
            nodes_[i].transit_delay_s = cfg.nodes[i].kind == NodeKind::Cloud ? cfg.nodes[i].transit_delay_s : 0.0;
        }

        const QdiscConfig wan_qdisc = build_qdisc_config(cfg.qdisc);
        auto add_channel = [&](NodeId from, NodeId to, const LinkSpec& link) {
            const bool wan = nodes_[from].kind == NodeKind::Router && nodes_[to].kind == NodeKind::Cloud;
            const auto id = static_cast<uint32_t>(channels_.size());
            channels_.emplace_back(id, from, to, link.rate_bps, link.prop_delay_s, wan,
                                   wan ? wan_qdisc : QdiscConfig::fifo(kUnboundedCapacity));
            nodes_[from].out_channels.push_back(id);
        };
        for (const LinkSpec& link : cfg.links) {
            add_channel(link.a, link.b, link);
            add_channel(link.b, link.a, link);
        }

        build_routes();

        for (const TrafficSpec& t : cfg.traffic) {
            if (next_hop_channel(t.src, t.dst) == kNoChannel) {
                throw ValidationError("traffic '" + t.name + "': destination '" + cfg.nodes[t.dst].name +
                                      "' is unreachable from '" + cfg.nodes[t.src].name + "'");
            }
        }
    }

    std::size_t node_count() const { return nodes_.size(); }
    const RuntimeNode& node(NodeId id) const { return nodes_[id]; }

    std::size_t channel_count() const { return channels_.size(); }
    Channel& channel(uint32_t id) { return channels_[id]; }
    const Channel& channel(uint32_t id) const { return channels_[id]; }

    /// Output channel carrying traffic from `at` toward `dst`; kNoChannel if
    /// unreachable. Routes are fixed for the lifetime of the network.
    uint32_t next_hop_channel(NodeId at, NodeId dst) const {
        return next_hop_[at * nodes_.size() + dst];
    }

    /// Number of node traversals on the unique route from src to dst.
    uint32_t hop_count(NodeId src, NodeId dst) const {
        uint32_t hops = 0;
        NodeId at = src;
        while (at != dst) {
            const uint32_t ch = next_hop_channel(at, dst);
            invariant(ch != kNoChannel, "hop_count crossed an unroutable pair");
            at = channels_[ch].to;
            ++hops;
            invariant(hops <= nodes_.size(), "routing loop detected");
        }
        return hops;
    }

  private:
    // One BFS per destination, walked backwards: next_hop[at][dst] is the
    // first channel on the unique shortest path.
    void build_routes() {
        const std::size_t n = nodes_.size();
        next_hop_.assign(n * n, kNoChannel);
        for (NodeId dst = 0; dst < n; ++dst) {
            std::vector<uint32_t> toward(n, kNoChannel);  // channel whose `to` moves closer to dst
            std::vector<char> seen(n, 0);
            std::deque<NodeId> frontier{dst};
            seen[dst] = 1;
            while (!frontier.empty()) {
                const NodeId at = frontier.front();
                frontier.pop_front();
                for (uint32_t ch_id : nodes_[at].out_channels) {
                    // out-channel of `at` implies the reverse channel exists
                    const NodeId peer = channels_[ch_id].to;
                    if (seen[peer]) continue;
                    seen[peer] = 1;
                    for (uint32_t peer_ch : nodes_[peer].out_channels) {
                        if (channels_[peer_ch].to == at) {
                            toward[peer] = peer_ch;
                            break;
                        }
                    }
                    frontier.push_back(peer);
                }
            }
            for (NodeId at = 0; at < n; ++at) {
                next_hop_[at * n + dst] = at == dst ? kNoChannel : toward[at];
            }
        }
    }

    std::vector<RuntimeNode> nodes_;
    std::vector<Channel> channels_;
    std::vector<uint32_t> next_hop_;
};

}  // namespace voipsim
