#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "voipsim/error.hpp"
#include "voipsim/qdisc.hpp"
#include "voipsim/traffic.hpp"
#include "voipsim/util.hpp"

namespace voipsim {

inline constexpr int kScenarioSchemaVersion = 1;

enum class NodeKind : uint8_t { Host, Switch, Router, Cloud };

inline const char* to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::Host: return "host";
        case NodeKind::Switch: return "switch";
        case NodeKind::Router: return "router";
        case NodeKind::Cloud: return "cloud";
    }
    return "?";
}

inline std::optional<NodeKind> node_kind_from_string(std::string_view s) {
    if (s == "host") return NodeKind::Host;
    if (s == "switch") return NodeKind::Switch;
    if (s == "router") return NodeKind::Router;
    if (s == "cloud") return NodeKind::Cloud;
    return std::nullopt;
}

struct NodeSpec {
    std::string name;
    NodeKind kind = NodeKind::Host;
    double transit_delay_s = 0.020;  // cloud transit, one way
    int line = 0;
};

/// A bidirectional link; at run time it becomes two independent simplex
/// channels sharing these parameters.
struct LinkSpec {
    std::string name;
    NodeId a = 0;
    NodeId b = 0;
    double rate_bps = 0.0;
    double prop_delay_s = 0.0;
    int line = 0;
};

/// The scheduler applied to every router WAN port (ports facing a cloud
/// node). LAN ports always run unbounded FIFO.
struct QdiscSection {
    Discipline discipline = Discipline::Wfq;
    uint32_t capacity_pkts = 100;  // FIFO: total; PQ/WFQ: per queue
    std::array<uint8_t, 8> tos_map = {3, 3, 2, 2, 1, 1, 0, 0};
    std::vector<double> weights = {4.0, 3.0, 2.0, 1.0};
    int line = 0;
};

/// Builds the runtime scheduler parameters for one WAN port.
inline QdiscConfig build_qdisc_config(const QdiscSection& section) {
    if (section.discipline == Discipline::Fifo) {
        return QdiscConfig::fifo(section.capacity_pkts);
    }
    uint8_t max_queue = 0;
    for (uint8_t q : section.tos_map) max_queue = std::max(max_queue, q);
    const uint32_t queue_count = static_cast<uint32_t>(max_queue) + 1;
    std::vector<uint32_t> capacities(queue_count, section.capacity_pkts);
    if (section.discipline == Discipline::Pq) {
        return QdiscConfig::pq(section.tos_map, std::move(capacities));
    }
    return QdiscConfig::wfq(section.tos_map, std::move(capacities), section.weights);
}

struct Diagnostic {
    int line = 0;
    std::string field;
    std::string message;
};

inline std::string to_string(const Diagnostic& d) {
    std::ostringstream out;
    out << "line " << d.line;
    if (!d.field.empty()) out << ", field '" << d.field << "'";
    out << ": " << d.message;
    return out.str();
}

/// Full declarative description of one simulation: topology, WAN-port
/// scheduler, traffic, duration, and seed.
struct ScenarioConfig {
    int schema = kScenarioSchemaVersion;
    std::string name;
    double duration_s = 480.0;
    uint64_t seed = 1;
    double warmup_s = 10.0;
    std::string out_dir = "out";
    std::vector<NodeSpec> nodes;
    std::vector<LinkSpec> links;
    QdiscSection qdisc;
    std::vector<TrafficSpec> traffic;

    std::optional<NodeId> node_index(std::string_view node_name) const {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].name == node_name) return static_cast<NodeId>(i);
        }
        return std::nullopt;
    }
};

namespace detail {

struct RawEntry {
    std::string key;
    std::vector<std::string> values;
    int line = 0;
};

struct RawSection {
    std::string kind;   // "node" | "link" | "qdisc" | "traffic"
    std::string label;  // empty for qdisc
    int line = 0;
    std::vector<RawEntry> entries;
};

inline std::vector<std::string> tokenize_line(std::string_view line) {
    std::string spaced;
    spaced.reserve(line.size());
    for (char c : line) {
        if (c == '#') break;
        if (c == '{' || c == '}' || c == '[' || c == ']') {
            spaced.push_back(' ');
            spaced.push_back(c);
            spaced.push_back(' ');
        } else {
            spaced.push_back(c);
        }
    }
    std::vector<std::string> tokens;
    std::istringstream in(spaced);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

class EntryReader {
  public:
    EntryReader(const RawSection& section, std::vector<Diagnostic>& diagnostics)
        : section_(section), diagnostics_(diagnostics), used_(section.entries.size(), false) {}

    const RawEntry* find(std::string_view key) {
        for (std::size_t i = 0; i < section_.entries.size(); ++i) {
            if (section_.entries[i].key == key) {
                if (used_[i]) return nullptr;
                used_[i] = true;
                // duplicate keys are an error
                for (std::size_t j = i + 1; j < section_.entries.size(); ++j) {
                    if (section_.entries[j].key == key && !used_[j]) {
                        used_[j] = true;
                        error(section_.entries[j].line, std::string(key), "duplicate key");
                    }
                }
                return &section_.entries[i];
            }
        }
        return nullptr;
    }

    std::optional<std::string> ident(std::string_view key, bool required) {
        const RawEntry* e = find(key);
        if (!e) {
            if (required) error(section_.line, std::string(key), "missing required key");
            return std::nullopt;
        }
        if (e->values.size() != 1) {
            error(e->line, std::string(key), "expected a single value");
            return std::nullopt;
        }
        return e->values[0];
    }

    std::optional<double> number(std::string_view key, bool required) {
        auto text = ident(key, required);
        if (!text) return std::nullopt;
        return parse_number(*text, key);
    }

    std::optional<std::vector<double>> array(std::string_view key, bool required) {
        const RawEntry* e = find(key);
        if (!e) {
            if (required) error(section_.line, std::string(key), "missing required key");
            return std::nullopt;
        }
        if (e->values.size() < 2 || e->values.front() != "[" || e->values.back() != "]") {
            error(e->line, std::string(key), "expected an array like [1 2 3]");
            return std::nullopt;
        }
        std::vector<double> result;
        for (std::size_t i = 1; i + 1 < e->values.size(); ++i) {
            auto v = parse_number(e->values[i], key, e->line);
            if (!v) return std::nullopt;
            result.push_back(*v);
        }
        return result;
    }

    void finish() {
        for (std::size_t i = 0; i < section_.entries.size(); ++i) {
            if (!used_[i]) {
                error(section_.entries[i].line, section_.entries[i].key, "unknown key in '" + section_.kind + "' section");
            }
        }
    }

    void error(int line, std::string field, std::string message) {
        diagnostics_.push_back(Diagnostic{line, std::move(field), std::move(message)});
    }

    int section_line() const { return section_.line; }

  private:
    std::optional<double> parse_number(const std::string& text, std::string_view key, int line = 0) {
        try {
            std::size_t consumed = 0;
            double value = std::stod(text, &consumed);
            if (consumed != text.size()) throw std::invalid_argument("trailing characters");
            return value;
        } catch (const std::exception&) {
            error(line ? line : section_.line, std::string(key), "expected a number, got '" + text + "'");
            return std::nullopt;
        }
    }

    const RawSection& section_;
    std::vector<Diagnostic>& diagnostics_;
    std::vector<bool> used_;
};

}  // namespace detail

struct ParseResult {
    std::optional<ScenarioConfig> config;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return config.has_value(); }

    std::string diagnostics_text() const {
        std::string out;
        for (const Diagnostic& d : diagnostics) {
            out += to_string(d);
            out += '\n';
        }
        return out;
    }
};

/// Structural and semantic checks on an assembled config. Returns
/// positioned diagnostics; an empty list means the scenario is runnable.
inline std::vector<Diagnostic> validate_scenario(const ScenarioConfig& cfg) {
    std::vector<Diagnostic> diags;
    auto fail = [&](int line, std::string field, std::string message) {
        diags.push_back(Diagnostic{line, std::move(field), std::move(message)});
    };

    if (cfg.schema != kScenarioSchemaVersion) {
        fail(1, "schema", "unsupported schema version (expected 1)");
    }
    if (cfg.name.empty()) fail(1, "name", "scenario name is required");
    if (!(cfg.duration_s > 0.0) || !std::isfinite(cfg.duration_s)) {
        fail(1, "duration_s", "duration must be positive and finite");
    }
    if (cfg.warmup_s < 0.0 || cfg.warmup_s >= cfg.duration_s) {
        fail(1, "warmup_s", "warm-up must be non-negative and shorter than the run");
    }

    if (cfg.nodes.size() < 2) fail(1, "node", "a scenario needs at least two nodes");
    for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
        const NodeSpec& n = cfg.nodes[i];
        for (std::size_t j = i + 1; j < cfg.nodes.size(); ++j) {
            if (cfg.nodes[j].name == n.name) fail(cfg.nodes[j].line, "node", "duplicate node name '" + n.name + "'");
        }
        if (n.transit_delay_s < 0.0) fail(n.line, "transit_delay_s", "cloud transit delay must be non-negative");
    }

    for (std::size_t i = 0; i < cfg.links.size(); ++i) {
        const LinkSpec& l = cfg.links[i];
        for (std::size_t j = i + 1; j < cfg.links.size(); ++j) {
            if (cfg.links[j].name == l.name) fail(cfg.links[j].line, "link", "duplicate link name '" + l.name + "'");
        }
        if (l.a >= cfg.nodes.size()) fail(l.line, "a", "link endpoint is not a known node");
        if (l.b >= cfg.nodes.size()) fail(l.line, "b", "link endpoint is not a known node");
        if (l.a == l.b) fail(l.line, "b", "link endpoints must differ");
        if (!(l.rate_bps > 0.0) || !std::isfinite(l.rate_bps)) fail(l.line, "rate_bps", "link rate must be positive");
        if (l.prop_delay_s < 0.0) fail(l.line, "prop_delay_s", "propagation delay must be non-negative");
    }

    // Connectivity over the undirected link graph.
    if (!cfg.nodes.empty() && diags.empty()) {
        std::vector<char> seen(cfg.nodes.size(), 0);
        std::vector<NodeId> frontier{0};
        seen[0] = 1;
        while (!frontier.empty()) {
            NodeId at = frontier.back();
            frontier.pop_back();
            for (const LinkSpec& l : cfg.links) {
                NodeId peer;
                if (l.a == at) peer = l.b;
                else if (l.b == at) peer = l.a;
                else continue;
                if (!seen[peer]) {
                    seen[peer] = 1;
                    frontier.push_back(peer);
                }
            }
        }
        for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
            if (!seen[i]) fail(cfg.nodes[i].line, "node", "node '" + cfg.nodes[i].name + "' is unreachable (graph not connected)");
        }
    }

    if (cfg.qdisc.capacity_pkts == 0) fail(cfg.qdisc.line, "capacity_pkts", "capacity must be positive");
    uint8_t max_queue = 0;
    for (uint8_t q : cfg.qdisc.tos_map) {
        if (q >= 8) fail(cfg.qdisc.line, "tos_map", "queue index must be 0..7");
        max_queue = std::max(max_queue, q);
    }
    if (cfg.qdisc.discipline == Discipline::Wfq) {
        if (cfg.qdisc.weights.size() != static_cast<std::size_t>(max_queue) + 1) {
            fail(cfg.qdisc.line, "weights", "wfq needs one weight per queue (tos_map names " +
                                                std::to_string(max_queue + 1) + " queues)");
        }
        for (double w : cfg.qdisc.weights) {
            if (!(w > 0.0)) fail(cfg.qdisc.line, "weights", "weights must be strictly positive");
        }
    }

    if (cfg.traffic.empty()) fail(1, "traffic", "a scenario needs at least one traffic source");
    for (std::size_t i = 0; i < cfg.traffic.size(); ++i) {
        const TrafficSpec& t = cfg.traffic[i];
        for (std::size_t j = i + 1; j < cfg.traffic.size(); ++j) {
            if (cfg.traffic[j].name == t.name) fail(cfg.traffic[j].line, "traffic", "duplicate traffic name '" + t.name + "'");
        }
        if (t.src >= cfg.nodes.size()) fail(t.line, "src", "unknown source node");
        if (t.dst >= cfg.nodes.size()) fail(t.line, "dst", "unknown destination node");
        if (t.src < cfg.nodes.size() && cfg.nodes[t.src].kind != NodeKind::Host) {
            fail(t.line, "src", "traffic must originate at a host node");
        }
        if (t.dst < cfg.nodes.size() && cfg.nodes[t.dst].kind != NodeKind::Host) {
            fail(t.line, "dst", "traffic must terminate at a host node");
        }
        if (t.src == t.dst) fail(t.line, "dst", "source and destination must differ");
        if (t.tos >= 8) fail(t.line, "tos", "ToS must be 0..7");
        if (!(t.rate_pps > 0.0)) fail(t.line, "rate_pps", "rate must be positive");
        if (t.packet_size_bytes == 0) fail(t.line, "packet_size_bytes", "packet size must be positive");
        if (t.start_s < 0.0) fail(t.line, "start_s", "start must be non-negative");
        if (!(t.stop_s > t.start_s)) fail(t.line, "stop_s", "stop must come after start");
        if (t.pattern == TrafficPattern::OnOff && (!(t.on_s > 0.0) || !(t.off_s > 0.0))) {
            fail(t.line, "pattern", "onoff needs positive on_s and off_s");
        }
    }
    return diags;
}

/// Parses the structured scenario text. On success the returned config is
/// fully validated; otherwise diagnostics carry line and field positions.
inline ParseResult parse_scenario(std::string_view text) {
    ParseResult result;
    std::vector<Diagnostic>& diags = result.diagnostics;
    ScenarioConfig cfg;
    cfg.schema = -1;  // must be declared explicitly

    // Pass 1: lines -> top-level entries and raw sections.
    std::vector<detail::RawEntry> top;
    std::vector<detail::RawSection> sections;
    detail::RawSection* open_section = nullptr;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        ++line_no;
        auto tokens = detail::tokenize_line(text.substr(pos, eol - pos));
        pos = eol + 1;
        if (tokens.empty()) continue;

        if (open_section) {
            if (tokens[0] == "}") {
                if (tokens.size() > 1) diags.push_back({line_no, "", "unexpected tokens after '}'"});
                open_section = nullptr;
            } else if (tokens[0] == "{" || tokens.back() == "{") {
                diags.push_back({line_no, "", "nested sections are not supported"});
            } else {
                detail::RawEntry entry{tokens[0], {tokens.begin() + 1, tokens.end()}, line_no};
                open_section->entries.push_back(std::move(entry));
            }
            continue;
        }

        if (tokens.back() == "{") {
            detail::RawSection section;
            section.kind = tokens[0];
            section.line = line_no;
            if (tokens.size() == 3) {
                section.label = tokens[1];
            } else if (tokens.size() != 2) {
                diags.push_back({line_no, "", "expected 'kind [name] {'"});
                continue;
            }
            sections.push_back(std::move(section));
            open_section = &sections.back();
            continue;
        }
        if (tokens[0] == "}") {
            diags.push_back({line_no, "", "'}' without an open section"});
            continue;
        }
        top.push_back(detail::RawEntry{tokens[0], {tokens.begin() + 1, tokens.end()}, line_no});
    }
    if (open_section) diags.push_back({line_no, "", "unterminated section '" + open_section->kind + "'"});

    // Pass 2: typed extraction.
    auto top_value = [&](const detail::RawEntry& e) -> std::optional<std::string> {
        if (e.values.size() != 1) {
            diags.push_back({e.line, e.key, "expected a single value"});
            return std::nullopt;
        }
        return e.values[0];
    };
    auto top_number = [&](const detail::RawEntry& e) -> std::optional<double> {
        auto v = top_value(e);
        if (!v) return std::nullopt;
        try {
            std::size_t consumed = 0;
            double value = std::stod(*v, &consumed);
            if (consumed != v->size()) throw std::invalid_argument("trailing characters");
            return value;
        } catch (const std::exception&) {
            diags.push_back({e.line, e.key, "expected a number, got '" + *v + "'"});
            return std::nullopt;
        }
    };

    for (const auto& e : top) {
        if (e.key == "schema") {
            if (auto v = top_number(e)) cfg.schema = static_cast<int>(*v);
        } else if (e.key == "name") {
            if (auto v = top_value(e)) cfg.name = *v;
        } else if (e.key == "duration_s") {
            if (auto v = top_number(e)) cfg.duration_s = *v;
        } else if (e.key == "seed") {
            if (auto v = top_number(e)) cfg.seed = static_cast<uint64_t>(*v);
        } else if (e.key == "warmup_s") {
            if (auto v = top_number(e)) cfg.warmup_s = *v;
        } else if (e.key == "out_dir") {
            if (auto v = top_value(e)) cfg.out_dir = *v;
        } else {
            diags.push_back({e.line, e.key, "unknown top-level key"});
        }
    }
    if (cfg.schema == -1) {
        diags.push_back({1, "schema", "missing 'schema 1' declaration"});
        cfg.schema = 0;
    }

    struct PendingLink {
        LinkSpec spec;
        std::string a_name, b_name;
    };
    struct PendingTraffic {
        TrafficSpec spec;
        std::string src_name, dst_name;
    };
    std::vector<PendingLink> pending_links;
    std::vector<PendingTraffic> pending_traffic;
    bool saw_qdisc = false;

    for (const auto& section : sections) {
        detail::EntryReader reader(section, diags);
        if (section.kind == "node") {
            NodeSpec node;
            node.name = section.label;
            node.line = section.line;
            if (node.name.empty()) reader.error(section.line, "node", "node needs a name: 'node NAME {'");
            if (auto kind = reader.ident("kind", true)) {
                if (auto k = node_kind_from_string(*kind)) node.kind = *k;
                else reader.error(section.line, "kind", "unknown node kind '" + *kind + "'");
            }
            if (auto transit = reader.number("transit_delay_s", false)) {
                node.transit_delay_s = *transit;
                if (node.kind != NodeKind::Cloud) {
                    reader.error(section.line, "transit_delay_s", "only cloud nodes take a transit delay");
                }
            }
            reader.finish();
            cfg.nodes.push_back(std::move(node));
        } else if (section.kind == "link") {
            PendingLink link;
            link.spec.name = section.label;
            link.spec.line = section.line;
            if (link.spec.name.empty()) reader.error(section.line, "link", "link needs a name: 'link NAME {'");
            if (auto a = reader.ident("a", true)) link.a_name = *a;
            if (auto b = reader.ident("b", true)) link.b_name = *b;
            if (auto rate = reader.number("rate_bps", true)) link.spec.rate_bps = *rate;
            if (auto prop = reader.number("prop_delay_s", false)) link.spec.prop_delay_s = *prop;
            reader.finish();
            pending_links.push_back(std::move(link));
        } else if (section.kind == "qdisc") {
            if (saw_qdisc) reader.error(section.line, "qdisc", "only one qdisc section is allowed");
            saw_qdisc = true;
            cfg.qdisc.line = section.line;
            if (auto d = reader.ident("discipline", true)) {
                if (auto disc = discipline_from_string(*d)) cfg.qdisc.discipline = *disc;
                else reader.error(section.line, "discipline", "expected fifo, pq, or wfq");
            }
            if (auto cap = reader.number("capacity_pkts", false)) cfg.qdisc.capacity_pkts = static_cast<uint32_t>(*cap);
            if (auto map = reader.array("tos_map", false)) {
                if (map->size() != 8) {
                    reader.error(section.line, "tos_map", "tos_map needs exactly 8 entries (ToS 0..7)");
                } else {
                    for (std::size_t i = 0; i < 8; ++i) cfg.qdisc.tos_map[i] = static_cast<uint8_t>((*map)[i]);
                }
            }
            if (auto weights = reader.array("weights", false)) cfg.qdisc.weights = *weights;
            reader.finish();
        } else if (section.kind == "traffic") {
            PendingTraffic t;
            t.spec.name = section.label;
            t.spec.line = section.line;
            t.spec.stop_s = -1.0;  // filled from the run duration when omitted
            if (t.spec.name.empty()) reader.error(section.line, "traffic", "traffic needs a name: 'traffic NAME {'");
            if (auto cls = reader.ident("class", true)) {
                if (auto c = traffic_class_from_string(*cls)) t.spec.cls = *c;
                else reader.error(section.line, "class", "expected voice, video, ftp, or background");
            }
            if (auto src = reader.ident("src", true)) t.src_name = *src;
            if (auto dst = reader.ident("dst", true)) t.dst_name = *dst;
            if (auto tos = reader.number("tos", true)) t.spec.tos = static_cast<uint8_t>(*tos);
            if (auto rate = reader.number("rate_pps", true)) t.spec.rate_pps = *rate;
            if (auto size = reader.number("packet_size_bytes", true)) t.spec.packet_size_bytes = static_cast<uint32_t>(*size);
            if (auto start = reader.number("start_s", false)) t.spec.start_s = *start;
            if (auto stop = reader.number("stop_s", false)) t.spec.stop_s = *stop;
            if (auto pattern = reader.ident("pattern", false)) {
                if (*pattern == "cbr") t.spec.pattern = TrafficPattern::Cbr;
                else if (*pattern == "onoff") t.spec.pattern = TrafficPattern::OnOff;
                else reader.error(section.line, "pattern", "expected cbr or onoff");
            }
            if (auto on = reader.number("on_s", false)) t.spec.on_s = *on;
            if (auto off = reader.number("off_s", false)) t.spec.off_s = *off;
            if (auto seed = reader.number("jitter_seed", false)) t.spec.jitter_seed = static_cast<uint64_t>(*seed);
            reader.finish();
            pending_traffic.push_back(std::move(t));
        } else {
            diags.push_back({section.line, section.kind, "unknown section kind"});
        }
    }

    // Pass 3: name resolution.
    for (auto& link : pending_links) {
        auto a = cfg.node_index(link.a_name);
        auto b = cfg.node_index(link.b_name);
        if (!a) diags.push_back({link.spec.line, "a", "unknown node '" + link.a_name + "'"});
        if (!b) diags.push_back({link.spec.line, "b", "unknown node '" + link.b_name + "'"});
        if (a) link.spec.a = *a;
        if (b) link.spec.b = *b;
        cfg.links.push_back(link.spec);
    }
    for (auto& t : pending_traffic) {
        auto src = cfg.node_index(t.src_name);
        auto dst = cfg.node_index(t.dst_name);
        if (!src) diags.push_back({t.spec.line, "src", "unknown node '" + t.src_name + "'"});
        if (!dst) diags.push_back({t.spec.line, "dst", "unknown node '" + t.dst_name + "'"});
        if (src) t.spec.src = *src;
        if (dst) t.spec.dst = *dst;
        if (t.spec.stop_s < 0.0) t.spec.stop_s = cfg.duration_s;
        cfg.traffic.push_back(t.spec);
    }
    if (!saw_qdisc) diags.push_back({1, "qdisc", "missing qdisc section"});

    if (diags.empty()) {
        auto semantic = validate_scenario(cfg);
        diags.insert(diags.end(), semantic.begin(), semantic.end());
    }
    if (diags.empty()) result.config = std::move(cfg);
    return result;
}

inline ScenarioConfig parse_scenario_or_throw(std::string_view text) {
    ParseResult result = parse_scenario(text);
    if (!result.ok()) {
        throw ValidationError("invalid scenario:\n" + result.diagnostics_text());
    }
    return std::move(*result.config);
}

/// Canonical text form; parse(serialize(cfg)) reproduces cfg. Skipping the
/// qdisc section yields the discipline-independent identity used to
/// fingerprint comparison runs.
inline std::string serialize_scenario(const ScenarioConfig& cfg, bool include_qdisc = true) {
    std::ostringstream out;
    out << "schema " << cfg.schema << "\n";
    out << "name " << cfg.name << "\n";
    out << "duration_s " << format_double(cfg.duration_s) << "\n";
    out << "seed " << cfg.seed << "\n";
    out << "warmup_s " << format_double(cfg.warmup_s) << "\n";
    out << "out_dir " << cfg.out_dir << "\n";
    for (const NodeSpec& n : cfg.nodes) {
        out << "node " << n.name << " {\n";
        out << "  kind " << to_string(n.kind) << "\n";
        if (n.kind == NodeKind::Cloud) out << "  transit_delay_s " << format_double(n.transit_delay_s) << "\n";
        out << "}\n";
    }
    for (const LinkSpec& l : cfg.links) {
        out << "link " << l.name << " {\n";
        out << "  a " << cfg.nodes[l.a].name << "\n";
        out << "  b " << cfg.nodes[l.b].name << "\n";
        out << "  rate_bps " << format_double(l.rate_bps) << "\n";
        out << "  prop_delay_s " << format_double(l.prop_delay_s) << "\n";
        out << "}\n";
    }
    if (include_qdisc) {
        out << "qdisc {\n";
        out << "  discipline " << to_string(cfg.qdisc.discipline) << "\n";
        out << "  capacity_pkts " << cfg.qdisc.capacity_pkts << "\n";
        out << "  tos_map [";
        for (std::size_t i = 0; i < 8; ++i) out << (i ? " " : "") << static_cast<int>(cfg.qdisc.tos_map[i]);
        out << "]\n";
        out << "  weights [";
        for (std::size_t i = 0; i < cfg.qdisc.weights.size(); ++i) {
            out << (i ? " " : "") << format_double(cfg.qdisc.weights[i]);
        }
        out << "]\n";
        out << "}\n";
    }
    for (const TrafficSpec& t : cfg.traffic) {
        out << "traffic " << t.name << " {\n";
        out << "  class " << to_string(t.cls) << "\n";
        out << "  src " << cfg.nodes[t.src].name << "\n";
        out << "  dst " << cfg.nodes[t.dst].name << "\n";
        out << "  tos " << static_cast<int>(t.tos) << "\n";
        out << "  rate_pps " << format_double(t.rate_pps) << "\n";
        out << "  packet_size_bytes " << t.packet_size_bytes << "\n";
        out << "  start_s " << format_double(t.start_s) << "\n";
        out << "  stop_s " << format_double(t.stop_s) << "\n";
        out << "  pattern " << to_string(t.pattern) << "\n";
        if (t.pattern == TrafficPattern::OnOff) {
            out << "  on_s " << format_double(t.on_s) << "\n";
            out << "  off_s " << format_double(t.off_s) << "\n";
        }
        if (t.jitter_seed != 0) out << "  jitter_seed " << t.jitter_seed << "\n";
        out << "}\n";
    }
    return out.str();
}

/// Identity of a scenario with the qdisc dimension masked out. The three
/// legs of a comparison must share this hash.
inline uint64_t scenario_hash_excluding_qdisc(const ScenarioConfig& cfg) {
    return fnv1a_hash(serialize_scenario(cfg, /*include_qdisc=*/false));
}

}  // namespace voipsim
