#ifndef DGSCHED_CONFIG_IO_HPP
#define DGSCHED_CONFIG_IO_HPP

// YAML model files. Schema (see README for a full example):
//
//   nodes: [A, B, C]
//   links:
//     - {from: A, to: B}                       # capacity 1
//     - {from: B, to: C, capacity: 2, bidirectional: true}
//     - {from: C, to: A, states: [0, 1, 2]}    # i.i.d. uniform fading
//   flows:
//     - {name: f1, source: A, destination: C, min_rate: 0.1,
//        delay_threshold: 150, arrival: {kind: poisson, rate: 0.3}}
//   interference:
//     kind: conflict_graph                     # or node_exclusive (default)
//     conflicts: [[A>B, B>C]]
//   control: {q_max: 5, admit_max: 2, V: 1000, ...}

#include <fstream>
#include <sstream>
#include <string>

#include <yaml-cpp/yaml.h>

#include "dgsched/error.hpp"
#include "dgsched/model.hpp"

namespace dgsched {

struct LoadedModel {
  NetworkModel model;
  SimConfig config;
};

namespace detail {

class YamlReader {
public:
  explicit YamlReader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& what) const {
    const auto mark = at.Mark();
    std::string where = origin_;
    if (mark.line >= 0) where += ":" + std::to_string(mark.line + 1) + ":" + std::to_string(mark.column + 1);
    throw ConfigError(where + ": " + what);
  }

  YAML::Node require(const YAML::Node& parent, const std::string& key, const std::string& ctx) const {
    if (!parent.IsMap()) fail(parent, ctx + " must be a mapping");
    YAML::Node n = parent[key];
    if (!n) fail(parent, "missing field '" + key + "' in " + ctx);
    return n;
  }

  template <typename T>
  T as(const YAML::Node& n, const std::string& what) const {
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, "field '" + what + "' has the wrong type");
    }
  }

  template <typename T>
  T get(const YAML::Node& parent, const std::string& key, const std::string& ctx) const {
    return as<T>(require(parent, key, ctx), key);
  }

  template <typename T>
  T get_or(const YAML::Node& parent, const std::string& key, T fallback) const {
    if (!parent || !parent.IsMap() || !parent[key]) return fallback;
    return as<T>(parent[key], key);
  }

  NodeId node(const NetworkModel& m, const YAML::Node& parent, const std::string& key, const std::string& ctx) const {
    const YAML::Node n = require(parent, key, ctx);
    const auto name = as<std::string>(n, key);
    const auto id = m.find_node(name);
    if (!id) fail(n, "unknown node '" + name + "' in " + ctx);
    return *id;
  }

  LinkId link(const NetworkModel& m, const YAML::Node& n) const {
    const auto s = as<std::string>(n, "conflicts");
    const auto gt = s.find('>');
    if (gt == std::string::npos) fail(n, "link reference '" + s + "' must look like FROM>TO");
    const auto a = m.find_node(s.substr(0, gt));
    const auto b = m.find_node(s.substr(gt + 1));
    if (a && b)
      for (LinkId l = 0; l < m.num_links(); ++l)
        if (m.links[l].from == *a && m.links[l].to == *b) return l;
    fail(n, "unknown link '" + s + "'");
  }

private:
  std::string origin_;
};

} // namespace detail

/// Parses a model document. `origin` prefixes error messages (usually the path).
inline LoadedModel parse_model(const std::string& text, const std::string& origin = "<input>") {
  detail::YamlReader rd(origin);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
                      ": " + e.msg);
  }
  if (!root.IsMap()) rd.fail(root, "top level must be a mapping");

  LoadedModel out;
  NetworkModel& m = out.model;
  const YAML::Node nodes = rd.require(root, "nodes", "model");
  if (!nodes.IsSequence()) rd.fail(nodes, "'nodes' must be a list of names");
  for (const auto& n : nodes) m.nodes.push_back(rd.as<std::string>(n, "nodes"));

  const YAML::Node links = rd.require(root, "links", "model");
  if (!links.IsSequence()) rd.fail(links, "'links' must be a list");
  for (std::size_t i = 0; i < links.size(); ++i) {
    const YAML::Node ln = links[i];
    const std::string ctx = "links[" + std::to_string(i) + "]";
    Link k;
    k.from = rd.node(m, ln, "from", ctx);
    k.to = rd.node(m, ln, "to", ctx);
    k.capacity = rd.get_or<int>(ln, "capacity", 1);
    k.fading_states = rd.get_or<std::vector<int>>(ln, "states", {});
    m.links.push_back(k);
    if (rd.get_or<bool>(ln, "bidirectional", false)) {
      std::swap(k.from, k.to);
      m.links.push_back(k);
    }
  }

  const YAML::Node flows = rd.require(root, "flows", "model");
  if (!flows.IsSequence()) rd.fail(flows, "'flows' must be a list");
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const YAML::Node fn = flows[i];
    const std::string ctx = "flows[" + std::to_string(i) + "]";
    FlowSpec f;
    f.name = rd.get_or<std::string>(fn, "name", "f" + std::to_string(i));
    f.source = rd.node(m, fn, "source", ctx);
    f.destination = rd.node(m, fn, "destination", ctx);
    f.min_rate = rd.get<double>(fn, "min_rate", ctx);
    f.delay_threshold = rd.get<double>(fn, "delay_threshold", ctx);
    if (const YAML::Node an = fn["arrival"]) {
      const auto kind = rd.get<std::string>(an, "kind", ctx + ".arrival");
      if (kind == "backlogged") {
        f.arrival.kind = ArrivalKind::Backlogged;
      } else if (kind == "poisson") {
        f.arrival.kind = ArrivalKind::Poisson;
        f.arrival.rate = rd.get<double>(an, "rate", ctx + ".arrival");
      } else if (kind == "trace") {
        f.arrival.kind = ArrivalKind::Trace;
        f.arrival.trace = rd.get<std::vector<int>>(an, "values", ctx + ".arrival");
      } else {
        rd.fail(an, "unknown arrival kind '" + kind + "'");
      }
    }
    m.flows.push_back(std::move(f));
  }

  if (const YAML::Node in = root["interference"]) {
    const auto kind = rd.get_or<std::string>(in, "kind", "node_exclusive");
    if (kind == "node_exclusive") {
      m.interference.kind = InterferenceKind::NodeExclusive;
    } else if (kind == "conflict_graph") {
      m.interference.kind = InterferenceKind::ConflictGraph;
      if (const YAML::Node cs = in["conflicts"]) {
        if (!cs.IsSequence()) rd.fail(cs, "'conflicts' must be a list of link pairs");
        for (const auto& pair : cs) {
          if (!pair.IsSequence() || pair.size() != 2) rd.fail(pair, "each conflict must list two links");
          m.interference.conflicts.emplace_back(rd.link(m, pair[0]), rd.link(m, pair[1]));
        }
      }
    } else {
      rd.fail(in, "unknown interference kind '" + kind + "'");
    }
  }

  SimConfig& c = out.config;
  if (const YAML::Node cn = root["control"]) {
    if (!cn.IsMap()) rd.fail(cn, "'control' must be a mapping");
    c.q_max = rd.get_or<int>(cn, "q_max", c.q_max);
    c.admit_max = rd.get_or<int>(cn, "admit_max", c.admit_max);
    c.V = rd.get_or<double>(cn, "V", c.V);
    c.eta = rd.get_or<double>(cn, "eta", c.eta);
    c.feedback_delay = rd.get_or<int>(cn, "feedback_delay", c.feedback_delay);
    c.transport_buffer = rd.get_or<int>(cn, "transport_buffer", c.transport_buffer);
    c.horizon = rd.get_or<Slot>(cn, "horizon", c.horizon);
    c.seed = rd.get_or<std::uint64_t>(cn, "seed", c.seed);
    if (cn["variant"]) {
      const auto s = rd.as<std::string>(cn["variant"], "variant");
      const auto v = parse_variant(s);
      if (!v) rd.fail(cn["variant"], "unknown variant '" + s + "'");
      c.variant = *v;
    }
    if (cn["scheduler"]) {
      const auto s = rd.as<std::string>(cn["scheduler"], "scheduler");
      const auto k = parse_scheduler(s);
      if (!k) rd.fail(cn["scheduler"], "unknown scheduler '" + s + "'");
      c.scheduler = *k;
    }
    if (cn["epsilon"]) c.epsilon = rd.as<double>(cn["epsilon"], "epsilon");
  }
  return out;
}

/// Reads and validates a model file; validation failures raise ConfigError.
inline LoadedModel load_model(const std::string& path, bool check = true) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  LoadedModel lm = parse_model(ss.str(), path);
  if (check) {
    const auto rep = validate(lm.model, lm.config);
    if (!rep.ok()) {
      std::string msg = path + ": invalid model:";
      for (const auto& v : rep.violations) msg += "\n  " + v;
      throw ConfigError(msg);
    }
  }
  return lm;
}

/// Emits a document that parse_model reads back to an identical model.
inline std::string serialize_model(const NetworkModel& m, const SimConfig& c) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "nodes" << YAML::Value << YAML::Flow << m.nodes;

  e << YAML::Key << "links" << YAML::Value << YAML::BeginSeq;
  for (const Link& k : m.links) {
    e << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "from" << YAML::Value << m.nodes[k.from];
    e << YAML::Key << "to" << YAML::Value << m.nodes[k.to];
    e << YAML::Key << "capacity" << YAML::Value << k.capacity;
    if (!k.fading_states.empty()) e << YAML::Key << "states" << YAML::Value << YAML::Flow << k.fading_states;
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;

  e << YAML::Key << "flows" << YAML::Value << YAML::BeginSeq;
  for (const FlowSpec& f : m.flows) {
    e << YAML::BeginMap;
    e << YAML::Key << "name" << YAML::Value << f.name;
    e << YAML::Key << "source" << YAML::Value << m.nodes[f.source];
    e << YAML::Key << "destination" << YAML::Value << m.nodes[f.destination];
    e << YAML::Key << "min_rate" << YAML::Value << f.min_rate;
    e << YAML::Key << "delay_threshold" << YAML::Value << f.delay_threshold;
    e << YAML::Key << "arrival" << YAML::Value << YAML::Flow << YAML::BeginMap;
    switch (f.arrival.kind) {
      case ArrivalKind::Backlogged:
        e << YAML::Key << "kind" << YAML::Value << "backlogged";
        break;
      case ArrivalKind::Poisson:
        e << YAML::Key << "kind" << YAML::Value << "poisson";
        e << YAML::Key << "rate" << YAML::Value << f.arrival.rate;
        break;
      case ArrivalKind::Trace:
        e << YAML::Key << "kind" << YAML::Value << "trace";
        e << YAML::Key << "values" << YAML::Value << YAML::Flow << f.arrival.trace;
        break;
    }
    e << YAML::EndMap << YAML::EndMap;
  }
  e << YAML::EndSeq;

  e << YAML::Key << "interference" << YAML::Value << YAML::BeginMap;
  if (m.interference.kind == InterferenceKind::NodeExclusive) {
    e << YAML::Key << "kind" << YAML::Value << "node_exclusive";
  } else {
    e << YAML::Key << "kind" << YAML::Value << "conflict_graph";
    e << YAML::Key << "conflicts" << YAML::Value << YAML::BeginSeq;
    for (auto [a, b] : m.interference.conflicts)
      e << YAML::Flow << YAML::BeginSeq << m.link_name(a) << m.link_name(b) << YAML::EndSeq;
    e << YAML::EndSeq;
  }
  e << YAML::EndMap;

  e << YAML::Key << "control" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "q_max" << YAML::Value << c.q_max;
  e << YAML::Key << "admit_max" << YAML::Value << c.admit_max;
  e << YAML::Key << "V" << YAML::Value << c.V;
  e << YAML::Key << "eta" << YAML::Value << c.eta;
  e << YAML::Key << "feedback_delay" << YAML::Value << c.feedback_delay;
  e << YAML::Key << "transport_buffer" << YAML::Value << c.transport_buffer;
  e << YAML::Key << "horizon" << YAML::Value << c.horizon;
  e << YAML::Key << "seed" << YAML::Value << c.seed;
  e << YAML::Key << "variant" << YAML::Value << to_string(c.variant);
  e << YAML::Key << "scheduler" << YAML::Value << to_string(c.scheduler);
  if (c.epsilon) e << YAML::Key << "epsilon" << YAML::Value << *c.epsilon;
  e << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

inline void save_model(const std::string& path, const NetworkModel& m, const SimConfig& c) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write model file '" + path + "'");
  f << serialize_model(m, c);
}

} // namespace dgsched

#endif // DGSCHED_CONFIG_IO_HPP
