#ifndef DGSCHED_MODEL_HPP
#define DGSCHED_MODEL_HPP

// Network model: topology, flows with QoS targets, interference/channel
// description and the control parameters of a run.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dgsched/error.hpp"

namespace dgsched {

using NodeId = std::size_t;
using LinkId = std::size_t;
using FlowId = std::size_t;
using Slot = std::int64_t;

/// Directed link. `capacity` is packets/slot when no fading states are given;
/// with fading the per-slot capacity is drawn uniformly from `fading_states`.
struct Link {
  NodeId from = 0;
  NodeId to = 0;
  int capacity = 1;
  std::vector<int> fading_states;

  bool operator==(const Link&) const = default;
};

enum class ArrivalKind { Backlogged, Poisson, Trace };

/// Transport-layer arrivals A_c(t). Poisson draws are truncated at admit_max;
/// a trace is replayed cyclically.
struct ArrivalProcess {
  ArrivalKind kind = ArrivalKind::Backlogged;
  double rate = 0.0;
  std::vector<int> trace;

  bool operator==(const ArrivalProcess&) const = default;
};

struct FlowSpec {
  std::string name;
  NodeId source = 0;
  NodeId destination = 0;
  double min_rate = 0.0;         // a_c, packets/slot
  double delay_threshold = 1.0;  // rho_c, slots
  ArrivalProcess arrival;

  bool operator==(const FlowSpec&) const = default;
};

enum class InterferenceKind { NodeExclusive, ConflictGraph };

struct InterferenceModel {
  InterferenceKind kind = InterferenceKind::NodeExclusive;
  /// Unordered conflicting link pairs; only read for ConflictGraph.
  std::vector<std::pair<LinkId, LinkId>> conflicts;

  bool operator==(const InterferenceModel&) const = default;
};

struct NetworkModel {
  std::vector<std::string> nodes;
  std::vector<Link> links;
  std::vector<FlowSpec> flows;
  InterferenceModel interference;

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_links() const { return links.size(); }
  std::size_t num_flows() const { return flows.size(); }

  std::optional<NodeId> find_node(const std::string& name) const {
    auto it = std::find(nodes.begin(), nodes.end(), name);
    if (it == nodes.end()) return std::nullopt;
    return static_cast<NodeId>(it - nodes.begin());
  }

  std::string link_name(LinkId l) const {
    const Link& k = links.at(l);
    return node_label(k.from) + ">" + node_label(k.to);
  }

  std::string node_label(NodeId n) const {
    return n < nodes.size() ? nodes[n] : "#" + std::to_string(n);
  }

  bool has_fading() const {
    return std::any_of(links.begin(), links.end(),
                       [](const Link& l) { return !l.fading_states.empty(); });
  }

  bool operator==(const NetworkModel&) const = default;
};

enum class Variant { Backlogged, ArbitraryArrivals, DelayedInfo, GeneralInterference };
enum class SchedulerKind { ExactMWM, GMM, GreedyMWIS };

struct SimConfig {
  int q_max = 5;              // q_M, per-queue backlog cap
  int admit_max = 2;          // mu_M, admissions per flow per slot
  double V = 1000.0;
  double eta = 1.0;
  int feedback_delay = 0;     // T, slots
  int transport_buffer = 0;   // L_M, packets
  Slot horizon = 100000;
  std::uint64_t seed = 1;
  Variant variant = Variant::Backlogged;
  SchedulerKind scheduler = SchedulerKind::ExactMWM;
  /// Optional epsilon used by oracle/validation reports.
  std::optional<double> epsilon;

  bool operator==(const SimConfig&) const = default;
};

/// Largest number of links the enumerative (exact) routines accept.
inline constexpr std::size_t kMaxEnumerableLinks = 20;

inline int max_capacity(const Link& l) {
  if (l.fading_states.empty()) return l.capacity;
  return *std::max_element(l.fading_states.begin(), l.fading_states.end());
}

// ---------------------------------------------------------------------------
// Conflict graph over links

class ConflictGraph {
public:
  ConflictGraph() = default;
  explicit ConflictGraph(std::size_t n) : adj_(n), matrix_(n * n, false) {}

  void add_conflict(LinkId a, LinkId b) {
    if (a == b || conflicts(a, b)) return;
    matrix_[a * size() + b] = matrix_[b * size() + a] = true;
    adj_[a].push_back(b);
    adj_[b].push_back(a);
  }

  std::size_t size() const { return adj_.size(); }
  bool conflicts(LinkId a, LinkId b) const { return matrix_[a * size() + b]; }
  const std::vector<LinkId>& neighbors(LinkId a) const { return adj_[a]; }
  std::size_t degree(LinkId a) const { return adj_[a].size(); }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (const auto& a : adj_) d = std::max(d, a.size());
    return d;
  }

private:
  std::vector<std::vector<LinkId>> adj_;
  std::vector<bool> matrix_;
};

/// Two links conflict iff they share an endpoint (either direction).
inline ConflictGraph node_exclusive_conflicts(const NetworkModel& m) {
  ConflictGraph g(m.num_links());
  for (LinkId a = 0; a < m.num_links(); ++a)
    for (LinkId b = a + 1; b < m.num_links(); ++b) {
      const Link& x = m.links[a];
      const Link& y = m.links[b];
      if (x.from == y.from || x.from == y.to || x.to == y.from || x.to == y.to)
        g.add_conflict(a, b);
    }
  return g;
}

inline ConflictGraph conflict_graph(const NetworkModel& m) {
  if (m.interference.kind == InterferenceKind::NodeExclusive)
    return node_exclusive_conflicts(m);
  ConflictGraph g(m.num_links());
  for (auto [a, b] : m.interference.conflicts)
    if (a < m.num_links() && b < m.num_links()) g.add_conflict(a, b);
  return g;
}

/// Independent check that a set of simultaneously active links is admissible
/// under the model's interference description. Does not go through
/// ConflictGraph so it can audit schedulers that do.
inline bool is_feasible_activation(const NetworkModel& m, std::span<const LinkId> active) {
  if (m.interference.kind == InterferenceKind::NodeExclusive) {
    std::vector<int> used(m.num_nodes(), 0);
    for (LinkId l : active) {
      if (l >= m.num_links()) return false;
      if (++used[m.links[l].from] > 1 || ++used[m.links[l].to] > 1) return false;
    }
    return true;
  }
  for (std::size_t i = 0; i < active.size(); ++i)
    for (std::size_t j = i + 1; j < active.size(); ++j) {
      if (active[i] == active[j]) return false;
      for (auto [a, b] : m.interference.conflicts)
        if ((a == active[i] && b == active[j]) || (a == active[j] && b == active[i]))
          return false;
    }
  return true;
}

/// l_n: the largest total inbound rate node n can receive in one slot over all
/// feasible activations, using the largest capacity state of every link.
inline std::vector<int> max_inbound_rates(const NetworkModel& m, const ConflictGraph& g) {
  std::vector<int> out(m.num_nodes(), 0);
  for (NodeId n = 0; n < m.num_nodes(); ++n) {
    std::vector<LinkId> in;
    for (LinkId l = 0; l < m.num_links(); ++l)
      if (m.links[l].to == n) in.push_back(l);
    if (in.size() > 24)
      throw SizeError("max_inbound_rates: node " + m.node_label(n) + " has more than 24 in-links");
    const std::uint32_t subsets = 1u << in.size();
    for (std::uint32_t s = 1; s < subsets; ++s) {
      int total = 0;
      bool ok = true;
      for (std::size_t i = 0; i < in.size() && ok; ++i) {
        if (!(s >> i & 1u)) continue;
        for (std::size_t j = i + 1; j < in.size(); ++j)
          if ((s >> j & 1u) && g.conflicts(in[i], in[j])) { ok = false; break; }
        total += max_capacity(m.links[in[i]]);
      }
      if (ok) out[n] = std::max(out[n], total);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

/// Sufficient conditions for the delay and throughput guarantees:
///   q_max > (2N - 1 + mu_M^2) / (2 gamma eps) + mu_M
///   rho_c > N q_max / (gamma r*_{eps,c})   (needs oracle rates)
struct TheoremCheck {
  double epsilon = 0.0;
  double gamma = 1.0;
  double q_threshold = 0.0;
  bool q_condition = false;
  std::vector<double> rho_thresholds;  // empty when no rates were supplied
  std::vector<bool> rho_conditions;

  bool rho_checked() const { return !rho_thresholds.empty(); }
  bool holds() const {
    return q_condition && rho_checked() &&
           std::all_of(rho_conditions.begin(), rho_conditions.end(), [](bool b) { return b; });
  }
};

struct ValidationReport {
  std::vector<std::string> violations;
  std::optional<TheoremCheck> theorem;

  bool ok() const { return violations.empty(); }
};

inline TheoremCheck theorem_conditions(const NetworkModel& m, const SimConfig& cfg, double epsilon,
                                       std::span<const double> rates = {}, double gamma = 1.0) {
  TheoremCheck t;
  t.epsilon = epsilon;
  t.gamma = gamma;
  const double n = static_cast<double>(m.num_nodes());
  const double mu = cfg.admit_max;
  t.q_threshold = (2.0 * n - 1.0 + mu * mu) / (2.0 * gamma * epsilon) + mu;
  t.q_condition = static_cast<double>(cfg.q_max) > t.q_threshold;
  if (!rates.empty()) {
    for (FlowId c = 0; c < m.num_flows(); ++c) {
      const double r = c < rates.size() ? rates[c] : 0.0;
      const double thr = r > 0.0 ? n * cfg.q_max / (gamma * r) : std::numeric_limits<double>::infinity();
      t.rho_thresholds.push_back(thr);
      t.rho_conditions.push_back(m.flows[c].delay_threshold > thr);
    }
  }
  return t;
}

inline ValidationReport validate(const NetworkModel& m, const SimConfig& cfg,
                                 std::optional<double> epsilon = std::nullopt,
                                 std::span<const double> oracle_rates = {}) {
  ValidationReport rep;
  auto fail = [&rep](std::string s) { rep.violations.push_back(std::move(s)); };

  if (m.nodes.empty()) fail("node set is empty");
  for (std::size_t i = 0; i < m.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < m.nodes.size(); ++j)
      if (m.nodes[i] == m.nodes[j]) fail("duplicate node name '" + m.nodes[i] + "'");

  const auto n = m.num_nodes();
  for (LinkId l = 0; l < m.num_links(); ++l) {
    const Link& k = m.links[l];
    const std::string id = "link " + std::to_string(l);
    if (k.from >= n || k.to >= n) {
      fail(id + ": endpoint is not a node");
      continue;
    }
    if (k.from == k.to) fail(id + " (" + m.link_name(l) + "): endpoints must be distinct");
    if (k.capacity < 0) fail(id + ": capacity must be nonnegative");
    for (int s : k.fading_states)
      if (s < 0) fail(id + ": fading states must be nonnegative");
    for (LinkId o = 0; o < l; ++o)
      if (m.links[o].from == k.from && m.links[o].to == k.to)
        fail(id + " (" + m.link_name(l) + "): duplicate link");
  }

  for (FlowId c = 0; c < m.num_flows(); ++c) {
    const FlowSpec& f = m.flows[c];
    const std::string id = "flow " + (f.name.empty() ? std::to_string(c) : f.name);
    if (f.source >= n || f.destination >= n) fail(id + ": source/destination is not a node");
    else if (f.source == f.destination) fail(id + ": source must differ from destination");
    if (!(f.min_rate >= 0.0)) fail(id + ": min_rate must be >= 0");
    if (!(f.delay_threshold > 0.0)) fail(id + ": delay_threshold must be > 0");
    if (f.arrival.kind == ArrivalKind::Poisson && !(f.arrival.rate >= 0.0))
      fail(id + ": arrival rate must be >= 0");
    if (f.arrival.kind == ArrivalKind::Trace) {
      if (f.arrival.trace.empty()) fail(id + ": arrival trace is empty");
      for (int a : f.arrival.trace)
        if (a < 0 || a > cfg.admit_max) fail(id + ": trace arrivals must lie in [0, admit_max]");
    }
  }

  if (m.interference.kind == InterferenceKind::ConflictGraph)
    for (auto [a, b] : m.interference.conflicts)
      if (a >= m.num_links() || b >= m.num_links()) fail("conflict refers to an unknown link");

  if (cfg.admit_max < 1) fail("admit_max >= 1 required");
  if (cfg.q_max < cfg.admit_max) fail("q_M >= mu_M required (q_max >= admit_max)");
  if (!(cfg.V > 0.0)) fail("V > 0 required");
  if (cfg.variant == Variant::ArbitraryArrivals && !(cfg.eta > 0.0))
    fail("eta > 0 required for arbitrary arrivals");
  if (cfg.feedback_delay < 0) fail("feedback_delay (T) >= 0 required");
  if (cfg.transport_buffer < 0) fail("transport_buffer (L_M) >= 0 required");
  if (cfg.horizon < 0) fail("horizon >= 0 required");

  const bool unit_links = std::all_of(m.links.begin(), m.links.end(), [](const Link& l) {
    return l.capacity == 1 && l.fading_states.empty();
  });
  if (cfg.variant != Variant::GeneralInterference) {
    if (m.interference.kind != InterferenceKind::NodeExclusive)
      fail("conflict-graph interference requires the general_interference variant");
    if (!unit_links) fail("non-unit or fading link capacities require the general_interference variant");
  } else if (rep.violations.empty()) {
    const auto inbound = max_inbound_rates(m, conflict_graph(m));
    const int ln = inbound.empty() ? 0 : *std::max_element(inbound.begin(), inbound.end());
    if (cfg.q_max < std::max(ln, cfg.admit_max))
      fail("general interference requires q_max >= max(max_n l_n, admit_max) = " +
           std::to_string(std::max(ln, cfg.admit_max)));
  }

  if (cfg.scheduler == SchedulerKind::GMM && m.interference.kind != InterferenceKind::NodeExclusive)
    fail("gmm scheduler requires node-exclusive interference");
  if (cfg.scheduler == SchedulerKind::ExactMWM && m.interference.kind == InterferenceKind::ConflictGraph &&
      m.num_links() > kMaxEnumerableLinks)
    fail("exact scheduling on a conflict graph is limited to " + std::to_string(kMaxEnumerableLinks) +
         " links; use greedy_mwis");

  if (epsilon) rep.theorem = theorem_conditions(m, cfg, *epsilon, oracle_rates);
  return rep;
}

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::Backlogged: return "backlogged";
    case Variant::ArbitraryArrivals: return "arbitrary_arrivals";
    case Variant::DelayedInfo: return "delayed_info";
    case Variant::GeneralInterference: return "general_interference";
  }
  return "?";
}

inline std::string to_string(SchedulerKind s) {
  switch (s) {
    case SchedulerKind::ExactMWM: return "exact_mwm";
    case SchedulerKind::GMM: return "gmm";
    case SchedulerKind::GreedyMWIS: return "greedy_mwis";
  }
  return "?";
}

inline std::optional<Variant> parse_variant(const std::string& s) {
  for (Variant v : {Variant::Backlogged, Variant::ArbitraryArrivals, Variant::DelayedInfo,
                    Variant::GeneralInterference})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

inline std::optional<SchedulerKind> parse_scheduler(const std::string& s) {
  for (SchedulerKind k : {SchedulerKind::ExactMWM, SchedulerKind::GMM, SchedulerKind::GreedyMWIS})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

} // namespace dgsched

#endif // DGSCHED_MODEL_HPP
