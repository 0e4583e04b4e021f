#ifndef DGSCHED_SCHED_HPP
#define DGSCHED_SCHED_HPP

// Per-slot link weights and the scheduling solvers.
//
// Real link (m,n), flow c:   (U_s(c) / q_M) (U_m^c - U_n^c [- l_n])
// Admission link of flow c:  (U_s(c) / q_M) (q_M - mu_M - U_{b(c)}^c)
// Links into a flow's own source carry weight 0 for that flow.
//
// Admission links do not enter the interference constraints; each one is
// opened at its cap exactly when its weight is positive.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "dgsched/decision.hpp"
#include "dgsched/independent_set.hpp"
#include "dgsched/matching.hpp"
#include "dgsched/model.hpp"
#include "dgsched/queues.hpp"

namespace dgsched {

namespace detail {

/// Chooses c* = argmax_c (lowest index on ties) and clips at zero.
inline LinkWeight pick_flow(std::span<const std::int64_t> scaled, std::span<const double> raw) {
  LinkWeight w;
  for (FlowId c = 0; c < scaled.size(); ++c)
    if (!w.flow || scaled[c] > scaled[*w.flow]) w.flow = c;
  if (w.flow && scaled[*w.flow] > 0) {
    w.scaled = scaled[*w.flow];
    w.weight = raw[*w.flow];
  }
  return w;
}

inline std::int64_t integral(double v) { return std::llround(v); }

} // namespace detail

/// Weights of the delay-guaranteed policy for the configured variant.
/// `inbound` holds l_n and is only read for the general-interference variant.
inline WeightTable assign_weights(const PacketQueues& q, const VirtualQueues& vq, const NetworkModel& m,
                                  const SimConfig& cfg, std::span<const int> inbound = {}) {
  const std::size_t nf = m.num_flows();
  const bool delayed = cfg.variant == Variant::DelayedInfo;
  const bool general = cfg.variant == Variant::GeneralInterference;
  const double qm = cfg.q_max;

  WeightTable t;
  t.links.resize(m.num_links());
  t.admission.resize(nf);
  t.raw.assign(m.num_links(), std::vector<double>(nf, 0.0));

  std::vector<std::int64_t> scaled(nf);
  for (LinkId l = 0; l < m.num_links(); ++l) {
    const Link& k = m.links[l];
    for (FlowId c = 0; c < nf; ++c) {
      scaled[c] = 0;
      if (k.to == m.flows[c].source) continue;
      const std::int64_t u = detail::integral(delayed ? vq.delayed_u_s(c) : vq[c].u_s);
      std::int64_t diff = q.backlog(k.from, c) - q.backlog(k.to, c);
      if (general) diff -= inbound[k.to];
      scaled[c] = u * diff;
      t.raw[l][c] = static_cast<double>(scaled[c]) / qm;
    }
    t.links[l] = detail::pick_flow(scaled, t.raw[l]);
  }
  for (FlowId c = 0; c < nf; ++c) {
    const std::int64_t u = detail::integral(vq[c].u_s);
    const std::int64_t s = u * (cfg.q_max - cfg.admit_max - q.backlog(m.flows[c].source, c));
    t.admission[c].flow = c;
    if (s > 0) {
      t.admission[c].scaled = s;
      t.admission[c].weight = static_cast<double>(s) / qm;
    }
  }
  return t;
}

/// Classic back-pressure weights [max_c (U_m^c - U_n^c)]^+ for the baseline.
/// Admission weights are left at zero; the baseline admits by its own rule.
inline WeightTable backpressure_weights(const PacketQueues& q, const NetworkModel& m) {
  const std::size_t nf = m.num_flows();
  WeightTable t;
  t.links.resize(m.num_links());
  t.admission.resize(nf);
  t.raw.assign(m.num_links(), std::vector<double>(nf, 0.0));
  std::vector<std::int64_t> scaled(nf);
  for (LinkId l = 0; l < m.num_links(); ++l) {
    const Link& k = m.links[l];
    for (FlowId c = 0; c < nf; ++c) {
      scaled[c] = k.to == m.flows[c].source ? 0 : q.backlog(k.from, c) - q.backlog(k.to, c);
      t.raw[l][c] = static_cast<double>(scaled[c]);
    }
    t.links[l] = detail::pick_flow(scaled, t.raw[l]);
  }
  return t;
}

/// Real-link weight as seen by a solver: capacity times the scaled weight.
inline std::vector<std::int64_t> effective_weights(const WeightTable& w, const SlotContext& ctx) {
  std::vector<std::int64_t> e(w.links.size(), 0);
  for (LinkId l = 0; l < w.links.size(); ++l)
    if (w.links[l].scaled > 0 && ctx.capacity[l] > 0) e[l] = w.links[l].scaled * ctx.capacity[l];
  return e;
}

/// Builds a decision that activates `active` at full capacity and opens every
/// admission link whose weight is positive.
inline ScheduleDecision make_decision(const WeightTable& w, std::span<const LinkId> active, const SlotContext& ctx) {
  ScheduleDecision d(w.links.size(), w.admission.size());
  for (LinkId l : active) {
    if (w.links[l].scaled <= 0 || ctx.capacity[l] <= 0) continue;
    d.link_flow[l] = w.links[l].flow;
    d.link_rate[l] = ctx.capacity[l];
  }
  for (FlowId c = 0; c < w.admission.size(); ++c)
    if (w.admission[c].scaled > 0) d.admission[c] = ctx.admission_cap[c];
  return d;
}

namespace detail {
inline std::vector<WeightedEdge<std::int64_t>> link_edges(const NetworkModel& m, std::span<const std::int64_t> eff) {
  std::vector<WeightedEdge<std::int64_t>> edges(m.num_links());
  for (LinkId l = 0; l < m.num_links(); ++l) edges[l] = {m.links[l].from, m.links[l].to, eff[l]};
  return edges;
}
} // namespace detail

/// Exact maximum weight matching over the real links (node-exclusive model).
inline ScheduleDecision solve_exact_mwm(const WeightTable& w, const NetworkModel& m, const SlotContext& ctx) {
  if (m.interference.kind != InterferenceKind::NodeExclusive)
    throw ContractViolation("solve_exact_mwm requires node-exclusive interference");
  const auto eff = effective_weights(w, ctx);
  const auto edges = detail::link_edges(m, eff);
  const auto chosen = max_weight_matching<std::int64_t>(m.num_nodes(), edges);
  return make_decision(w, chosen, ctx);
}

/// Greedy maximal matching, heaviest link first, ties by link index.
inline ScheduleDecision solve_gmm(const WeightTable& w, const NetworkModel& m, const SlotContext& ctx) {
  if (m.interference.kind != InterferenceKind::NodeExclusive)
    throw ContractViolation("solve_gmm requires node-exclusive interference");
  const auto eff = effective_weights(w, ctx);
  const auto edges = detail::link_edges(m, eff);
  const auto chosen = greedy_maximal_matching<std::int64_t>(m.num_nodes(), edges);
  return make_decision(w, chosen, ctx);
}

/// GWMIN greedy independent set on the conflict graph.
inline ScheduleDecision solve_greedy_mwis(const WeightTable& w, const ConflictGraph& g, const SlotContext& ctx) {
  const auto eff = effective_weights(w, ctx);
  const auto chosen = greedy_mwis_min<std::int64_t>(g, eff);
  return make_decision(w, chosen, ctx);
}

/// Exact maximisation of sum capacity * weight over the feasible activation
/// sets of a conflict graph with at most kMaxEnumerableLinks links.
inline ScheduleDecision solve_general(const WeightTable& w, const ConflictGraph& g, const SlotContext& ctx) {
  const auto eff = effective_weights(w, ctx);
  const auto chosen = exact_mwis<std::int64_t>(g, eff);
  return make_decision(w, chosen, ctx);
}

/// Dispatches on the configured scheduler and interference model.
inline ScheduleDecision schedule(const WeightTable& w, const NetworkModel& m, const SimConfig& cfg,
                                 const ConflictGraph& g, const SlotContext& ctx) {
  switch (cfg.scheduler) {
    case SchedulerKind::ExactMWM:
      if (m.interference.kind == InterferenceKind::NodeExclusive) return solve_exact_mwm(w, m, ctx);
      return solve_general(w, g, ctx);
    case SchedulerKind::GMM:
      return solve_gmm(w, m, ctx);
    case SchedulerKind::GreedyMWIS:
      return solve_greedy_mwis(w, g, ctx);
  }
  throw ContractViolation("unknown scheduler");
}

} // namespace dgsched

#endif // DGSCHED_SCHED_HPP
