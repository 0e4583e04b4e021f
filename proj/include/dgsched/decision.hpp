#ifndef DGSCHED_DECISION_HPP
#define DGSCHED_DECISION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "dgsched/model.hpp"

namespace dgsched {

/// Weight of one extended link (a real link or a flow's admission link).
/// `scaled` is q_max * weight; it is an exact integer because both virtual
/// transport backlogs and packet backlogs are integral, so schedulers compare
/// on it without rounding. A zero weight means the link stays idle.
struct LinkWeight {
  std::optional<FlowId> flow;
  double weight = 0.0;
  std::int64_t scaled = 0;
};

struct WeightTable {
  std::vector<LinkWeight> links;          // indexed by LinkId
  std::vector<LinkWeight> admission;      // indexed by FlowId
  std::vector<std::vector<double>> raw;   // raw[l][c] = w_l^c before clipping
};

/// Per-slot rate assignment. `link_rate[l] > 0` only when `link_flow[l]` is set.
struct ScheduleDecision {
  std::vector<std::optional<FlowId>> link_flow;
  std::vector<int> link_rate;
  std::vector<int> admission;  // mu_{s(c)b(c)}

  ScheduleDecision() = default;
  ScheduleDecision(std::size_t links, std::size_t flows)
      : link_flow(links), link_rate(links, 0), admission(flows, 0) {}

  std::vector<LinkId> active_links() const {
    std::vector<LinkId> a;
    for (LinkId l = 0; l < link_rate.size(); ++l)
      if (link_rate[l] > 0) a.push_back(l);
    return a;
  }
};

/// Per-slot channel/admission context handed to the solvers.
struct SlotContext {
  std::vector<int> capacity;       // current per-link capacity l_mn(t)
  std::vector<int> admission_cap;  // per-flow cap on mu_{s(c)b(c)}
};

/// Objective of the scheduling problem: sum over extended links of rate * weight.
inline double objective(const ScheduleDecision& d, const WeightTable& w) {
  double s = 0.0;
  for (LinkId l = 0; l < d.link_rate.size(); ++l)
    if (d.link_rate[l] > 0) s += d.link_rate[l] * w.links[l].weight;
  for (FlowId c = 0; c < d.admission.size(); ++c) s += d.admission[c] * w.admission[c].weight;
  return s;
}

/// Real-link part of the objective on the exact integer scale.
inline std::int64_t scaled_link_objective(const ScheduleDecision& d, const WeightTable& w) {
  std::int64_t s = 0;
  for (LinkId l = 0; l < d.link_rate.size(); ++l)
    if (d.link_rate[l] > 0) s += static_cast<std::int64_t>(d.link_rate[l]) * w.links[l].scaled;
  return s;
}

} // namespace dgsched

#endif // DGSCHED_DECISION_HPP
