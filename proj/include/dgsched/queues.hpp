#ifndef DGSCHED_QUEUES_HPP
#define DGSCHED_QUEUES_HPP

// Actual packet queues U_n^c and the scalar virtual queues of every flow.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "dgsched/decision.hpp"
#include "dgsched/model.hpp"

namespace dgsched {

struct Packet {
  Slot admit_slot = 0;
  FlowId flow = 0;
};

struct Delivery {
  FlowId flow = 0;
  Slot delay = 0;  // admission slot through delivery slot, inclusive
};

/// FIFO packet queue per (node, flow).
class PacketQueues {
public:
  PacketQueues() = default;
  PacketQueues(std::size_t nodes, std::size_t flows) : nodes_(nodes), flows_(flows), q_(nodes * flows) {}

  std::size_t num_nodes() const { return nodes_; }
  std::size_t num_flows() const { return flows_; }

  std::int64_t backlog(NodeId n, FlowId c) const { return static_cast<std::int64_t>(at(n, c).size()); }

  std::int64_t flow_total(FlowId c) const {
    std::int64_t s = 0;
    for (NodeId n = 0; n < nodes_; ++n) s += backlog(n, c);
    return s;
  }

  std::int64_t total() const {
    std::int64_t s = 0;
    for (const auto& d : q_) s += static_cast<std::int64_t>(d.size());
    return s;
  }

  std::int64_t max_backlog() const {
    std::size_t m = 0;
    for (const auto& d : q_) m = std::max(m, d.size());
    return static_cast<std::int64_t>(m);
  }

  std::deque<Packet>& at(NodeId n, FlowId c) { return q_[n * flows_ + c]; }
  const std::deque<Packet>& at(NodeId n, FlowId c) const { return q_[n * flows_ + c]; }

private:
  std::size_t nodes_ = 0;
  std::size_t flows_ = 0;
  std::vector<std::deque<Packet>> q_;
};

/// Throws ContractViolation unless `d` respects the interference model, the
/// per-slot capacities, the admission caps and the no-loop-back rule.
inline void verify_decision(const NetworkModel& m, const ScheduleDecision& d, const SlotContext& ctx) {
  auto bad = [](const std::string& s) { throw ContractViolation("infeasible schedule: " + s); };
  if (d.link_rate.size() != m.num_links() || d.link_flow.size() != m.num_links() ||
      d.admission.size() != m.num_flows())
    bad("decision shape does not match the model");
  for (LinkId l = 0; l < m.num_links(); ++l) {
    const int r = d.link_rate[l];
    if (r < 0) bad("negative rate on " + m.link_name(l));
    if (r == 0) continue;
    if (!d.link_flow[l] || *d.link_flow[l] >= m.num_flows()) bad("active link without a flow");
    if (r > ctx.capacity[l]) bad("rate above capacity on " + m.link_name(l));
    if (m.links[l].to == m.flows[*d.link_flow[l]].source)
      bad("flow routed back into its source on " + m.link_name(l));
  }
  const auto active = d.active_links();
  if (!is_feasible_activation(m, active)) bad("activation violates the interference model");
  for (FlowId c = 0; c < m.num_flows(); ++c)
    if (d.admission[c] < 0 || d.admission[c] > ctx.admission_cap[c])
      bad("admission outside [0, cap] for flow " + std::to_string(c));
}

/// Applies one slot of packet movement. Departures are taken from the
/// slot-start backlogs (never more than is present), then transfers and new
/// admissions are appended. Packets reaching their destination are removed
/// and reported with their end-to-end delay.
inline std::vector<Delivery> step_actual_queues(PacketQueues& q, const NetworkModel& m,
                                                const ScheduleDecision& d, const SlotContext& ctx,
                                                Slot slot, bool verify = true) {
  if (verify) verify_decision(m, d, ctx);

  struct Transfer {
    NodeId to;
    Packet p;
  };
  std::vector<Transfer> moving;
  for (LinkId l = 0; l < m.num_links(); ++l) {
    if (d.link_rate[l] <= 0) continue;
    const FlowId c = *d.link_flow[l];
    auto& src = q.at(m.links[l].from, c);
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(d.link_rate[l]), src.size());
    for (std::size_t i = 0; i < n; ++i) {
      moving.push_back({m.links[l].to, src.front()});
      src.pop_front();
    }
  }

  std::vector<Delivery> delivered;
  for (const Transfer& t : moving) {
    if (t.to == m.flows[t.p.flow].destination)
      delivered.push_back({t.p.flow, slot - t.p.admit_slot + 1});
    else
      q.at(t.to, t.p.flow).push_back(t.p);
  }
  for (FlowId c = 0; c < m.num_flows(); ++c)
    for (int i = 0; i < d.admission[c]; ++i) q.at(m.flows[c].source, c).push_back({slot, c});
  return delivered;
}

// ---------------------------------------------------------------------------
// Virtual queues

struct FlowVirtualState {
  double u_s = 0.0;  // transport-layer virtual backlog
  double z = 0.0;    // minimum-rate (service) queue
  double x = 0.0;    // delay queue
  double y = 0.0;    // auxiliary queue, arbitrary arrivals only
  double l = 0.0;    // transport data backlog, arbitrary arrivals only

  bool operator==(const FlowVirtualState&) const = default;
};

/// Inputs of one flow's virtual-queue update for the current slot.
struct VirtualInputs {
  double R = 0.0;             // virtual input rate R_c(t)
  double v = 0.0;             // auxiliary rate v_c(t)
  double admitted = 0.0;      // mu_{s(c)b(c)}(t)
  double arrivals = 0.0;      // A_c(t)
  double total_backlog = 0.0; // sum_n U_n^c(t) at slot start
};

class VirtualQueues {
public:
  VirtualQueues() = default;
  /// `delay` is the feedback delay T; the history keeps T+1 values per flow,
  /// pre-filled with zeros so reads before slot T return the initial state.
  VirtualQueues(std::size_t flows, int delay)
      : state_(flows), delay_(std::max(delay, 0)),
        history_(flows, std::deque<Snapshot>(static_cast<std::size_t>(delay_) + 1)) {}

  std::size_t num_flows() const { return state_.size(); }
  int delay() const { return delay_; }

  FlowVirtualState& operator[](FlowId c) { return state_[c]; }
  const FlowVirtualState& operator[](FlowId c) const { return state_[c]; }

  /// X_c(t - T) and U_{s(c)}(t - T).
  double delayed_x(FlowId c) const { return history_[c].front().x; }
  double delayed_u_s(FlowId c) const { return history_[c].front().u_s; }

  /// Pushes the current values into the history ring; call once per slot
  /// after the update.
  void advance_history() {
    for (FlowId c = 0; c < state_.size(); ++c) {
      history_[c].push_back({state_[c].u_s, state_[c].x});
      history_[c].pop_front();
    }
  }

  std::vector<double> history_x(FlowId c) const {
    std::vector<double> out;
    for (const auto& s : history_[c]) out.push_back(s.x);
    return out;
  }

private:
  struct Snapshot {
    double u_s = 0.0;
    double x = 0.0;
  };
  std::vector<FlowVirtualState> state_;
  int delay_ = 0;
  std::vector<std::deque<Snapshot>> history_;
};

inline double positive_part(double v) { return v > 0.0 ? v : 0.0; }

/// One flow's virtual-queue dynamics.
inline void step_flow_virtual(FlowVirtualState& s, const VirtualInputs& in, const FlowSpec& f,
                              const SimConfig& cfg) {
  s.u_s = positive_part(s.u_s - in.admitted) + in.R;
  s.z = positive_part(s.z - in.R) + f.min_rate;
  s.x = positive_part(s.x - f.delay_threshold * in.R) + in.total_backlog;
  if (cfg.variant == Variant::ArbitraryArrivals) {
    s.y = positive_part(s.y - in.R) + in.v;
    s.l = std::min(positive_part(s.l + in.arrivals - in.admitted), static_cast<double>(cfg.transport_buffer));
  }
}

/// Updates every flow's virtual queues and advances the delayed-info history.
inline void step_virtual_queues(VirtualQueues& vq, std::span<const VirtualInputs> inputs,
                                const NetworkModel& m, const SimConfig& cfg) {
  for (FlowId c = 0; c < vq.num_flows(); ++c) step_flow_virtual(vq[c], inputs[c], m.flows[c], cfg);
  vq.advance_history();
}

} // namespace dgsched

#endif // DGSCHED_QUEUES_HPP
