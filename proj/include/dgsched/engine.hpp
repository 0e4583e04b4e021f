#ifndef DGSCHED_ENGINE_HPP
#define DGSCHED_ENGINE_HPP

// Slot loop. Per slot, in this order:
//   arrivals (flows in index order), fading states (links in index order),
//   congestion control, weights, admission caps, schedule, feasibility audit,
//   slot-start metrics, packet movement, virtual-queue update, bound check.
// One std::mt19937_64 stream per run feeds both random stages.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dgsched/control.hpp"
#include "dgsched/decision.hpp"
#include "dgsched/error.hpp"
#include "dgsched/metrics.hpp"
#include "dgsched/model.hpp"
#include "dgsched/queues.hpp"
#include "dgsched/sched.hpp"

namespace dgsched {

enum class Algorithm { Alg, AlgArbitrary, AlgDelayed, AlgGeneral, BP };

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Alg: return "alg";
    case Algorithm::AlgArbitrary: return "alg-arb";
    case Algorithm::AlgDelayed: return "alg-delayed";
    case Algorithm::AlgGeneral: return "alg-general";
    case Algorithm::BP: return "bp";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(const std::string& s) {
  for (Algorithm a : {Algorithm::Alg, Algorithm::AlgArbitrary, Algorithm::AlgDelayed, Algorithm::AlgGeneral,
                      Algorithm::BP})
    if (to_string(a) == s) return a;
  return std::nullopt;
}

/// The ALG variants pin cfg.variant; BP leaves the config alone.
inline SimConfig configure(SimConfig cfg, Algorithm a) {
  switch (a) {
    case Algorithm::Alg: cfg.variant = Variant::Backlogged; break;
    case Algorithm::AlgArbitrary: cfg.variant = Variant::ArbitraryArrivals; break;
    case Algorithm::AlgDelayed: cfg.variant = Variant::DelayedInfo; break;
    case Algorithm::AlgGeneral: cfg.variant = Variant::GeneralInterference; break;
    case Algorithm::BP: break;
  }
  return cfg;
}

/// Slot-start view handed to observers before any queue changes.
struct SlotView {
  Slot slot = 0;
  const PacketQueues& queues;
  const VirtualQueues& virt;
  const ControlDecision& control;
  const WeightTable& weights;
  const ScheduleDecision& decision;
  const SlotContext& context;
  std::span<const int> arrivals;
  double lyapunov = 0.0;
};

struct RunOptions {
  double warmup_fraction = 0.1;
  bool record_lyapunov = false;  // keep the per-slot trace in the report
  bool verify = true;            // audit every decision
  std::function<void(const SlotView&)> observer;
};

/// L(Q) = 1/2 [ sum ((q_M-mu_M)/q_M) u_s^2 + sum x^2 + sum z^2
///              + sum_c sum_n (U_n^c)^2 u_s / q_M ]  (+ eta/2 sum y^2)
inline double lyapunov(const PacketQueues& q, const VirtualQueues& vq, const NetworkModel& m, const SimConfig& cfg) {
  const double qm = cfg.q_max;
  const double scale = (qm - cfg.admit_max) / qm;
  double s = 0.0;
  double ys = 0.0;
  for (FlowId c = 0; c < vq.num_flows(); ++c) {
    const FlowVirtualState& v = vq[c];
    s += scale * v.u_s * v.u_s + v.x * v.x + v.z * v.z;
    double u2 = 0.0;
    for (NodeId n = 0; n < m.num_nodes(); ++n) {
      const double u = static_cast<double>(q.backlog(n, c));
      u2 += u * u;
    }
    s += u2 * v.u_s / qm;
    ys += v.y * v.y;
  }
  double l = 0.5 * s;
  if (cfg.variant == Variant::ArbitraryArrivals) l += 0.5 * cfg.eta * ys;
  return l;
}

namespace detail {

inline int draw_arrivals(const ArrivalProcess& a, Slot slot, int cap, std::mt19937_64& rng) {
  switch (a.kind) {
    case ArrivalKind::Backlogged: return cap;
    case ArrivalKind::Poisson: {
      if (a.rate <= 0.0) return 0;
      std::poisson_distribution<int> d(a.rate);
      return std::min(d(rng), cap);
    }
    case ArrivalKind::Trace:
      if (a.trace.empty()) return 0;
      return std::min(a.trace[static_cast<std::size_t>(slot) % a.trace.size()], cap);
  }
  return 0;
}

inline void draw_capacities(const NetworkModel& m, std::mt19937_64& rng, std::vector<int>& cap) {
  for (LinkId l = 0; l < m.num_links(); ++l) {
    const Link& k = m.links[l];
    if (k.fading_states.empty()) {
      cap[l] = k.capacity;
    } else {
      std::uniform_int_distribution<std::size_t> d(0, k.fading_states.size() - 1);
      cap[l] = k.fading_states[d(rng)];
    }
  }
}

inline std::string snapshot(const PacketQueues& q, const VirtualQueues& vq, const NetworkModel& m, Slot slot) {
  std::ostringstream os;
  os << "state after slot " << slot << ":";
  for (FlowId c = 0; c < m.num_flows(); ++c) {
    os << "\n  flow " << m.flows[c].name << " U=[";
    for (NodeId n = 0; n < m.num_nodes(); ++n) os << (n ? " " : "") << m.node_label(n) << ':' << q.backlog(n, c);
    os << "] u_s=" << vq[c].u_s << " z=" << vq[c].z << " x=" << vq[c].x << " y=" << vq[c].y << " l=" << vq[c].l;
  }
  return os.str();
}

inline void check_inputs(const NetworkModel& m, const SimConfig& cfg) {
  const auto rep = validate(m, cfg);
  if (!rep.ok()) {
    std::string msg = "invalid configuration:";
    for (const auto& v : rep.violations) msg += "\n  " + v;
    throw ConfigError(msg);
  }
}

} // namespace detail

/// Runs the delay-guaranteed policy in the variant named by cfg.variant.
/// Throws InvariantViolation (with a state snapshot) if any backlog exceeds
/// q_M or packets are lost or duplicated.
inline MetricsReport run(const NetworkModel& m, const SimConfig& cfg, const RunOptions& opt = {}) {
  detail::check_inputs(m, cfg);
  const std::size_t nf = m.num_flows();
  const Slot H = cfg.horizon;
  const Slot warmup = static_cast<Slot>(std::floor(static_cast<double>(H) * opt.warmup_fraction));

  std::mt19937_64 rng(cfg.seed);
  PacketQueues q(m.num_nodes(), nf);
  VirtualQueues vq(nf, cfg.variant == Variant::DelayedInfo ? cfg.feedback_delay : 0);
  const ConflictGraph g = conflict_graph(m);
  std::vector<int> inbound;
  if (cfg.variant == Variant::GeneralInterference) inbound = max_inbound_rates(m, g);

  MetricsAccumulator acc(nf, H, warmup);
  MetricsReport out;
  SlotContext ctx{std::vector<int>(m.num_links(), 1), std::vector<int>(nf, cfg.admit_max)};
  std::vector<int> arrivals(nf, 0);
  std::vector<double> arrivals_d(nf, 0.0);
  std::vector<std::int64_t> backlog(nf, 0);
  std::vector<FlowVirtualState> virt(nf);
  std::vector<VirtualInputs> inputs(nf);
  std::int64_t admitted_total = 0;
  std::int64_t delivered_total = 0;

  for (Slot t = 0; t < H; ++t) {
    // 1. transport arrivals
    if (cfg.variant == Variant::ArbitraryArrivals)
      for (FlowId c = 0; c < nf; ++c) {
        arrivals[c] = detail::draw_arrivals(m.flows[c].arrival, t, cfg.admit_max, rng);
        arrivals_d[c] = arrivals[c];
      }
    // 2. channel state
    detail::draw_capacities(m, rng, ctx.capacity);

    // 3. congestion control
    ControlDecision ctl;
    switch (cfg.variant) {
      case Variant::ArbitraryArrivals: ctl = control_arbitrary(vq, arrivals_d, m, cfg); break;
      case Variant::DelayedInfo: ctl = control_delayed(vq, m, cfg); break;
      default: ctl = control_backlogged(vq, m, cfg); break;
    }

    // 4-6. weights, admission caps, schedule
    const WeightTable w = assign_weights(q, vq, m, cfg, inbound);
    for (FlowId c = 0; c < nf; ++c)
      ctx.admission_cap[c] = cfg.variant == Variant::ArbitraryArrivals
                                 ? static_cast<int>(std::min<double>(vq[c].l + arrivals[c], cfg.admit_max))
                                 : cfg.admit_max;
    const ScheduleDecision d = schedule(w, m, cfg, g, ctx);
    if (opt.verify) verify_decision(m, d, ctx);

    // 7. slot-start statistics
    for (FlowId c = 0; c < nf; ++c) {
      backlog[c] = q.flow_total(c);
      virt[c] = vq[c];
    }
    const double lv = lyapunov(q, vq, m, cfg);
    if (opt.record_lyapunov) out.lyapunov.push_back(lv);
    if (opt.observer) opt.observer(SlotView{t, q, vq, ctl, w, d, ctx, arrivals, lv});

    // 8-9. queue updates
    const auto deliveries = step_actual_queues(q, m, d, ctx, t, false);
    for (FlowId c = 0; c < nf; ++c) {
      inputs[c].R = ctl.R[c];
      inputs[c].v = ctl.v[c];
      inputs[c].admitted = d.admission[c];
      inputs[c].arrivals = arrivals[c];
      inputs[c].total_backlog = static_cast<double>(backlog[c]);
      admitted_total += d.admission[c];
    }
    delivered_total += static_cast<std::int64_t>(deliveries.size());
    step_virtual_queues(vq, inputs, m, cfg);

    // 10. invariants
    const std::int64_t maxb = q.max_backlog();
    if (maxb > cfg.q_max)
      throw InvariantViolation("backlog " + std::to_string(maxb) + " exceeds q_max " + std::to_string(cfg.q_max) +
                               "; " + detail::snapshot(q, vq, m, t));
    if (admitted_total - delivered_total != q.total())
      throw InvariantViolation("packet conservation broken; " + detail::snapshot(q, vq, m, t));

    acc.add(SlotSample{t, backlog, d.admission, ctl.R, virt, deliveries, maxb, lv});
  }

  auto trace = std::move(out.lyapunov);
  out = finalize(acc, m, cfg, q.total());
  out.lyapunov = std::move(trace);
  return out;
}

/// Back-pressure comparator: admit mu_M to flow c iff U_{b(c)}^c <= V, then
/// exact max-weight matching on [max_c (U_m^c - U_n^c)]^+. Buffers are
/// unbounded, so there is no q_M check.
inline MetricsReport run_bp_baseline(const NetworkModel& m, const SimConfig& cfg, const RunOptions& opt = {}) {
  if (m.interference.kind != InterferenceKind::NodeExclusive)
    throw ConfigError("the back-pressure baseline needs node-exclusive interference");
  {
    SimConfig base = cfg;
    base.variant = Variant::Backlogged;
    base.scheduler = SchedulerKind::ExactMWM;
    base.V = std::max(base.V, 1.0);  // V = 0 is a legal threshold here
    base.q_max = std::max(base.q_max, base.admit_max);  // buffers are unbounded
    detail::check_inputs(m, base);
  }
  const std::size_t nf = m.num_flows();
  const Slot H = cfg.horizon;
  const Slot warmup = static_cast<Slot>(std::floor(static_cast<double>(H) * opt.warmup_fraction));

  PacketQueues q(m.num_nodes(), nf);
  VirtualQueues vq(nf, 0);  // stays zero; the report's virtual columns read 0
  MetricsAccumulator acc(nf, H, warmup);
  SlotContext ctx{std::vector<int>(m.num_links(), 1), std::vector<int>(nf, cfg.admit_max)};
  std::vector<std::int64_t> backlog(nf, 0);
  std::vector<FlowVirtualState> virt(nf);
  std::vector<double> R(nf, 0.0);
  std::vector<int> no_arrivals(nf, 0);
  ControlDecision ctl{std::vector<double>(nf, 0.0), std::vector<double>(nf, 0.0)};
  std::int64_t admitted_total = 0;
  std::int64_t delivered_total = 0;
  SimConfig bp_cfg = cfg;
  bp_cfg.variant = Variant::Backlogged;

  for (Slot t = 0; t < H; ++t) {
    const WeightTable w = backpressure_weights(q, m);
    const auto eff = effective_weights(w, ctx);
    const auto edges = detail::link_edges(m, eff);
    const auto chosen = max_weight_matching<std::int64_t>(m.num_nodes(), edges);
    ScheduleDecision d(m.num_links(), nf);
    for (LinkId l : chosen) {
      d.link_flow[l] = w.links[l].flow;
      d.link_rate[l] = ctx.capacity[l];
    }
    for (FlowId c = 0; c < nf; ++c) {
      d.admission[c] = static_cast<double>(q.backlog(m.flows[c].source, c)) <= cfg.V ? cfg.admit_max : 0;
      R[c] = d.admission[c];
      ctl.R[c] = R[c];
      backlog[c] = q.flow_total(c);
    }
    if (opt.verify) verify_decision(m, d, ctx);
    if (opt.observer) opt.observer(SlotView{t, q, vq, ctl, w, d, ctx, no_arrivals, 0.0});

    const auto deliveries = step_actual_queues(q, m, d, ctx, t, false);
    for (FlowId c = 0; c < nf; ++c) admitted_total += d.admission[c];
    delivered_total += static_cast<std::int64_t>(deliveries.size());
    if (admitted_total - delivered_total != q.total())
      throw InvariantViolation("packet conservation broken; " + detail::snapshot(q, vq, m, t));
    acc.add(SlotSample{t, backlog, d.admission, R, virt, deliveries, q.max_backlog(), 0.0});
  }
  return finalize(acc, m, bp_cfg, q.total());
}

inline MetricsReport run_algorithm(const NetworkModel& m, const SimConfig& cfg, Algorithm a,
                                   const RunOptions& opt = {}) {
  if (a == Algorithm::BP) return run_bp_baseline(m, cfg, opt);
  return run(m, configure(cfg, a), opt);
}

} // namespace dgsched

#endif // DGSCHED_ENGINE_HPP
