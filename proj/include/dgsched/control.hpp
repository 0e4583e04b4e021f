#ifndef DGSCHED_CONTROL_HPP
#define DGSCHED_CONTROL_HPP

// Congestion controllers choosing the virtual input R_c(t) (and v_c(t)).
// Each controller minimises a linear function of its decision variable over
// an interval, so the optimum sits on an endpoint.

#include <algorithm>
#include <span>
#include <vector>

#include "dgsched/model.hpp"
#include "dgsched/queues.hpp"

namespace dgsched {

struct ControlDecision {
  std::vector<double> R;
  std::vector<double> v;  // zero unless arbitrary arrivals
};

/// ((q_M - mu_M)/q_M) u_s - x rho - z - V
inline double backlogged_threshold(double u_s, double x, double z, double rho, const SimConfig& cfg) {
  const double scale = static_cast<double>(cfg.q_max - cfg.admit_max) / cfg.q_max;
  return scale * u_s - x * rho - z - cfg.V;
}

/// R = 0 when the threshold is strictly positive, mu_M otherwise.
inline double backlogged_rate(double u_s, double x, double z, double rho, const SimConfig& cfg) {
  return backlogged_threshold(u_s, x, z, rho, cfg) > 0.0 ? 0.0 : static_cast<double>(cfg.admit_max);
}

inline ControlDecision control_backlogged(const VirtualQueues& vq, const NetworkModel& m, const SimConfig& cfg) {
  ControlDecision d{std::vector<double>(vq.num_flows(), 0.0), std::vector<double>(vq.num_flows(), 0.0)};
  for (FlowId c = 0; c < vq.num_flows(); ++c)
    d.R[c] = backlogged_rate(vq[c].u_s, vq[c].x, vq[c].z, m.flows[c].delay_threshold, cfg);
  return d;
}

/// Same rule, but the delay queue enters with its T-slot-old value X_c(t-T).
inline ControlDecision control_delayed(const VirtualQueues& vq, const NetworkModel& m, const SimConfig& cfg) {
  ControlDecision d{std::vector<double>(vq.num_flows(), 0.0), std::vector<double>(vq.num_flows(), 0.0)};
  for (FlowId c = 0; c < vq.num_flows(); ++c)
    d.R[c] = backlogged_rate(vq[c].u_s, vq.delayed_x(c), vq[c].z, m.flows[c].delay_threshold, cfg);
  return d;
}

/// v = 0 when eta*y - V >= 0, else mu_M.
inline double auxiliary_rate(double y, const SimConfig& cfg) {
  return cfg.eta * y - cfg.V >= 0.0 ? 0.0 : static_cast<double>(cfg.admit_max);
}

/// R = 0 when ((q_M-mu_M)/q_M) u_s - eta y - x rho - z >= 0, else min(L + A, mu_M).
inline double arbitrary_rate(const FlowVirtualState& s, double arrivals, double rho, const SimConfig& cfg) {
  const double scale = static_cast<double>(cfg.q_max - cfg.admit_max) / cfg.q_max;
  const double t = scale * s.u_s - cfg.eta * s.y - s.x * rho - s.z;
  return t >= 0.0 ? 0.0 : std::min(s.l + arrivals, static_cast<double>(cfg.admit_max));
}

inline ControlDecision control_arbitrary(const VirtualQueues& vq, std::span<const double> arrivals,
                                         const NetworkModel& m, const SimConfig& cfg) {
  ControlDecision d{std::vector<double>(vq.num_flows(), 0.0), std::vector<double>(vq.num_flows(), 0.0)};
  for (FlowId c = 0; c < vq.num_flows(); ++c) {
    d.v[c] = auxiliary_rate(vq[c].y, cfg);
    d.R[c] = arbitrary_rate(vq[c], arrivals[c], m.flows[c].delay_threshold, cfg);
  }
  return d;
}

} // namespace dgsched

#endif // DGSCHED_CONTROL_HPP
