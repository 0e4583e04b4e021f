#ifndef DGSCHED_METRICS_HPP
#define DGSCHED_METRICS_HPP

// Per-run statistics: rates, delays, occupancy, virtual backlogs and the
// Lyapunov value, over the full horizon and the post-warm-up window.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dgsched/model.hpp"
#include "dgsched/queues.hpp"

namespace dgsched {

/// Raw sums for one flow over one window.
struct FlowSums {
  std::int64_t admitted = 0;
  double virtual_in = 0.0;     // sum of R_c(t)
  std::int64_t delivered = 0;
  std::int64_t delay_sum = 0;  // inclusive slot counts
  std::int64_t backlog_sum = 0;    // slot-start sum_n U_n^c
  std::int64_t occupancy_sum = 0;  // slot-start backlog plus this slot's admissions
  double u_s_sum = 0.0;
  double x_sum = 0.0;
  double z_sum = 0.0;
  double y_sum = 0.0;

  FlowSums& operator+=(const FlowSums& o) {
    admitted += o.admitted;
    virtual_in += o.virtual_in;
    delivered += o.delivered;
    delay_sum += o.delay_sum;
    backlog_sum += o.backlog_sum;
    occupancy_sum += o.occupancy_sum;
    u_s_sum += o.u_s_sum;
    x_sum += o.x_sum;
    z_sum += o.z_sum;
    y_sum += o.y_sum;
    return *this;
  }
};

struct WindowSums {
  Slot slots = 0;
  std::vector<FlowSums> flows;

  WindowSums& operator+=(const WindowSums& o) {
    slots += o.slots;
    if (flows.size() < o.flows.size()) flows.resize(o.flows.size());
    for (std::size_t c = 0; c < o.flows.size(); ++c) flows[c] += o.flows[c];
    return *this;
  }
};

/// Everything the engine feeds in for one slot.
struct SlotSample {
  Slot slot = 0;
  std::span<const std::int64_t> backlog;  // slot-start sum_n U_n^c per flow
  std::span<const int> admitted;
  std::span<const double> R;
  std::span<const FlowVirtualState> virt;  // slot-start virtual state
  std::span<const Delivery> deliveries;
  std::int64_t max_backlog = 0;  // after this slot's update
  double lyapunov = 0.0;         // slot-start value
};

/// Mergeable accumulator. The full window, the post-warm-up window and the
/// two horizon halves are kept separately; merging adds sums and takes maxima.
class MetricsAccumulator {
public:
  MetricsAccumulator() = default;
  MetricsAccumulator(std::size_t flows, Slot horizon, Slot warmup)
      : horizon_(horizon), warmup_(warmup), half_(horizon / 2) {
    for (WindowSums* w : {&full_, &steady_, &first_half_, &second_half_}) w->flows.resize(flows);
  }

  void add(const SlotSample& s) {
    add_to(full_, s);
    if (s.slot >= warmup_) add_to(steady_, s);
    add_to(s.slot < half_ ? first_half_ : second_half_, s);
    max_backlog_ = std::max(max_backlog_, s.max_backlog);
    lyapunov_max_ = std::max(lyapunov_max_, s.lyapunov);
    lyapunov_last_ = s.lyapunov;
  }

  void merge(const MetricsAccumulator& o) {
    full_ += o.full_;
    steady_ += o.steady_;
    first_half_ += o.first_half_;
    second_half_ += o.second_half_;
    horizon_ += o.horizon_;
    max_backlog_ = std::max(max_backlog_, o.max_backlog_);
    lyapunov_max_ = std::max(lyapunov_max_, o.lyapunov_max_);
  }

  const WindowSums& full() const { return full_; }
  const WindowSums& steady() const { return steady_; }
  const WindowSums& first_half() const { return first_half_; }
  const WindowSums& second_half() const { return second_half_; }
  Slot horizon() const { return horizon_; }
  Slot warmup() const { return warmup_; }
  std::int64_t max_backlog() const { return max_backlog_; }
  double lyapunov_max() const { return lyapunov_max_; }
  double lyapunov_last() const { return lyapunov_last_; }

private:
  static void add_to(WindowSums& w, const SlotSample& s) {
    ++w.slots;
    for (FlowId c = 0; c < w.flows.size(); ++c) {
      FlowSums& f = w.flows[c];
      f.admitted += s.admitted[c];
      f.virtual_in += s.R[c];
      f.backlog_sum += s.backlog[c];
      f.occupancy_sum += s.backlog[c] + s.admitted[c];
      f.u_s_sum += s.virt[c].u_s;
      f.x_sum += s.virt[c].x;
      f.z_sum += s.virt[c].z;
      f.y_sum += s.virt[c].y;
    }
    for (const Delivery& d : s.deliveries) {
      ++w.flows[d.flow].delivered;
      w.flows[d.flow].delay_sum += d.delay;
    }
  }

  WindowSums full_, steady_, first_half_, second_half_;
  Slot horizon_ = 0;
  Slot warmup_ = 0;
  Slot half_ = 0;
  std::int64_t max_backlog_ = 0;
  double lyapunov_max_ = 0.0;
  double lyapunov_last_ = 0.0;
};

// ---------------------------------------------------------------------------
// Report

struct FlowMetrics {
  std::string name;
  double admitted_rate = 0.0;  // mu_c
  double virtual_rate = 0.0;   // r_c
  std::int64_t delivered = 0;
  double mean_delay = 0.0;
  double avg_backlog = 0.0;
  double avg_occupancy = 0.0;
  double little_residual = 0.0;  // |mean delay - avg occupancy / mu_c|
  double avg_u_s = 0.0;
  double avg_x = 0.0;
  double avg_z = 0.0;
  double avg_y = 0.0;
};

struct WindowMetrics {
  Slot start = 0;
  Slot slots = 0;
  std::vector<FlowMetrics> flows;
  double throughput = 0.0;          // sum_c mu_c
  double virtual_throughput = 0.0;  // sum_c r_c
  double mean_delay = 0.0;          // over all delivered packets
  double avg_virtual_sum = 0.0;     // time average of sum_c (u_s + x + z [+ y])
};

struct MetricsReport {
  Slot horizon = 0;
  Slot warmup = 0;
  WindowMetrics full;
  WindowMetrics steady;  // slots >= warmup
  double virtual_first_half = 0.0;
  double virtual_second_half = 0.0;
  std::int64_t max_backlog = 0;
  std::int64_t admitted_total = 0;
  std::int64_t delivered_total = 0;
  std::int64_t in_flight = 0;
  double lyapunov_max = 0.0;
  double lyapunov_final = 0.0;
  std::vector<double> lyapunov;  // per-slot trace, when recorded
};

namespace detail {

inline double ratio(double a, double b) { return b > 0.0 ? a / b : 0.0; }

inline WindowMetrics summarize(const WindowSums& w, const NetworkModel& m, Slot start, bool with_y) {
  WindowMetrics out;
  out.start = start;
  out.slots = w.slots;
  const double n = static_cast<double>(w.slots);
  std::int64_t delivered = 0;
  std::int64_t delay_sum = 0;
  double vsum = 0.0;
  for (FlowId c = 0; c < w.flows.size(); ++c) {
    const FlowSums& s = w.flows[c];
    FlowMetrics f;
    f.name = c < m.num_flows() ? m.flows[c].name : std::to_string(c);
    f.admitted_rate = ratio(static_cast<double>(s.admitted), n);
    f.virtual_rate = ratio(s.virtual_in, n);
    f.delivered = s.delivered;
    f.mean_delay = ratio(static_cast<double>(s.delay_sum), static_cast<double>(s.delivered));
    f.avg_backlog = ratio(static_cast<double>(s.backlog_sum), n);
    f.avg_occupancy = ratio(static_cast<double>(s.occupancy_sum), n);
    f.little_residual = std::abs(f.mean_delay - ratio(f.avg_occupancy, f.admitted_rate));
    f.avg_u_s = ratio(s.u_s_sum, n);
    f.avg_x = ratio(s.x_sum, n);
    f.avg_z = ratio(s.z_sum, n);
    f.avg_y = ratio(s.y_sum, n);
    out.throughput += f.admitted_rate;
    out.virtual_throughput += f.virtual_rate;
    vsum += s.u_s_sum + s.x_sum + s.z_sum + (with_y ? s.y_sum : 0.0);
    delivered += s.delivered;
    delay_sum += s.delay_sum;
    out.flows.push_back(std::move(f));
  }
  out.mean_delay = ratio(static_cast<double>(delay_sum), static_cast<double>(delivered));
  out.avg_virtual_sum = ratio(vsum, n);
  return out;
}

inline double virtual_average(const WindowSums& w) {
  double s = 0.0;
  for (const auto& f : w.flows) s += f.u_s_sum + f.x_sum + f.z_sum;
  return ratio(s, static_cast<double>(w.slots));
}

} // namespace detail

/// `in_flight` is the packet count still queued at the end of the run.
inline MetricsReport finalize(const MetricsAccumulator& acc, const NetworkModel& m, const SimConfig& cfg,
                              std::int64_t in_flight) {
  const bool with_y = cfg.variant == Variant::ArbitraryArrivals;
  MetricsReport r;
  r.horizon = acc.horizon();
  r.warmup = acc.warmup();
  r.full = detail::summarize(acc.full(), m, 0, with_y);
  r.steady = detail::summarize(acc.steady(), m, acc.warmup(), with_y);
  r.virtual_first_half = detail::virtual_average(acc.first_half());
  r.virtual_second_half = detail::virtual_average(acc.second_half());
  r.max_backlog = acc.max_backlog();
  for (const auto& f : acc.full().flows) {
    r.admitted_total += f.admitted;
    r.delivered_total += f.delivered;
  }
  r.in_flight = in_flight;
  r.lyapunov_max = acc.lyapunov_max();
  r.lyapunov_final = acc.lyapunov_last();
  return r;
}

// ---------------------------------------------------------------------------
// QoS verdict

struct FlowVerdict {
  std::string name;
  double mean_delay = 0.0;
  double delay_limit = 0.0;
  bool delay_ok = false;
  double rate = 0.0;
  double rate_floor = 0.0;
  bool rate_ok = false;
};

struct QoSVerdict {
  std::vector<FlowVerdict> flows;
  bool backlog_ok = false;  // max U <= q_M, no tolerance

  bool pass() const {
    return backlog_ok && std::all_of(flows.begin(), flows.end(), [](const FlowVerdict& f) {
             return f.delay_ok && f.rate_ok;
           });
  }
};

/// Judges the post-warm-up window: mean delay <= rho (1 + tol) and
/// mu_c >= a (1 - tol) per flow, and max U <= q_M over the whole run.
inline QoSVerdict check_qos(const MetricsReport& r, const NetworkModel& m, const SimConfig& cfg, double tol = 0.05) {
  QoSVerdict v;
  v.backlog_ok = r.max_backlog <= cfg.q_max;
  for (FlowId c = 0; c < m.num_flows(); ++c) {
    FlowVerdict f;
    f.name = m.flows[c].name;
    const FlowMetrics* fm = c < r.steady.flows.size() ? &r.steady.flows[c] : nullptr;
    f.mean_delay = fm ? fm->mean_delay : 0.0;
    f.rate = fm ? fm->admitted_rate : 0.0;
    f.delay_limit = m.flows[c].delay_threshold * (1.0 + tol);
    f.rate_floor = m.flows[c].min_rate * (1.0 - tol);
    f.delay_ok = f.mean_delay <= f.delay_limit;
    f.rate_ok = f.rate >= f.rate_floor;
    v.flows.push_back(std::move(f));
  }
  return v;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kReportHeader = "# dgsched report v1";

inline const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = {
      "scope",           "flow",           "admitted_rate",      "virtual_rate",    "delivered",
      "mean_delay",      "avg_backlog",    "avg_occupancy",      "little_residual", "avg_u_s",
      "avg_x",           "avg_z",          "avg_y",              "steady_admitted_rate",
      "steady_virtual_rate", "steady_delivered", "steady_mean_delay", "steady_avg_occupancy",
      "steady_little_residual", "max_backlog", "avg_virtual_sum", "virtual_first_half",
      "virtual_second_half", "lyapunov_max", "lyapunov_final", "horizon", "warmup"};
  return cols;
}

/// One row per flow plus a trailing global row (flow = "*").
inline void write_report(std::ostream& os, const MetricsReport& r) {
  os << kReportHeader << '\n';
  const auto& cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  os << std::setprecision(10);
  for (std::size_t c = 0; c < r.full.flows.size(); ++c) {
    const FlowMetrics& f = r.full.flows[c];
    const FlowMetrics s = c < r.steady.flows.size() ? r.steady.flows[c] : FlowMetrics{};
    os << "flow," << f.name << ',' << f.admitted_rate << ',' << f.virtual_rate << ',' << f.delivered << ','
       << f.mean_delay << ',' << f.avg_backlog << ',' << f.avg_occupancy << ',' << f.little_residual << ','
       << f.avg_u_s << ',' << f.avg_x << ',' << f.avg_z << ',' << f.avg_y << ',' << s.admitted_rate << ','
       << s.virtual_rate << ',' << s.delivered << ',' << s.mean_delay << ',' << s.avg_occupancy << ','
       << s.little_residual << ",,,,,,,," << '\n';
  }
  std::int64_t delivered = 0;
  std::int64_t steady_delivered = 0;
  for (const auto& f : r.full.flows) delivered += f.delivered;
  for (const auto& f : r.steady.flows) steady_delivered += f.delivered;
  os << "global,*," << r.full.throughput << ',' << r.full.virtual_throughput << ',' << delivered << ','
     << r.full.mean_delay << ",,,,,,,," << r.steady.throughput << ',' << r.steady.virtual_throughput << ','
     << steady_delivered << ',' << r.steady.mean_delay << ",,," << r.max_backlog << ',' << r.full.avg_virtual_sum
     << ',' << r.virtual_first_half << ',' << r.virtual_second_half << ',' << r.lyapunov_max << ','
     << r.lyapunov_final << ',' << r.horizon << ',' << r.warmup << '\n';
}

inline void emit_report(const MetricsReport& r, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open report file '" + path + "' for writing");
  write_report(f, r);
  if (!f) throw std::runtime_error("write failed for report file '" + path + "'");
}

} // namespace dgsched

#endif // DGSCHED_METRICS_HPP
