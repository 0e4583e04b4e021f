#ifndef DGSCHED_ORACLE_HPP
#define DGSCHED_ORACLE_HPP

// Ground truth on small instances: the capacity-region throughput optimum
// (as a linear program over enumerated activation sets), exhaustive
// matching/independent-set search, and the performance-bound constants.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dgsched/error.hpp"
#include "dgsched/lp.hpp"
#include "dgsched/matching.hpp"
#include "dgsched/model.hpp"

namespace dgsched {

// ---------------------------------------------------------------------------
// Exhaustive search

template <typename W>
struct BruteForceResult {
  W weight{};
  std::vector<std::size_t> chosen;
};

/// Enumerates every matching of the (multi)graph and returns the heaviest.
template <typename W>
BruteForceResult<W> brute_force_matchings(std::size_t num_vertices, std::span<const WeightedEdge<W>> edges) {
  if (edges.size() > kMaxEnumerableLinks)
    throw SizeError("brute_force_matchings: more than " + std::to_string(kMaxEnumerableLinks) + " edges");
  BruteForceResult<W> best;
  std::vector<bool> used(num_vertices, false);
  std::vector<std::size_t> cur;
  W cur_w{};
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == edges.size()) {
      if (cur_w > best.weight) {
        best.weight = cur_w;
        best.chosen = cur;
      }
      return;
    }
    const auto& e = edges[i];
    if (e.u != e.v && !used[e.u] && !used[e.v]) {
      used[e.u] = used[e.v] = true;
      cur.push_back(i);
      cur_w += e.weight;
      self(self, i + 1);
      cur_w -= e.weight;
      cur.pop_back();
      used[e.u] = used[e.v] = false;
    }
    self(self, i + 1);
  };
  rec(rec, 0);
  return best;
}

/// Checks all 2^n vertex subsets.
template <typename W>
BruteForceResult<W> brute_force_mwis(const ConflictGraph& g, std::span<const W> weights) {
  const std::size_t n = g.size();
  if (n > kMaxEnumerableLinks) throw SizeError("brute_force_mwis: more than 20 vertices");
  std::vector<std::uint32_t> adj(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t u : g.neighbors(v)) adj[v] |= 1u << u;
  BruteForceResult<W> best;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    W w{};
    bool ok = true;
    for (std::size_t v = 0; v < n && ok; ++v)
      if (s >> v & 1u) {
        if (adj[v] & s) ok = false;
        w += weights[v];
      }
    if (ok && w > best.weight) {
      best.weight = w;
      best.chosen.clear();
      for (std::size_t v = 0; v < n; ++v)
        if (s >> v & 1u) best.chosen.push_back(v);
    }
  }
  return best;
}

/// All maximal independent sets of the conflict graph, as bitmasks over links.
inline std::vector<std::uint32_t> maximal_activation_sets(const ConflictGraph& g) {
  const std::size_t n = g.size();
  if (n > kMaxEnumerableLinks)
    throw SizeError("activation enumeration limited to " + std::to_string(kMaxEnumerableLinks) + " links");
  std::vector<std::uint32_t> adj(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t u : g.neighbors(v)) adj[v] |= 1u << u;
  std::vector<std::uint32_t> out;
  auto rec = [&](auto&& self, std::size_t i, std::uint32_t set, std::uint32_t blocked) -> void {
    if (i == n) {
      for (std::size_t v = 0; v < n; ++v)
        if (!(set >> v & 1u) && !(adj[v] & set)) return;  // not maximal
      out.push_back(set);
      return;
    }
    if (!(blocked >> i & 1u)) self(self, i + 1, set | (1u << i), blocked | adj[i]);
    self(self, i + 1, set, blocked);
  };
  rec(rec, 0, 0u, 0u);
  return out;
}

// ---------------------------------------------------------------------------
// Capacity LP

struct CapacityResult {
  bool feasible = false;
  std::string message;
  std::vector<double> rates;   // r*_{eps,c}
  double optimum = 0.0;        // sum_c r*_{eps,c}
  std::size_t activation_sets = 0;
  std::size_t channel_states = 0;
};

/// Limit on the number of joint fading states the LP enumerates.
inline constexpr std::size_t kMaxJointChannelStates = 4096;

/// max sum_c r_c  s.t. (r_c + eps) is supportable by time-sharing feasible
/// activations (per joint channel state, weighted by its probability) with
/// flow conservation, and r_c >= a_c. With `admit_max`, r_c + eps <= mu_M too.
inline CapacityResult solve_capacity_lp(const NetworkModel& m, std::span<const double> min_rates, double epsilon,
                                        std::optional<int> admit_max = std::nullopt) {
  if (m.num_links() > kMaxEnumerableLinks)
    throw SizeError("capacity LP limited to " + std::to_string(kMaxEnumerableLinks) + " links, model has " +
                    std::to_string(m.num_links()));
  const ConflictGraph g = conflict_graph(m);
  const auto sets = maximal_activation_sets(g);

  // Joint channel states over the fading links (uniform per link, independent).
  std::vector<LinkId> fading;
  for (LinkId l = 0; l < m.num_links(); ++l)
    if (!m.links[l].fading_states.empty()) fading.push_back(l);
  std::size_t joint = 1;
  for (LinkId l : fading) {
    joint *= m.links[l].fading_states.size();
    if (joint > kMaxJointChannelStates)
      throw SizeError("capacity LP: more than " + std::to_string(kMaxJointChannelStates) + " joint channel states");
  }

  const std::size_t nf = m.num_flows();
  CapacityResult res;
  res.activation_sets = sets.size();
  res.channel_states = joint;
  auto a = [&](FlowId c) { return c < min_rates.size() ? min_rates[c] : 0.0; };

  if (admit_max)
    for (FlowId c = 0; c < nf; ++c)
      if (a(c) + epsilon > *admit_max + 1e-12) {
        res.message = "min rate plus epsilon exceeds admit_max for flow " + std::to_string(c);
        return res;
      }

  lp::Problem p;
  // time shares alpha[state][set]
  std::vector<std::vector<std::size_t>> alpha(joint, std::vector<std::size_t>(sets.size()));
  for (auto& row : alpha)
    for (auto& v : row) v = p.add_var();
  // flow variables f[l][c]; absent when the link enters c's source or leaves its destination
  std::vector<std::vector<std::optional<std::size_t>>> f(m.num_links(), std::vector<std::optional<std::size_t>>(nf));
  for (LinkId l = 0; l < m.num_links(); ++l)
    for (FlowId c = 0; c < nf; ++c)
      if (m.links[l].to != m.flows[c].source && m.links[l].from != m.flows[c].destination) f[l][c] = p.add_var();
  std::vector<std::size_t> extra(nf);  // r_c - a_c
  for (FlowId c = 0; c < nf; ++c) extra[c] = p.add_var(1.0);

  // per-state share budget
  std::vector<std::size_t> digits(fading.size(), 0);
  std::vector<std::vector<int>> cap_in_state(joint, std::vector<int>(m.num_links()));
  std::vector<double> prob(joint, 1.0);
  for (std::size_t s = 0; s < joint; ++s) {
    for (LinkId l = 0; l < m.num_links(); ++l) cap_in_state[s][l] = m.links[l].capacity;
    for (std::size_t k = 0; k < fading.size(); ++k) {
      const auto& st = m.links[fading[k]].fading_states;
      cap_in_state[s][fading[k]] = st[digits[k]];
      prob[s] /= static_cast<double>(st.size());
    }
    for (std::size_t k = 0; k < fading.size(); ++k) {
      if (++digits[k] < m.links[fading[k]].fading_states.size()) break;
      digits[k] = 0;
    }
    lp::Constraint budget;
    for (std::size_t v : alpha[s]) budget.terms.emplace_back(v, 1.0);
    budget.rhs = prob[s];
    p.constraints.push_back(std::move(budget));
  }

  // link capacity: sum_c f <= sum_s sum_{set contains l} cap_l(s) alpha
  for (LinkId l = 0; l < m.num_links(); ++l) {
    lp::Constraint c;
    for (FlowId k = 0; k < nf; ++k)
      if (f[l][k]) c.terms.emplace_back(*f[l][k], 1.0);
    for (std::size_t s = 0; s < joint; ++s)
      for (std::size_t i = 0; i < sets.size(); ++i)
        if (sets[i] >> l & 1u && cap_in_state[s][l] > 0) c.terms.emplace_back(alpha[s][i], -cap_in_state[s][l]);
    c.rhs = 0.0;
    p.constraints.push_back(std::move(c));
  }

  // conservation
  for (FlowId c = 0; c < nf; ++c) {
    const FlowSpec& fl = m.flows[c];
    for (NodeId n = 0; n < m.num_nodes(); ++n) {
      if (n == fl.destination) continue;
      lp::Constraint k;
      k.sense = lp::Sense::Equal;
      for (LinkId l = 0; l < m.num_links(); ++l) {
        if (!f[l][c]) continue;
        if (m.links[l].from == n) k.terms.emplace_back(*f[l][c], 1.0);
        if (m.links[l].to == n) k.terms.emplace_back(*f[l][c], -1.0);
      }
      if (n == fl.source) {
        k.terms.emplace_back(extra[c], -1.0);
        k.rhs = a(c) + epsilon;
      }
      p.constraints.push_back(std::move(k));
    }
    if (admit_max) {
      lp::Constraint k;
      k.terms.emplace_back(extra[c], 1.0);
      k.rhs = *admit_max - a(c) - epsilon;
      p.constraints.push_back(std::move(k));
    }
  }

  const auto sol = lp::maximize(p);
  if (sol.status != lp::Status::Optimal) {
    res.message = sol.status == lp::Status::Infeasible ? "minimum rates (plus epsilon) lie outside the capacity region"
                                                       : "capacity LP unbounded";
    return res;
  }
  res.feasible = true;
  res.rates.resize(nf);
  res.optimum = 0.0;
  for (FlowId c = 0; c < nf; ++c) {
    res.rates[c] = a(c) + sol.x[extra[c]];
    res.optimum += res.rates[c];
  }
  return res;
}

inline std::vector<double> min_rate_vector(const NetworkModel& m) {
  std::vector<double> a;
  for (const auto& f : m.flows) a.push_back(f.min_rate);
  return a;
}

// ---------------------------------------------------------------------------
// Bound constants

struct TheoremConstants {
  double epsilon = 0.0;
  double gamma = 1.0;
  double B = 0.0;
  double B_R = 0.0;      // K mu_M upper bound on the admitted sum rate
  double B_prime = 0.0;  // B + V B_R
  double B_bar = 0.0;    // B + gamma V B_R
  double B1 = 0.0;       // B + K eta mu_M^2
  double B2 = 0.0;       // B1 + V B_R
  double B3 = 0.0;       // delayed-information constant
  double B4 = 0.0;       // B3 + V B_R
  double sum_rates = 0.0;
  double throughput_floor = 0.0;      // sum r* - B/V
  double sub_throughput_floor = 0.0;  // gamma sum r* - B/V
  double arbitrary_floor = 0.0;       // sum r* - B1/V
  double delayed_floor = 0.0;         // sum r* - B3/V
  std::optional<double> epsilon1;
  std::optional<double> epsilon_prime;
  std::optional<double> delta;
  std::optional<double> virtual_ceiling;  // B'/delta
  std::optional<double> sub_epsilon1;
  std::optional<double> epsilon2;
  std::optional<double> sub_delta;
  std::optional<double> sub_virtual_ceiling;  // B_bar / delta_gamma
};

/// B = 1/2 N K q mu + K ((q-mu)/q) mu^2 + 1/2 mu^2 sum rho^2 + 1/2 K N^2 q^2
///     + 1/2 K mu^2 + 1/2 K sum a^2
inline double bound_constant_B(const NetworkModel& m, const SimConfig& cfg) {
  const double N = static_cast<double>(m.num_nodes());
  const double K = static_cast<double>(m.num_flows());
  const double q = cfg.q_max;
  const double mu = cfg.admit_max;
  double sum_rho2 = 0.0;
  double sum_a2 = 0.0;
  for (const auto& f : m.flows) {
    sum_rho2 += f.delay_threshold * f.delay_threshold;
    sum_a2 += f.min_rate * f.min_rate;
  }
  return 0.5 * N * K * q * mu + K * (q - mu) / q * mu * mu + 0.5 * mu * mu * sum_rho2 + 0.5 * K * N * N * q * q +
         0.5 * K * mu * mu + 0.5 * K * sum_a2;
}

/// `rates` are the oracle's r*_{eps,c}; `epsilon` is the interior margin
/// they were computed with and `gamma` the suboptimality factor.
inline TheoremConstants compute_constants(const NetworkModel& m, const SimConfig& cfg, std::span<const double> rates,
                                          double epsilon, double gamma = 0.5) {
  TheoremConstants t;
  t.epsilon = epsilon;
  t.gamma = gamma;
  const double N = static_cast<double>(m.num_nodes());
  const double K = static_cast<double>(m.num_flows());
  const double q = cfg.q_max;
  const double mu = cfg.admit_max;
  const double T = cfg.feedback_delay;
  double rho_max = 0.0;
  for (const auto& f : m.flows) rho_max = std::max(rho_max, f.delay_threshold);

  t.B = bound_constant_B(m, cfg);
  t.B_R = K * mu;
  t.B_prime = t.B + cfg.V * t.B_R;
  t.B_bar = t.B + gamma * cfg.V * t.B_R;
  t.B1 = t.B + K * cfg.eta * mu * mu;
  t.B2 = t.B1 + cfg.V * t.B_R;
  // rho_c appears unsummed in B3; the largest threshold keeps it an upper bound.
  t.B3 = t.B + K * N * mu * T + N * q * T * mu * rho_max + K * rho_max * rho_max * mu * mu * T;
  t.B4 = t.B3 + cfg.V * t.B_R;

  for (double r : rates) t.sum_rates += r;
  t.throughput_floor = t.sum_rates - t.B / cfg.V;
  t.sub_throughput_floor = gamma * t.sum_rates - t.B / cfg.V;
  t.arbitrary_floor = t.sum_rates - t.B1 / cfg.V;
  t.delayed_floor = t.sum_rates - t.B3 / cfg.V;

  if (rates.size() != m.num_flows() || m.num_flows() == 0) return t;

  // Largest epsilon_1 satisfying both displayed inequalities.
  auto eps1_for = [&](double g) {
    double e = (g * epsilon * (q - mu) - (2.0 * N - 1.0 + mu * mu) / 2.0) / q;
    for (FlowId c = 0; c < m.num_flows(); ++c)
      e = std::min(e, g * m.flows[c].delay_threshold * rates[c] - N * q);
    return e;
  };
  auto margin_for = [&](double g) {
    double e = std::numeric_limits<double>::infinity();
    for (FlowId c = 0; c < m.num_flows(); ++c) e = std::min(e, g * rates[c] - m.flows[c].min_rate);
    return e;
  };

  const double e1 = eps1_for(1.0);
  const double ep = margin_for(1.0);
  if (e1 > 0.0) t.epsilon1 = e1;
  if (ep > 0.0) t.epsilon_prime = ep;
  if (t.epsilon1 && t.epsilon_prime) {
    t.delta = std::min(e1, ep);
    t.virtual_ceiling = t.B_prime / *t.delta;
  }
  const double se1 = eps1_for(gamma);
  const double e2 = margin_for(gamma);
  if (se1 > 0.0) t.sub_epsilon1 = se1;
  if (e2 > 0.0) t.epsilon2 = e2;
  if (t.sub_epsilon1 && t.epsilon2) {
    t.sub_delta = std::min(se1, e2);
    t.sub_virtual_ceiling = t.B_bar / *t.sub_delta;
  }
  return t;
}

} // namespace dgsched

#endif // DGSCHED_ORACLE_HPP
