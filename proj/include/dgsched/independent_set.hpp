#ifndef DGSCHED_INDEPENDENT_SET_HPP
#define DGSCHED_INDEPENDENT_SET_HPP

// Weighted independent sets on a link conflict graph.

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dgsched/error.hpp"
#include "dgsched/model.hpp"

namespace dgsched {

/// GWMIN: while positive-weight vertices remain, take the one maximising
/// w(v) / (deg(v) + 1) in the remaining graph (lowest index on ties) and
/// delete its closed neighbourhood. Ratio >= 1/Delta of the optimum.
/// Non-positive weights are never selected.
template <typename W>
std::vector<std::size_t> greedy_mwis_min(const ConflictGraph& g, std::span<const W> weights) {
  const std::size_t n = g.size();
  std::vector<bool> alive(n, false);
  for (std::size_t v = 0; v < n; ++v) alive[v] = weights[v] > W{};
  std::vector<std::size_t> deg(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (alive[v])
      for (std::size_t u : g.neighbors(v)) deg[v] += alive[u] ? 1 : 0;

  std::vector<std::size_t> chosen;
  for (;;) {
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      // w(v)/(d(v)+1) > w(best)/(d(best)+1), cross-multiplied
      if (best == n || weights[v] * static_cast<W>(deg[best] + 1) > weights[best] * static_cast<W>(deg[v] + 1))
        best = v;
    }
    if (best == n) break;
    chosen.push_back(best);
    std::vector<std::size_t> removed{best};
    for (std::size_t u : g.neighbors(best))
      if (alive[u]) removed.push_back(u);
    for (std::size_t r : removed) alive[r] = false;
    for (std::size_t r : removed)
      for (std::size_t u : g.neighbors(r))
        if (alive[u]) --deg[u];
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

/// GWMAX: while an edge remains among the surviving vertices, delete the
/// vertex with d(v) >= 1 minimising w(v) / (d(v) (d(v) + 1)); the survivors
/// form the independent set.
template <typename W>
std::vector<std::size_t> greedy_mwis_max(const ConflictGraph& g, std::span<const W> weights) {
  const std::size_t n = g.size();
  std::vector<bool> alive(n, false);
  for (std::size_t v = 0; v < n; ++v) alive[v] = weights[v] > W{};
  std::vector<std::size_t> deg(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (alive[v])
      for (std::size_t u : g.neighbors(v)) deg[v] += alive[u] ? 1 : 0;
  for (;;) {
    std::size_t worst = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[v] || deg[v] == 0) continue;
      const auto dv = static_cast<W>(deg[v] * (deg[v] + 1));
      if (worst == n) {
        worst = v;
        continue;
      }
      const auto dw = static_cast<W>(deg[worst] * (deg[worst] + 1));
      if (weights[v] * dw < weights[worst] * dv) worst = v;
    }
    if (worst == n) break;
    alive[worst] = false;
    for (std::size_t u : g.neighbors(worst))
      if (alive[u]) --deg[u];
  }
  std::vector<std::size_t> chosen;
  for (std::size_t v = 0; v < n; ++v)
    if (alive[v]) chosen.push_back(v);
  return chosen;
}

/// Exact maximum weight independent set by branch and bound over the
/// positive-weight vertices. Refuses graphs with more than `limit` links.
template <typename W>
std::vector<std::size_t> exact_mwis(const ConflictGraph& g, std::span<const W> weights,
                                    std::size_t limit = kMaxEnumerableLinks) {
  std::vector<std::size_t> cand;
  for (std::size_t v = 0; v < g.size(); ++v)
    if (weights[v] > W{}) cand.push_back(v);
  if (g.size() > limit)
    throw SizeError("exact_mwis: " + std::to_string(g.size()) + " links exceeds the limit of " +
                    std::to_string(limit) + "; use the greedy scheduler");

  // suffix sums bound the best completion
  std::vector<W> suffix(cand.size() + 1, W{});
  for (std::size_t i = cand.size(); i-- > 0;) suffix[i] = suffix[i + 1] + weights[cand[i]];

  std::vector<std::size_t> current;
  std::vector<std::size_t> best;
  W best_w{};
  W cur_w{};
  std::vector<int> blocked(g.size(), 0);

  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (cur_w > best_w) {
      best_w = cur_w;
      best = current;
    }
    if (i == cand.size() || cur_w + suffix[i] <= best_w) return;
    const std::size_t v = cand[i];
    if (blocked[v] == 0) {
      current.push_back(v);
      cur_w += weights[v];
      for (std::size_t u : g.neighbors(v)) ++blocked[u];
      self(self, i + 1);
      for (std::size_t u : g.neighbors(v)) --blocked[u];
      cur_w -= weights[v];
      current.pop_back();
    }
    self(self, i + 1);
  };
  rec(rec, 0);
  return best;
}

template <typename W>
W set_weight(std::span<const W> weights, std::span<const std::size_t> set) {
  W s{};
  for (std::size_t v : set) s += weights[v];
  return s;
}

inline bool is_independent(const ConflictGraph& g, std::span<const std::size_t> set) {
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j)
      if (set[i] == set[j] || g.conflicts(set[i], set[j])) return false;
  return true;
}

} // namespace dgsched

#endif // DGSCHED_INDEPENDENT_SET_HPP
