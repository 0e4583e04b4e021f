#ifndef DGSCHED_TESTS_HELPERS_HPP
#define DGSCHED_TESTS_HELPERS_HPP

#include <random>
#include <string>
#include <vector>

#include "dgsched/dgsched.hpp"

namespace dgsched::testing {

inline std::string scenario(const std::string& name) { return std::string(DGSCHED_SCENARIO_DIR) + "/" + name; }

inline LoadedModel load_scenario(const std::string& name) { return load_model(scenario(name)); }

/// Every shipped model file.
inline std::vector<std::string> scenario_names() {
  return {"single_link.yaml",         "line3.yaml",          "line3_gmm.yaml",
          "shared_relay.yaml",        "fig1_like.yaml",      "fig1_like_gmm.yaml",
          "fig1_like_arbitrary.yaml", "fig1_like_delayed_t5.yaml", "fig1_like_delayed_t10.yaml",
          "general_fading.yaml",      "general_greedy.yaml"};
}

/// Nodes named N0..N{n-1}.
inline NetworkModel named_nodes(std::size_t n) {
  NetworkModel m;
  for (std::size_t i = 0; i < n; ++i) m.nodes.push_back("N" + std::to_string(i));
  return m;
}

inline FlowSpec flow(NodeId s, NodeId d, double a = 0.0, double rho = 50.0, std::string name = "") {
  FlowSpec f;
  f.name = name.empty() ? "f" + std::to_string(s) + "_" + std::to_string(d) : name;
  f.source = s;
  f.destination = d;
  f.min_rate = a;
  f.delay_threshold = rho;
  return f;
}

/// Directed chain 0 -> 1 -> ... -> n-1 with one flow end to end.
inline NetworkModel chain(std::size_t n, double a = 0.0, double rho = 50.0) {
  NetworkModel m = named_nodes(n);
  for (std::size_t i = 0; i + 1 < n; ++i) m.links.push_back({i, i + 1});
  m.flows.push_back(flow(0, n - 1, a, rho));
  return m;
}

/// Random simple undirected edge set (u < v), as links, on `n` vertices.
inline NetworkModel random_graph(std::mt19937_64& rng, std::size_t n, std::size_t max_links) {
  NetworkModel m = named_nodes(n);
  std::vector<std::pair<std::size_t, std::size_t>> all;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) all.emplace_back(u, v);
  std::shuffle(all.begin(), all.end(), rng);
  std::uniform_int_distribution<std::size_t> k(0, std::min(max_links, all.size()));
  const std::size_t links = k(rng);
  for (std::size_t i = 0; i < links; ++i) {
    auto [u, v] = all[i];
    if (rng() & 1u) std::swap(u, v);
    m.links.push_back({u, v});
  }
  return m;
}

} // namespace dgsched::testing

#endif // DGSCHED_TESTS_HELPERS_HPP
