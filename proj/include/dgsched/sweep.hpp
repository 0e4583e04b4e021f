#ifndef DGSCHED_SWEEP_HPP
#define DGSCHED_SWEEP_HPP

// Parameter sweeps: a grid file names a model, algorithms, seeds and lists of
// parameter values; every combination becomes one independent run.
//
//   model: fig1_like.yaml          # relative to the grid file
//   algorithms: [alg, bp]
//   horizon: 100000
//   seeds: [1, 2, 3]
//   parameters:
//     q_max: [5, 10, 20, 40]
//     delay_per_qmax: [30]         # rho_c = 30 q_max for every flow

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "dgsched/config_io.hpp"
#include "dgsched/engine.hpp"
#include "dgsched/metrics.hpp"

namespace dgsched {

struct GridSpec {
  LoadedModel base;
  std::vector<Algorithm> algorithms{Algorithm::Alg};
  std::optional<Slot> horizon;
  std::vector<std::uint64_t> seeds;
  std::map<std::string, std::vector<double>> parameters;
};

struct RunSpec {
  std::size_t index = 0;
  Algorithm algorithm = Algorithm::Alg;
  NetworkModel model;
  SimConfig config;
  std::vector<std::pair<std::string, double>> parameters;
};

struct RunResult {
  RunSpec spec;
  MetricsReport report;
  std::string error;  // empty on success
  bool ok() const { return error.empty(); }
};

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string config_hash(const RunSpec& r) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(serialize_model(r.model, r.config) + "|" + to_string(r.algorithm))));
  return buf;
}

/// Sets one named parameter. delay_per_qmax reads the current q_max, so the
/// expansion applies it last.
inline void apply_parameter(NetworkModel& m, SimConfig& c, const std::string& key, double v) {
  if (key == "q_max") c.q_max = static_cast<int>(v);
  else if (key == "admit_max") c.admit_max = static_cast<int>(v);
  else if (key == "V") c.V = v;
  else if (key == "eta") c.eta = v;
  else if (key == "feedback_delay") c.feedback_delay = static_cast<int>(v);
  else if (key == "transport_buffer") c.transport_buffer = static_cast<int>(v);
  else if (key == "epsilon") c.epsilon = v;
  else if (key == "delay_threshold") for (auto& f : m.flows) f.delay_threshold = v;
  else if (key == "delay_per_qmax") for (auto& f : m.flows) f.delay_threshold = v * c.q_max;
  else if (key == "min_rate") for (auto& f : m.flows) f.min_rate = v;
  else if (key == "arrival_rate")
    for (auto& f : m.flows) {
      f.arrival.kind = ArrivalKind::Poisson;
      f.arrival.rate = v;
    }
  else throw ConfigError("unknown sweep parameter '" + key + "'");
}

inline std::vector<RunSpec> expand(const GridSpec& g) {
  std::vector<std::pair<std::string, std::vector<double>>> axes(g.parameters.begin(), g.parameters.end());
  std::stable_partition(axes.begin(), axes.end(), [](const auto& a) { return a.first != "delay_per_qmax"; });
  for (const auto& [k, vals] : axes)
    if (vals.empty()) throw ConfigError("sweep parameter '" + k + "' has no values");

  std::vector<std::uint64_t> seeds = g.seeds;
  if (seeds.empty()) seeds.push_back(g.base.config.seed);

  std::vector<RunSpec> out;
  std::vector<std::size_t> idx(axes.size(), 0);
  for (;;) {
    for (Algorithm a : g.algorithms)
      for (std::uint64_t s : seeds) {
        RunSpec r;
        r.index = out.size();
        r.algorithm = a;
        r.model = g.base.model;
        r.config = g.base.config;
        if (g.horizon) r.config.horizon = *g.horizon;
        r.config.seed = s;
        for (std::size_t i = 0; i < axes.size(); ++i) {
          const double v = axes[i].second[idx[i]];
          apply_parameter(r.model, r.config, axes[i].first, v);
          r.parameters.emplace_back(axes[i].first, v);
        }
        r.config = configure(r.config, a);
        out.push_back(std::move(r));
      }
    std::size_t i = 0;
    for (; i < axes.size(); ++i) {
      if (++idx[i] < axes[i].second.size()) break;
      idx[i] = 0;
    }
    if (i == axes.size()) break;
  }
  return out;
}

inline GridSpec load_grid(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError("cannot open grid file '" + path + "'");
  } catch (const YAML::ParserException& e) {
    throw ConfigError(path + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  detail::YamlReader rd(path);
  GridSpec g;
  const auto model_rel = rd.get<std::string>(root, "model", "grid");
  const auto model_path = (std::filesystem::path(path).parent_path() / model_rel).string();
  g.base = load_model(model_path, false);
  if (root["algorithms"]) {
    g.algorithms.clear();
    for (const auto& a : root["algorithms"]) {
      const auto s = rd.as<std::string>(a, "algorithms");
      const auto alg = parse_algorithm(s);
      if (!alg) rd.fail(a, "unknown algorithm '" + s + "'");
      g.algorithms.push_back(*alg);
    }
  }
  if (root["horizon"]) g.horizon = rd.as<Slot>(root["horizon"], "horizon");
  g.seeds = rd.get_or<std::vector<std::uint64_t>>(root, "seeds", {});
  if (const YAML::Node ps = root["parameters"]) {
    if (!ps.IsMap()) rd.fail(ps, "'parameters' must map names to value lists");
    for (const auto& kv : ps) {
      const auto key = kv.first.as<std::string>();
      if (kv.second.IsSequence()) g.parameters[key] = rd.as<std::vector<double>>(kv.second, key);
      else g.parameters[key] = {rd.as<double>(kv.second, key)};
    }
  }
  return g;
}

/// Runs every spec on up to `threads` workers. Failures (validation errors,
/// invariant breaches) are recorded per run rather than thrown.
inline std::vector<RunResult> execute(const std::vector<RunSpec>& specs, unsigned threads = 0,
                                      const RunOptions& opt = {}) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(specs.size(), 1)));
  std::vector<RunResult> results(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < specs.size();) {
      RunResult& r = results[i];
      r.spec = specs[i];
      try {
        r.report = run_algorithm(r.spec.model, r.spec.config, r.spec.algorithm, opt);
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  return results;
}

/// Writes run_<i>.csv per run and index.csv listing parameters and hashes.
inline void write_sweep(const std::vector<RunResult>& results, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto base = std::filesystem::path(dir);
  std::ofstream idx(base / "index.csv");
  if (!idx) throw std::runtime_error("cannot write '" + (base / "index.csv").string() + "'");
  idx << "# dgsched sweep index v1\n";
  idx << "run,file,algorithm,seed,parameters,config_hash,status,throughput,mean_delay,max_backlog\n";
  for (const RunResult& r : results) {
    const std::string file = "run_" + std::to_string(r.spec.index) + ".csv";
    std::string params;
    for (const auto& [k, v] : r.spec.parameters) {
      if (!params.empty()) params += ';';
      std::ostringstream os;
      os << k << '=' << v;
      params += os.str();
    }
    idx << r.spec.index << ',' << file << ',' << to_string(r.spec.algorithm) << ',' << r.spec.config.seed << ','
        << params << ',' << config_hash(r.spec) << ',';
    if (r.ok()) {
      emit_report(r.report, (base / file).string());
      idx << "ok," << r.report.full.throughput << ',' << r.report.full.mean_delay << ',' << r.report.max_backlog;
    } else {
      std::string msg = r.error.substr(0, r.error.find('\n'));
      std::replace(msg.begin(), msg.end(), ',', ';');
      idx << "error: " << msg << ",,,";
    }
    idx << '\n';
  }
}

} // namespace dgsched

#endif // DGSCHED_SWEEP_HPP
