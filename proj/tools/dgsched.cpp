// dgsched command line: run, sweep, oracle, validate.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dgsched/dgsched.hpp"

namespace {

using namespace dgsched;

constexpr int kExitConfig = 1;
constexpr int kExitInvariant = 2;

std::string virtual_trace_path(const std::string& p) {
  std::filesystem::path path(p);
  return (path.parent_path() / (path.stem().string() + ".virtual.csv")).string();
}

void print_summary(const MetricsReport& r, const NetworkModel& m) {
  std::cout << std::fixed << std::setprecision(4);
  std::cout << "slots " << r.horizon << " (warm-up " << r.warmup << ")\n";
  std::cout << "flow        mu_c      r_c       delay     delivered\n";
  for (std::size_t c = 0; c < r.full.flows.size(); ++c) {
    const auto& f = r.full.flows[c];
    std::cout << std::left << std::setw(10) << m.flows[c].name << std::right << std::setw(8) << f.admitted_rate
              << std::setw(10) << f.virtual_rate << std::setw(10) << f.mean_delay << std::setw(12) << f.delivered
              << '\n';
  }
  std::cout << "throughput " << r.full.throughput << "  mean delay " << r.full.mean_delay << "  max backlog "
            << r.max_backlog << '\n';
}

int cmd_run(const std::string& model_path, const std::optional<std::string>& algo, std::optional<Slot> horizon,
            std::optional<std::uint64_t> seed, const std::string& out, const std::optional<std::string>& trace) {
  LoadedModel lm = load_model(model_path, false);
  SimConfig cfg = lm.config;
  if (horizon) cfg.horizon = *horizon;
  if (seed) cfg.seed = *seed;
  Algorithm a = Algorithm::Alg;
  if (algo) {
    a = *parse_algorithm(*algo);
  } else {
    switch (cfg.variant) {
      case Variant::Backlogged: a = Algorithm::Alg; break;
      case Variant::ArbitraryArrivals: a = Algorithm::AlgArbitrary; break;
      case Variant::DelayedInfo: a = Algorithm::AlgDelayed; break;
      case Variant::GeneralInterference: a = Algorithm::AlgGeneral; break;
    }
  }

  RunOptions opt;
  std::ofstream tq, tv;
  if (trace) {
    tq.open(*trace);
    tv.open(virtual_trace_path(*trace));
    if (!tq || !tv) throw std::runtime_error("cannot open trace files at '" + *trace + "'");
    tq << "slot,node,flow,U\n";
    tv << "slot,flow,u_s,z,x,y,l\n";
    tv << std::setprecision(17);
    const NetworkModel& m = lm.model;
    opt.observer = [&](const SlotView& v) {
      for (NodeId n = 0; n < m.num_nodes(); ++n)
        for (FlowId c = 0; c < m.num_flows(); ++c)
          if (const auto u = v.queues.backlog(n, c); u > 0)
            tq << v.slot << ',' << m.nodes[n] << ',' << m.flows[c].name << ',' << u << '\n';
      for (FlowId c = 0; c < m.num_flows(); ++c) {
        const auto& s = v.virt[c];
        tv << v.slot << ',' << m.flows[c].name << ',' << s.u_s << ',' << s.z << ',' << s.x << ',' << s.y << ','
           << s.l << '\n';
      }
    };
  }

  const MetricsReport r = run_algorithm(lm.model, cfg, a, opt);
  emit_report(r, out);
  print_summary(r, lm.model);
  return 0;
}

int cmd_sweep(const std::string& grid_path, const std::string& out, unsigned threads) {
  const GridSpec g = load_grid(grid_path);
  const auto specs = expand(g);
  std::cout << "sweep: " << specs.size() << " runs\n";
  const auto results = execute(specs, threads);
  write_sweep(results, out);
  int failures = 0;
  for (const auto& r : results)
    if (!r.ok()) {
      ++failures;
      std::cerr << "run " << r.spec.index << " failed: " << r.error << '\n';
    }
  std::cout << "wrote " << results.size() << " reports and index.csv to " << out << '\n';
  return failures ? kExitInvariant : 0;
}

int cmd_oracle(const std::string& model_path, std::optional<double> eps_opt, double gamma) {
  const LoadedModel lm = load_model(model_path, false);
  const NetworkModel& m = lm.model;
  const double eps = eps_opt.value_or(lm.config.epsilon.value_or(0.0));
  const auto a = min_rate_vector(m);
  std::optional<int> cap;
  cap = lm.config.admit_max;
  const CapacityResult lp = solve_capacity_lp(m, a, eps, cap);
  std::cout << std::setprecision(6);
  std::cout << "epsilon " << eps << "  activation sets " << lp.activation_sets << "  channel states "
            << lp.channel_states << '\n';
  if (!lp.feasible) {
    std::cout << "infeasible: " << lp.message << '\n';
    return kExitConfig;
  }
  std::cout << "flow        a_c       r*_eps\n";
  for (FlowId c = 0; c < m.num_flows(); ++c)
    std::cout << std::left << std::setw(10) << m.flows[c].name << std::right << std::setw(8) << a[c]
              << std::setw(12) << lp.rates[c] << '\n';
  std::cout << "sum r* " << lp.optimum << '\n';

  const TheoremConstants t = compute_constants(m, lm.config, lp.rates, eps, gamma);
  auto opt = [](const std::optional<double>& v) { return v ? std::to_string(*v) : std::string("not computable"); };
  std::cout << "B        " << t.B << "\nB_R      " << t.B_R << "\nB'       " << t.B_prime << "\nB_bar    "
            << t.B_bar << "\nB1       " << t.B1 << "\nB2       " << t.B2 << "\nB3       " << t.B3 << "\nB4       "
            << t.B4 << '\n';
  std::cout << "throughput floor (sum r* - B/V)        " << t.throughput_floor << '\n';
  std::cout << "gamma floor (gamma sum r* - B/V)       " << t.sub_throughput_floor << '\n';
  std::cout << "epsilon1 " << opt(t.epsilon1) << "  epsilon' " << opt(t.epsilon_prime) << "  delta "
            << opt(t.delta) << '\n';
  std::cout << "virtual backlog ceiling B'/delta       " << opt(t.virtual_ceiling) << '\n';
  std::cout << "epsilon2 " << opt(t.epsilon2) << "  gamma delta " << opt(t.sub_delta) << "  ceiling "
            << opt(t.sub_virtual_ceiling) << '\n';
  const TheoremCheck chk = theorem_conditions(m, lm.config, eps, lp.rates);
  std::cout << "q_max > " << chk.q_threshold << ": " << (chk.q_condition ? "holds" : "violated") << '\n';
  for (FlowId c = 0; c < m.num_flows(); ++c)
    std::cout << "rho(" << m.flows[c].name << ") > " << chk.rho_thresholds[c] << ": "
              << (chk.rho_conditions[c] ? "holds" : "violated") << '\n';
  return 0;
}

int cmd_validate(const std::string& model_path, std::optional<double> eps) {
  const LoadedModel lm = load_model(model_path, false);
  std::vector<double> rates;
  if (eps && lm.model.num_links() <= kMaxEnumerableLinks) {
    const auto lp = solve_capacity_lp(lm.model, min_rate_vector(lm.model), *eps, lm.config.admit_max);
    if (lp.feasible) rates = lp.rates;
  }
  const auto rep = validate(lm.model, lm.config, eps, rates);
  for (const auto& v : rep.violations) std::cout << "violation: " << v << '\n';
  if (rep.theorem) {
    const auto& t = *rep.theorem;
    std::cout << "q_max > " << t.q_threshold << ": " << (t.q_condition ? "holds" : "condition violated") << '\n';
    if (!t.rho_checked()) std::cout << "rho conditions: no oracle rates\n";
    for (std::size_t c = 0; c < t.rho_thresholds.size(); ++c)
      std::cout << "rho(" << lm.model.flows[c].name << ") > " << t.rho_thresholds[c] << ": "
                << (t.rho_conditions[c] ? "holds" : "condition violated") << '\n';
  }
  std::cout << (rep.ok() ? "valid" : "invalid") << '\n';
  return rep.ok() ? 0 : kExitConfig;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay-guaranteed cross-layer scheduling simulator"};
  app.require_subcommand(1);

  std::string model, out, grid;
  std::optional<std::string> algo, trace;
  std::optional<Slot> horizon;
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
  double gamma = 0.5;
  unsigned threads = 0;

  auto* run = app.add_subcommand("run", "simulate one model");
  run->add_option("--model", model, "model file")->required()->check(CLI::ExistingFile);
  run->add_option("--algo", algo, "alg | alg-arb | alg-delayed | alg-general | bp (default: the model's variant)")
      ->check(CLI::IsMember({"alg", "alg-arb", "alg-delayed", "alg-general", "bp"}));
  run->add_option("--horizon", horizon, "slots");
  run->add_option("--seed", seed, "RNG seed");
  run->add_option("--out", out, "report CSV")->required();
  run->add_option("--trace", trace, "per-slot queue trace CSV (virtual queues go to <stem>.virtual.csv)");

  auto* sweep = app.add_subcommand("sweep", "run a parameter grid");
  sweep->add_option("--grid", grid, "grid file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out, "output directory")->required();
  sweep->add_option("--threads", threads, "worker threads (0 = all cores)");

  auto* oracle = app.add_subcommand("oracle", "capacity LP and bound constants");
  oracle->add_option("--model", model, "model file")->required()->check(CLI::ExistingFile);
  oracle->add_option("--epsilon", epsilon, "interior margin");
  oracle->add_option("--gamma", gamma, "suboptimality factor for the gamma-scaled constants");

  auto* val = app.add_subcommand("validate", "check a model and the sufficient conditions");
  val->add_option("--model", model, "model file")->required()->check(CLI::ExistingFile);
  val->add_option("--epsilon", epsilon, "interior margin for the condition check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(model, algo, horizon, seed, out, trace);
    if (*sweep) return cmd_sweep(grid, out, threads);
    if (*oracle) return cmd_oracle(model, epsilon, gamma);
    if (*val) return cmd_validate(model, epsilon);
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const ContractViolation& e) {
    std::cerr << "contract violated: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
