#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "icx/config.hpp"
#include "icx/errors.hpp"
#include "icx/sim.hpp"

namespace {

using namespace icx;

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<uint64_t> seed_override;
  int verbosity = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_config = true) {
  auto* c = cmd->add_option("-c,--config", opts.config_path, "scenario config file");
  if (needs_config) c->required();
  cmd->add_option("-o,--out", opts.out_path, "output file (default stdout)");
  cmd->add_option("--format", opts.format, "csv | structured")
      ->check(CLI::IsMember({"csv", "structured"}));
  cmd->add_option("--seed", opts.seed_override, "master seed override");
  cmd->add_flag("-v,--verbose", opts.verbosity, "verbosity");
}

/// All report text is built in memory first so a run emits either a complete
/// file or nothing.
int emit(const CommonOpts& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(opts.out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open output file: " << opts.out_path << "\n";
    return 2;
  }
  out << text;
  return 0;
}

LoadedConfig load(const CommonOpts& opts) {
  LoadedConfig cfg = load_config(opts.config_path);
  if (opts.seed_override) cfg.seed = *opts.seed_override;
  return cfg;
}

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(12);
  out << x;
  return out.str();
}

int cmd_partition(const CommonOpts& opts) {
  const LoadedConfig cfg = load(opts);
  const Scenario& sc = cfg.scenario;
  const ExplorationPartition part = build_partition(sc.dist_a, sc.mu_b());
  const KBounds bounds = k_bounds(sc.dist_a, sc.mu_b());
  const VerifyReport verify = verify_partition(part, sc.dist_a, 1e-8);

  std::ostringstream out;
  if (opts.format == "csv") {
    out << "# schema=icx.partition.v1\n";
    out << "cell,lo,hi,mass,cond_mean,residual\n";
    const auto row = [&](int k, const IntervalSet& s) {
      const double mass = sc.dist_a.prob(s);
      const double mean = mass > 0 ? sc.dist_a.cond_expect(s) : 0.0;
      // residual: indifference error E(V_a | D_0 u D_k) - mu_b (0 for D_0)
      double residual = 0.0;
      if (k > 0) residual = sc.dist_a.cond_expect(part.d0.unite(s)) - part.mu_b;
      const Interval span{s.parts().front().lo, s.parts().back().hi};
      out << k << "," << fmt(span.lo) << "," << fmt(span.hi) << ","
          << fmt(mass) << "," << fmt(mean) << "," << fmt(residual) << "\n";
    };
    row(0, part.d0);
    for (int k = 1; k <= part.k_count; ++k) row(k, part.cell(k));
    out << "# K=" << part.k_count << " bounds=[" << bounds.lower << ","
        << bounds.upper << "] verify=" << (verify.pass ? "pass" : "fail")
        << "\n";
  } else {
    out << "K=" << part.k_count << " bracket=[" << bounds.lower << ","
        << bounds.upper << "]\n"
        << verify.to_string();
  }
  return emit(opts, out.str());
}

int cmd_simulate(const CommonOpts& opts) {
  const LoadedConfig cfg = load(opts);
  const RunContext ctx(cfg.scenario);
  std::vector<RunRow> rows;
  const Metrics m = run_monte_carlo(ctx, cfg.replications, cfg.seed, &rows);

  std::ostringstream out;
  if (opts.format == "csv") {
    out << "# schema=icx.simulate.v1\n";
    out << "seed,va,vb,avg_reward,fraction_optimal,exploration_end,rho,shadow,z,k\n";
    for (const RunRow& r : rows) {
      out << r.seed << "," << fmt(r.va) << "," << fmt(r.vb) << ","
          << fmt(r.avg_reward) << "," << fmt(r.fraction_optimal) << ",";
      if (r.exploration_end) out << *r.exploration_end;
      out << "," << r.rho << "," << r.shadow << "," << r.z << "," << r.k << "\n";
    }
    out << "# avg_reward=" << fmt(m.avg_reward)
        << " fraction_optimal=" << fmt(m.fraction_optimal) << "\n";
  } else {
    out << "replications=" << m.replications << "\n"
        << "avg_reward=" << fmt(m.avg_reward) << " +/- " << fmt(m.avg_reward_se)
        << "\n"
        << "fraction_optimal=" << fmt(m.fraction_optimal) << " +/- "
        << fmt(m.fraction_optimal_se) << "\n";
    if (m.optimality_ratio)
      out << "optimality_ratio=" << fmt(*m.optimality_ratio) << "\n";
    out << "regret=" << fmt(m.regret) << "\n"
        << "explored_runs=" << m.explored_runs << "/" << m.replications << "\n";
    if (m.explored_runs > 0)
      out << "exploration_end mean=" << fmt(m.exploration_end_mean)
          << " max=" << m.exploration_end_max << "\n";
  }
  return emit(opts, out.str());
}

int cmd_audit(const CommonOpts& opts) {
  const LoadedConfig cfg = load(opts);
  if (cfg.audit.agents.empty())
    throw ConfigError("audit requires audit.agents in the config");
  const RunContext ctx(cfg.scenario);
  const McParams mc{cfg.audit.n_outer, cfg.audit.min_matched};
  const auto audits = audit_agents(ctx, cfg.audit.agents, mc, cfg.seed);

  std::ostringstream out;
  if (opts.format == "csv") {
    out << "# schema=icx.audit.v1\n";
    out << "agent,agent_class,info_set,matched,ev_a,ev_b,gain,stderr,supported\n";
    for (const AuditResult& a : audits)
      for (const InfoSetReport& rep : a.infosets)
        out << a.agent << "," << rep.agent_class << ",\""
            << rep.sig.to_string() << "\"," << rep.matched << ","
            << fmt(rep.ev_a) << "," << fmt(rep.ev_b) << "," << fmt(rep.gain)
            << "," << fmt(rep.gain_se) << ","
            << (rep.supported ? "yes" : "no") << "\n";
  }
  for (const AuditResult& a : audits) {
    std::ostringstream line;
    line << "# agent " << a.agent << ": "
         << (a.incentive_compatible ? "IC" : "NOT IC")
         << " max_gain=" << fmt(a.max_gain) << " (3se="
         << fmt(3.0 * a.max_gain_se) << ") over " << a.runs << " runs\n";
    out << line.str();
  }
  return emit(opts, out.str());
}

int cmd_check_bounds(const CommonOpts& opts) {
  const LoadedConfig cfg = load(opts);
  const RunContext ctx(cfg.scenario);
  bool all_pass = true;
  std::ostringstream out;
  out << "# schema=icx.bounds.v1\n";
  out << "replication,check,applicable,measured,bound,pass,note\n";
  for (long i = 0; i < cfg.replications; ++i) {
    const uint64_t seed = child_seed(cfg.seed, static_cast<uint64_t>(i));
    const RunTrace tr = ctx.run_once(seed);
    const BoundReport rep = bound_checks(tr, ctx);
    for (const BoundCheck& c : rep.checks)
      out << i << "," << c.name << "," << (c.applicable ? "yes" : "no") << ","
          << fmt(c.measured) << "," << fmt(c.bound) << ","
          << (c.pass ? "yes" : "no") << "," << c.note << "\n";
    if (!rep.pass) all_pass = false;
  }
  out << "# result=" << (all_pass ? "pass" : "fail") << "\n";
  const int rc = emit(opts, out.str());
  if (rc != 0) return rc;
  return all_pass ? 0 : 1;
}

int cmd_sweep(const CommonOpts& opts) {
  const LoadedConfig cfg = load(opts);
  const SweepSpec& sw = cfg.has_sweep ? cfg.sweep : SweepSpec{};
  std::ostringstream out;
  out << "# schema=icx.sweep.v1\n";
  out << "n,alpha,beta,feasible,high_degree_count,fraction_optimal,"
         "avg_reward,explored_runs\n";
  long cell = 0;
  for (int n : sw.n_grid)
    for (double alpha : sw.alpha_grid)
      for (double beta : sw.beta_grid) {
        Scenario sc = cfg.scenario;
        sc.alpha = alpha;
        sc.beta = beta;
        GraphParams params{n, alpha, beta, sw.avg_degree};
        RandomStream stream(child_seed(cfg.seed, 0xBEEF00 + cell));
        sc.graph = generate(graph_kind_from_string(sw.graph_kind), params, stream);
        sc.arrival.kind = ArrivalOrderKind::SeededShuffle;
        const RegimeReport regime = check_regime(sc.graph, {alpha, beta});
        const RunContext ctx(sc);
        const Metrics m = run_monte_carlo(ctx, sw.replications,
                                          child_seed(cfg.seed, 0xAB0000 + cell));
        out << n << "," << fmt(alpha) << "," << fmt(beta) << ","
            << (regime.feasible ? "yes" : "no") << ","
            << regime.high_degree_count << "," << fmt(m.fraction_optimal)
            << "," << fmt(m.avg_reward) << "," << m.explored_runs << "\n";
        ++cell;
      }
  return emit(opts, out.str());
}

int cmd_demo_failures(const CommonOpts& opts) {
  uint64_t seed = 20240901;
  if (opts.seed_override) seed = *opts.seed_override;
  const DemoReport rep = failure_demos(seed);
  const int rc = emit(opts, rep.to_string());
  if (rc != 0) return rc;
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Simulator for incentive-compatible explore-and-exploit recommendation "
      "mechanisms over social visibility graphs"};
  app.require_subcommand(1);

  CommonOpts opts;
  add_common(app.add_subcommand("partition",
                                "print the exploration partition cell table"),
             opts);
  add_common(app.add_subcommand("simulate", "run seeded replications"), opts);
  add_common(app.add_subcommand("audit", "measure deviation gains per info set"),
             opts);
  add_common(app.add_subcommand("sweep", "iterate N and regime exponents"),
             opts);
  add_common(app.add_subcommand("check-bounds",
                                "verify phase-length bounds on traces"),
             opts);
  add_common(app.add_subcommand(
                 "demo-failures",
                 "reproduce the canned incentive/efficiency pathologies"),
             opts, /*needs_config=*/false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("partition")) return cmd_partition(opts);
    if (app.got_subcommand("simulate")) return cmd_simulate(opts);
    if (app.got_subcommand("audit")) return cmd_audit(opts);
    if (app.got_subcommand("sweep")) return cmd_sweep(opts);
    if (app.got_subcommand("check-bounds")) return cmd_check_bounds(opts);
    if (app.got_subcommand("demo-failures")) return cmd_demo_failures(opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
