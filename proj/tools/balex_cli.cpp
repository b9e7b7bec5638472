// Command-line front end: solve, estimate, oracle and reduce subcommands
// with reproducible seeding and machine-readable JSON run records.
//
// Exit codes: 0 ok, 2 user/input error, 3 resource-limit abort. The run
// record is the only document on stdout; diagnostics go to stderr.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "balex/hypergraph.hpp"
#include "balex/instance.hpp"
#include "balex/objective.hpp"
#include "balex/oracle.hpp"
#include "balex/reduction.hpp"
#include "balex/run_record.hpp"
#include "balex/solvers.hpp"

namespace {

struct CommonOpts {
  double epsilon = 0.1;
  double delta = 0.1;
  std::uint64_t seed = 0;
  int threads = 1;
  std::int64_t samples_cap = 0;  // 0 = uncapped
  std::string out;
  std::string instance_path;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_estimator) {
  if (with_estimator) {
    cmd->add_option("--epsilon", o.epsilon, "estimator accuracy in (0,1)");
    cmd->add_option("--delta", o.delta, "estimator failure probability in (0,1/2]");
    cmd->add_option("--samples-cap", o.samples_cap, "cap on samples per estimate (0 = uncapped)");
  }
  cmd->add_option("--seed", o.seed, "master RNG seed");
  cmd->add_option("--threads", o.threads, "estimator worker threads");
  cmd->add_option("--out", o.out, "write the run record here instead of stdout");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw balex::ValidationError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw balex::ValidationError("cannot write " + path);
  out << text;
}

std::optional<std::int64_t> cap_of(const CommonOpts& o) {
  if (o.samples_cap > 0) return o.samples_cap;
  return std::nullopt;
}

void emit(const CommonOpts& o, balex::RunRecord record,
          std::chrono::steady_clock::time_point started) {
  record.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - started)
                            .count();
  const std::string text = balex::to_json(record).dump(2) + "\n";
  if (o.out.empty())
    std::cout << text;
  else
    write_file(o.out, text);
}

balex::ObjectiveId parse_objective_or_fail(const std::string& s) {
  auto obj = balex::ObjectiveId::parse(s);
  if (!obj) throw balex::ValidationError("cannot parse objective \"" + s + "\"");
  return *obj;
}

int run_solve(const CommonOpts& o, const std::string& algo, const std::string& objective) {
  const auto started = std::chrono::steady_clock::now();
  const std::string text = read_file(o.instance_path);
  const balex::BalanceInstance inst = balex::load_instance(text);

  balex::SolverConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.delta = o.delta;
  cfg.master_seed = o.seed;
  cfg.sample_cap = cap_of(o);
  cfg.threads = o.threads;

  balex::SolverReport report;
  if (algo == "greedy") {
    const balex::ObjectiveId f = objective.empty()
                                     ? balex::ObjectiveId::phi_geq(inst.nu - 1)
                                     : parse_objective_or_fail(objective);
    report = balex::greedy(inst, f, cfg);
  } else if (algo == "tuple") {
    std::int32_t level = 1;
    if (!objective.empty()) {
      const balex::ObjectiveId f = parse_objective_or_fail(objective);
      if (f.kind != balex::ObjKind::phi_geq)
        throw balex::ValidationError("tuple solver expects a phi_geq objective");
      level = f.level;
    }
    report = balex::greedy_tuple(inst, level, cfg);
  } else if (algo == "iter") {
    report = balex::greedy_iter(inst, cfg);
  } else if (algo == "het") {
    report = balex::solve_heterogeneous(inst, cfg);
  } else if (algo == "cor") {
    report = balex::solve_correlated(inst, cfg);
  } else {
    throw balex::ValidationError("unknown --algo " + algo);
  }

  balex::RunRecord record;
  record.command = "solve";
  record.instance_digest = balex::digest_json_text(text);
  record.epsilon = o.epsilon;
  record.delta = o.delta;
  record.seed = o.seed;
  record.samples_cap = cap_of(o);
  record.result = balex::to_json(report);
  emit(o, std::move(record), started);
  return 0;
}

int run_estimate(const CommonOpts& o, const std::string& objective, const std::string& pairs) {
  const auto started = std::chrono::steady_clock::now();
  const std::string text = read_file(o.instance_path);
  const balex::BalanceInstance inst = balex::load_instance(text);
  const balex::ObjectiveId obj =
      objective.empty() ? balex::ObjectiveId::phi() : parse_objective_or_fail(objective);

  balex::SolutionProfile s;
  if (!pairs.empty()) {
    try {
      s = balex::solution_from_json(balex::json::parse(pairs));
    } catch (const balex::json::exception& e) {
      throw balex::ValidationError(std::string("cannot parse --pairs: ") + e.what());
    }
  }

  balex::EstimatorConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.delta = o.delta;
  cfg.master_seed = o.seed;
  cfg.sample_cap = cap_of(o);
  cfg.threads = o.threads;
  const balex::Estimate est = balex::estimate(inst, obj, s, cfg);

  balex::RunRecord record;
  record.command = "estimate";
  record.instance_digest = balex::digest_json_text(text);
  record.epsilon = o.epsilon;
  record.delta = o.delta;
  record.seed = o.seed;
  record.samples_cap = cap_of(o);
  record.result = balex::json{{"objective", obj.to_string()},
                              {"pairs", balex::to_json(s)},
                              {"value", est.value},
                              {"samples_requested", est.samples_requested},
                              {"samples_used", est.samples_used},
                              {"capped", est.samples_used < est.samples_requested}};
  emit(o, std::move(record), started);
  return 0;
}

int run_oracle(const CommonOpts& o, const std::string& objective, const std::string& table) {
  const auto started = std::chrono::steady_clock::now();
  const std::string text = read_file(o.instance_path);
  const balex::BalanceInstance inst = balex::load_instance(text);
  const balex::ObjectiveId obj =
      objective.empty() ? balex::ObjectiveId::phi() : parse_objective_or_fail(objective);

  balex::RunRecord record;
  record.command = "oracle";
  record.instance_digest = balex::digest_json_text(text);
  record.seed = o.seed;

  if (table.empty()) {
    const balex::OracleResult best = balex::brute_force_solve(inst, obj);
    record.result = balex::json{{"objective", obj.to_string()},
                                {"optimum", best.value},
                                {"optimal_pairs", balex::to_json(best.best)},
                                {"entries", best.solutions_evaluated},
                                {"table", nullptr}};
  } else {
    const auto entries = balex::enumerate_values(inst, obj, inst.k);
    std::ostringstream csv;
    csv << "pairs,value\n";
    double optimum = 0.0;
    balex::SolutionProfile best;
    bool first = true;
    for (const auto& [s, value] : entries) {
      std::string key;
      for (const balex::Pair& p : s.pairs) {
        if (!key.empty()) key += ';';
        key += std::to_string(p.node) + ":" + std::to_string(p.campaign);
      }
      csv << key << ',' << value << '\n';
      if (first || value > optimum + balex::kOracleTolerance) {
        optimum = value;
        best = s;
        first = false;
      }
    }
    write_file(table, csv.str());
    record.result = balex::json{{"objective", obj.to_string()},
                                {"optimum", optimum},
                                {"optimal_pairs", balex::to_json(best)},
                                {"entries", entries.size()},
                                {"table", table}};
  }
  emit(o, std::move(record), started);
  return 0;
}

int run_reduce(const CommonOpts& o, std::int32_t mu, std::int32_t nu, std::int32_t k,
               const std::string& out_instance) {
  const auto started = std::chrono::steady_clock::now();
  const std::string text = read_file(o.instance_path);
  const balex::Hypergraph h = balex::parse_hypergraph(text);
  auto [inst, gadget] = balex::transform_tau(h, k, mu, nu);

  write_file(out_instance, balex::to_json(inst).dump(2) + "\n");
  const std::string sidecar = out_instance + ".gadget.json";
  write_file(sidecar, balex::to_json(gadget).dump(2) + "\n");

  balex::RunRecord record;
  record.command = "reduce";
  record.instance_digest = balex::digest_text(balex::format_hypergraph(h));
  record.seed = o.seed;
  record.result = balex::json{{"nodes", inst.n},
                              {"arcs", inst.arcs.size()},
                              {"lambda", gadget.lambda},
                              {"l", gadget.l},
                              {"instance", out_instance},
                              {"gadget", sidecar}};
  CommonOpts record_out = o;
  record_out.out.clear();  // --out names the instance file; the record goes to stdout
  emit(record_out, std::move(record), started);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"balanced information exposure under the multi-campaign cascade model"};
  app.require_subcommand(1);

  CommonOpts solve_opts, estimate_opts, oracle_opts, reduce_opts;
  std::string solve_algo, solve_objective;
  std::string estimate_objective, estimate_pairs;
  std::string oracle_objective, oracle_table;
  std::int32_t reduce_mu = 0, reduce_nu = 0, reduce_k = 0;

  CLI::App* solve = app.add_subcommand("solve", "run an approximation algorithm");
  solve->add_option("--algo", solve_algo, "greedy|tuple|iter|het|cor")->required();
  solve->add_option("--objective", solve_objective,
                    "objective for greedy (phi_geq:L or psi) or tuple level (phi_geq:L)");
  add_common(solve, solve_opts, true);
  solve->add_option("instance", solve_opts.instance_path, "instance JSON file")->required();

  CLI::App* est = app.add_subcommand("estimate", "Monte-Carlo objective estimate");
  est->add_option("--objective", estimate_objective,
                  "phi | phi_geq:L | phi_level:L | phi_band:L:B | psi");
  est->add_option("--pairs", estimate_pairs, "solution pairs as JSON [[node,campaign],...]");
  add_common(est, estimate_opts, true);
  est->add_option("instance", estimate_opts.instance_path, "instance JSON file")->required();

  CLI::App* oracle = app.add_subcommand("oracle", "exhaustive exact optimum");
  oracle->add_option("--objective", oracle_objective, "objective (default phi)");
  oracle->add_option("--table", oracle_table, "write the full value table as CSV here");
  add_common(oracle, oracle_opts, false);
  oracle->add_option("instance", oracle_opts.instance_path, "instance JSON file")->required();

  CLI::App* reduce = app.add_subcommand("reduce", "hypergraph to balance-instance transform");
  reduce->add_option("--mu", reduce_mu, "number of campaigns")->required();
  reduce->add_option("--nu", reduce_nu, "exposure threshold")->required();
  reduce->add_option("--k", reduce_k, "budget")->required();
  add_common(reduce, reduce_opts, false);
  reduce->add_option("instance", reduce_opts.instance_path, "hypergraph text file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed()) return run_solve(solve_opts, solve_algo, solve_objective);
    if (est->parsed()) return run_estimate(estimate_opts, estimate_objective, estimate_pairs);
    if (oracle->parsed()) return run_oracle(oracle_opts, oracle_objective, oracle_table);
    if (reduce->parsed()) {
      if (reduce_opts.out.empty())
        throw balex::ValidationError("reduce requires --out for the generated instance");
      return run_reduce(reduce_opts, reduce_mu, reduce_nu, reduce_k, reduce_opts.out);
    }
  } catch (const balex::LimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const balex::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
