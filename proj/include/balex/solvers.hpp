#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "objective.hpp"
#include "oracle.hpp"

// The greedy approximation algorithms: standard hill climbing, the
// tuple-picking and iterative variants for the heterogeneous setting,
// the correlated solver built on the surrogate objective, and the
// instance transform that shifts every objective value up by one.
//
// Estimated values are memoized per evaluated set; each set's estimator
// substream is derived by hashing (run seed, objective, base profile,
// set), so traces are reproducible and independent of evaluation order
// and worker count. Ties in the argmax go to the lexicographically
// smallest tuple of (node, campaign) pairs.

namespace balex {

struct SolverConfig {
  double epsilon = 0.1;
  double delta = 0.1;
  std::uint64_t master_seed = 0;
  std::optional<std::int64_t> sample_cap;
  int threads = 1;
  std::int64_t tuple_limit = 10'000'000;  // candidate tuples per iteration
};

struct IterationRecord {
  std::int64_t candidates = 0;  // candidate sets actually estimated
  PairList chosen;
  double value = 0.0;  // estimated objective of the extended set
  double gain = 0.0;
};

struct SolverReport {
  std::string algorithm;
  SolutionProfile chosen;
  double estimated_objective = 0.0;
  std::vector<IterationRecord> trace;
  std::vector<std::string> warnings;
  SolverConfig config;
};

inline json to_json(const SolverReport& r) {
  json trace = json::array();
  for (const auto& it : r.trace) {
    json chosen = json::array();
    for (const Pair& p : it.chosen) chosen.push_back({p.node, p.campaign});
    trace.push_back({{"candidates", it.candidates},
                     {"chosen", chosen},
                     {"value", it.value},
                     {"gain", it.gain}});
  }
  json cfg{{"epsilon", r.config.epsilon},
           {"delta", r.config.delta},
           {"seed", r.config.master_seed},
           {"samples_cap",
            r.config.sample_cap ? json(*r.config.sample_cap) : json(nullptr)}};
  return json{{"algorithm", r.algorithm},
              {"pairs", to_json(r.chosen)},
              {"estimated_objective", r.estimated_objective},
              {"trace", trace},
              {"warnings", r.warnings},
              {"config", cfg}};
}

namespace detail {

inline std::uint64_t hash_pairs(const PairList& pairs) {
  std::uint64_t h = rng::mix64(pairs.size() + 1);
  for (const Pair& p : pairs)
    h = rng::combine(h, (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.node)) << 32) |
                            static_cast<std::uint32_t>(p.campaign));
  return h;
}

inline std::uint64_t hash_seed_profile(const SeedProfile& base) {
  std::uint64_t h = rng::mix64(base.size() + 0x51ed);
  for (std::size_t i = 0; i < base.size(); ++i) {
    h = rng::combine(h, 0xfeed0000ULL + i);
    for (std::int32_t v : base[i]) h = rng::combine(h, static_cast<std::uint32_t>(v));
  }
  return h;
}

inline double binomial(std::int64_t n, std::int64_t r) {
  if (r < 0 || r > n) return 0.0;
  r = std::min(r, n - r);
  double out = 1.0;
  for (std::int64_t i = 1; i <= r; ++i) out = out * static_cast<double>(n - r + i) / i;
  return out;
}

// Memoized estimates for one greedy run: a fixed objective and base
// profile, values keyed by the canonical evaluated set.
class MemoEstimator {
 public:
  MemoEstimator(const BalanceInstance& inst, ObjectiveId obj, SeedProfile base,
                double eps_inner, double delta_inner, const SolverConfig& cfg)
      : inst_(inst), obj_(obj), base_(std::move(base)) {
    ecfg_.epsilon = eps_inner;
    ecfg_.delta = delta_inner;
    ecfg_.sample_cap = cfg.sample_cap;
    ecfg_.threads = cfg.threads;
    ctx_ = rng::combine(rng::combine(cfg.master_seed, obj_.encode()),
                        hash_seed_profile(base_));
  }

  double value_of(const PairList& canonical_set) {
    auto it = memo_.find(canonical_set);
    if (it != memo_.end()) return it->second;
    EstimatorConfig ecfg = ecfg_;
    ecfg.master_seed = rng::combine(ctx_, hash_pairs(canonical_set));
    const double value =
        estimate_with_base(inst_, obj_, base_, SolutionProfile(PairList(canonical_set)), ecfg)
            .value;
    memo_.emplace(canonical_set, value);
    return value;
  }

 private:
  const BalanceInstance& inst_;
  ObjectiveId obj_;
  SeedProfile base_;
  EstimatorConfig ecfg_;
  std::uint64_t ctx_;
  std::map<PairList, double> memo_;
};

struct GreedyRun {
  SolutionProfile chosen;
  std::vector<IterationRecord> trace;
  double final_value = 0.0;
};

// Shared loop of Greedy (tuple_size 1) and GreedyTuple: repeatedly add
// the tuple maximizing the estimated objective of the extended set.
// Candidates already contained in the current set are skipped; the loop
// additionally stops after ceil(budget/tuple_size) iterations so that
// all-zero objectives terminate.
inline GreedyRun run_greedy(const BalanceInstance& inst, const ObjectiveId& obj,
                            const SeedProfile& base, const PairList& domain,
                            std::int64_t budget, std::int64_t tuple_size, double eps_inner,
                            double delta_inner, const SolverConfig& cfg) {
  const double tuples = binomial(static_cast<std::int64_t>(domain.size()), tuple_size);
  if (tuples > static_cast<double>(cfg.tuple_limit))
    throw LimitError("tuple enumeration limit exceeded: " + std::to_string(tuples) +
                     " candidate tuples per iteration");

  GreedyRun run;
  MemoEstimator values(inst, obj, base, eps_inner, delta_inner, cfg);
  const std::int64_t max_iterations = (budget + tuple_size - 1) / tuple_size;

  while (static_cast<std::int64_t>(run.chosen.size()) + tuple_size <= budget &&
         static_cast<std::int64_t>(run.trace.size()) < max_iterations) {
    const double current = values.value_of(run.chosen.pairs);

    IterationRecord rec;
    bool have_best = false;
    PairList best_tuple;
    double best_value = 0.0;

    std::vector<std::int32_t> idx(tuple_size);
    for (std::int64_t i = 0; i < tuple_size; ++i) idx[i] = static_cast<std::int32_t>(i);
    const std::int64_t d = static_cast<std::int64_t>(domain.size());
    if (d < tuple_size) break;
    while (true) {
      PairList tuple;
      tuple.reserve(tuple_size);
      for (std::int32_t i : idx) tuple.push_back(domain[i]);
      bool contained = true;
      for (const Pair& p : tuple)
        if (!run.chosen.contains(p)) {
          contained = false;
          break;
        }
      if (!contained) {
        PairList extended = run.chosen.pairs;
        extended.insert(extended.end(), tuple.begin(), tuple.end());
        canonicalize(extended);
        const double value = values.value_of(extended);
        ++rec.candidates;
        if (!have_best || value > best_value ||
            (value == best_value && tuple < best_tuple)) {
          have_best = true;
          best_value = value;
          best_tuple = std::move(tuple);
        }
      }
      std::int64_t pos = tuple_size - 1;
      while (pos >= 0 && idx[pos] == d - tuple_size + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (std::int64_t i = pos + 1; i < tuple_size; ++i) idx[i] = idx[i - 1] + 1;
    }

    if (!have_best) break;
    PairList extended = run.chosen.pairs;
    extended.insert(extended.end(), best_tuple.begin(), best_tuple.end());
    canonicalize(extended);
    run.chosen = SolutionProfile(std::move(extended));
    rec.chosen = std::move(best_tuple);
    rec.value = best_value;
    rec.gain = best_value - current;
    run.trace.push_back(std::move(rec));
  }

  run.final_value = values.value_of(run.chosen.pairs);
  return run;
}

inline PairList full_domain(const BalanceInstance& inst) {
  PairList domain;
  for (std::int32_t v = 0; v < inst.n; ++v)
    for (std::int32_t i = 1; i <= inst.mu; ++i) domain.push_back({v, i});
  return domain;
}

inline PairList fictitious_domain(const BalanceInstance& inst) {
  PairList domain;
  for (std::int32_t v = 0; v < inst.n; ++v) domain.push_back({v, 0});
  return domain;
}

inline void check_solver_params(double epsilon, double delta) {
  std::vector<std::string> out;
  if (!(epsilon > 0.0 && epsilon < 1.0)) out.push_back("epsilon must be in (0,1)");
  if (!(delta > 0.0 && delta <= 0.5)) out.push_back("delta must be in (0,1/2]");
  if (!out.empty()) throw ValidationError(std::move(out));
}

}  // namespace detail

// Standard greedy hill climbing for the monotone submodular objectives.
inline SolverReport greedy(const BalanceInstance& inst, const ObjectiveId& f,
                           const SolverConfig& cfg) {
  detail::check_solver_params(cfg.epsilon, cfg.delta);
  validate(inst);
  validate(f, inst);
  const bool is_psi = f.kind == ObjKind::psi;
  if (!is_psi && !(f.kind == ObjKind::phi_geq && f.level == inst.nu - 1))
    throw ValidationError("greedy supports phi_geq:" + std::to_string(inst.nu - 1) +
                          " and psi only");

  const std::int64_t k = inst.k;
  const std::int64_t vhat = static_cast<std::int64_t>(inst.mu) * inst.n;
  const double delta_inner = cfg.delta / (static_cast<double>(k) * vhat);
  const double eps_inner = cfg.epsilon / (std::exp(1.0) * static_cast<double>(k));
  const PairList domain =
      is_psi ? detail::fictitious_domain(inst) : detail::full_domain(inst);

  auto run = detail::run_greedy(inst, f, inst.seeds, domain, k, 1, eps_inner, delta_inner, cfg);

  SolverReport report;
  report.algorithm = "greedy";
  report.chosen = std::move(run.chosen);
  report.estimated_objective = run.final_value;
  report.trace = std::move(run.trace);
  report.config = cfg;
  return report;
}

// Greedily add (nu-l)-tuples maximizing the estimated level-l objective.
inline SolverReport greedy_tuple(const BalanceInstance& inst, std::int32_t l,
                                 const SolverConfig& cfg) {
  detail::check_solver_params(cfg.epsilon, cfg.delta);
  validate(inst);
  if (l < 1 || l > inst.nu - 1) throw ValidationError("tuple level must be in [1, nu-1]");

  const std::int64_t k = inst.k;
  const std::int64_t tuple_size = inst.nu - l;
  const std::int64_t vhat = static_cast<std::int64_t>(inst.mu) * inst.n;
  const double calls = static_cast<double>((k + tuple_size - 1) / tuple_size) *
                       detail::binomial(vhat, tuple_size);
  const double delta_inner = cfg.delta / calls;
  const double eps_inner =
      cfg.epsilon / (2.0 * std::exp(1.0) * detail::binomial(k, tuple_size));

  SolverReport report;
  report.algorithm = "tuple";
  report.config = cfg;
  if (static_cast<double>(k) < 2.0 * inst.nu / cfg.epsilon)
    report.warnings.push_back("budget below 2*nu/epsilon; the approximation guarantee is not in force");

  auto run = detail::run_greedy(inst, ObjectiveId::phi_geq(l), inst.seeds,
                                detail::full_domain(inst), k, tuple_size, eps_inner,
                                delta_inner, cfg);
  report.chosen = std::move(run.chosen);
  report.estimated_objective = run.final_value;
  report.trace = std::move(run.trace);
  return report;
}

// For l = 1..nu-1, greedily lift nodes already reached l times to l+1
// campaigns, accumulating the picked pairs into the base profile.
inline SolverReport greedy_iter(const BalanceInstance& inst, const SolverConfig& cfg) {
  detail::check_solver_params(cfg.epsilon, cfg.delta);
  validate(inst);
  if (inst.k < inst.nu - 1) throw ValidationError("budget below nu-1");

  const double eps_round = cfg.epsilon / 2.0;
  const double delta_round = cfg.delta / inst.nu;
  const std::int64_t budget = inst.k / (inst.nu - 1);
  const std::int64_t vhat = static_cast<std::int64_t>(inst.mu) * inst.n;

  SolverReport report;
  report.algorithm = "iter";
  report.config = cfg;
  if (static_cast<double>(inst.k) < 2.0 * (inst.nu - 1) / cfg.epsilon)
    report.warnings.push_back("budget below 2*(nu-1)/epsilon; the approximation guarantee is not in force");

  SeedProfile accumulated = inst.seeds;
  PairList total;
  const PairList domain = detail::full_domain(inst);
  for (std::int32_t l = 1; l <= inst.nu - 1; ++l) {
    const double delta_inner = delta_round / (static_cast<double>(budget) * vhat);
    const double eps_inner = eps_round / (std::exp(1.0) * static_cast<double>(budget));
    auto round = detail::run_greedy(inst, ObjectiveId::phi_band(l, l + 1), accumulated,
                                    domain, budget, 1, eps_inner, delta_inner, cfg);
    for (const Pair& p : round.chosen.pairs) {
      accumulated[p.campaign - 1].push_back(p.node);
      total.push_back(p);
    }
    for (auto& set : accumulated) canonicalize(set);
    for (auto& rec : round.trace) report.trace.push_back(std::move(rec));
  }
  canonicalize(total);
  report.chosen = SolutionProfile(std::move(total));

  detail::MemoEstimator final_values(inst, ObjectiveId::phi(), inst.seeds, cfg.epsilon / 2.0,
                                     cfg.delta / 2.0, cfg);
  report.estimated_objective = final_values.value_of(report.chosen.pairs);
  return report;
}

namespace detail {

// argmax over candidate solutions by estimated overall objective;
// ties keep the earliest listed candidate
inline std::size_t pick_best(const BalanceInstance& inst, const SolverConfig& cfg,
                             const std::vector<const SolutionProfile*>& candidates,
                             std::vector<double>& values_out) {
  MemoEstimator values(inst, ObjectiveId::phi(), inst.seeds, cfg.epsilon / 2.0,
                       cfg.delta / 2.0, cfg);
  std::size_t best = 0;
  values_out.clear();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    values_out.push_back(values.value_of(candidates[i]->pairs));
    if (values_out[i] > values_out[best]) best = i;
  }
  return best;
}

}  // namespace detail

// Run both heterogeneous algorithms and keep the better of their outputs
// and the empty solution.
inline SolverReport solve_heterogeneous(const BalanceInstance& inst, const SolverConfig& cfg) {
  detail::check_solver_params(cfg.epsilon, cfg.delta);
  validate(inst);

  SolverConfig half = cfg;
  half.delta = cfg.delta / 2.0;
  SolverReport tuple_report = greedy_tuple(inst, 1, half);
  SolverReport iter_report = greedy_iter(inst, half);

  const SolutionProfile empty;
  std::vector<const SolutionProfile*> candidates{&empty, &tuple_report.chosen,
                                                 &iter_report.chosen};
  std::vector<double> values;
  const std::size_t best = detail::pick_best(inst, cfg, candidates, values);

  SolverReport report;
  report.algorithm = "het";
  report.config = cfg;
  report.chosen = *candidates[best];
  report.estimated_objective = values[best];
  if (best == 1) report.trace = std::move(tuple_report.trace);
  if (best == 2) report.trace = std::move(iter_report.trace);
  for (auto& w : tuple_report.warnings) report.warnings.push_back("tuple: " + w);
  for (auto& w : iter_report.warnings) report.warnings.push_back("iter: " + w);
  return report;
}

// expansion of a fictitious-campaign set to the first nu campaigns
inline SolutionProfile expand_fictitious(const SolutionProfile& t, std::int32_t nu) {
  PairList pairs;
  for (const Pair& p : t.pairs)
    for (std::int32_t j = 1; j <= nu; ++j) pairs.push_back({p.node, j});
  return SolutionProfile(std::move(pairs));
}

// Greedy on the correlated surrogate with budget floor(k/nu), expanded to
// the first nu campaigns; keep the better of that and the empty solution.
inline SolverReport solve_correlated(const BalanceInstance& inst, const SolverConfig& cfg) {
  detail::check_solver_params(cfg.epsilon, cfg.delta);
  validate(inst);
  if (inst.setting != Setting::correlated)
    throw ValidationError("correlated solver requires a correlated instance");

  const std::int64_t budget = inst.k / inst.nu;
  const std::int64_t vhat = static_cast<std::int64_t>(inst.mu) * inst.n;
  const double delta_inner = cfg.delta / (static_cast<double>(budget) * vhat);
  const double eps_inner = (cfg.epsilon / 2.0) / (std::exp(1.0) * static_cast<double>(budget));

  auto run = detail::run_greedy(inst, ObjectiveId::psi(), inst.seeds,
                                detail::fictitious_domain(inst), budget, 1, eps_inner,
                                delta_inner, cfg);
  const SolutionProfile expanded = expand_fictitious(run.chosen, inst.nu);

  const SolutionProfile empty;
  std::vector<const SolutionProfile*> candidates{&empty, &expanded};
  std::vector<double> values;
  const std::size_t best = detail::pick_best(inst, cfg, candidates, values);

  SolverReport report;
  report.algorithm = "cor";
  report.config = cfg;
  report.chosen = *candidates[best];
  report.estimated_objective = values[best];
  if (best == 1) report.trace = std::move(run.trace);
  return report;
}

// Add one isolated node seeded in the first nu campaigns; every objective
// value on the new instance is the original plus one.
inline BalanceInstance lower_bound_transform(const BalanceInstance& inst) {
  BalanceInstance out = inst;
  const std::int32_t fresh = out.n;
  out.n += 1;
  for (std::int32_t i = 0; i < out.nu; ++i) out.seeds[i].push_back(fresh);
  for (auto& set : out.seeds) canonicalize(set);
  return out;
}

}  // namespace balex
