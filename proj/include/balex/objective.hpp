#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cascade.hpp"
#include "instance.hpp"
#include "rng.hpp"

// The balanced-exposure objective family and its Monte-Carlo estimator.
//
// For one sampled world, level_base[v] counts the campaigns reaching v
// from the base seed profile alone and induces the level partition; the
// per-world integrands below count nodes inside a level-restricted
// universe that end up exposed to none or to enough campaigns once the
// candidate solution is added. Expectations over worlds give the
// objective values; `estimate` averages sampled worlds, `exact_value`
// enumerates all live/dead assignments of fractional arcs.

namespace balex {

enum class ObjKind : std::uint8_t {
  phi_geq,    // universe: level >= l, threshold nu
  phi_level,  // universe: level == l, threshold nu
  phi_band,   // universe: level >= l, threshold beta
  psi,        // correlated surrogate over the fictitious campaign
};

struct ObjectiveId {
  ObjKind kind = ObjKind::phi_geq;
  std::int32_t level = 0;
  std::int32_t beta = 0;

  static ObjectiveId phi() { return {ObjKind::phi_geq, 0, 0}; }
  static ObjectiveId phi_geq(std::int32_t l) { return {ObjKind::phi_geq, l, 0}; }
  static ObjectiveId phi_level(std::int32_t l) { return {ObjKind::phi_level, l, 0}; }
  static ObjectiveId phi_band(std::int32_t l, std::int32_t b) {
    return {ObjKind::phi_band, l, b};
  }
  static ObjectiveId psi() { return {ObjKind::psi, 0, 0}; }

  bool operator==(const ObjectiveId&) const = default;

  std::uint64_t encode() const {
    return (static_cast<std::uint64_t>(kind) << 32) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(level)) << 8) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(beta));
  }

  std::string to_string() const {
    switch (kind) {
      case ObjKind::phi_geq:
        return level == 0 ? "phi" : "phi_geq:" + std::to_string(level);
      case ObjKind::phi_level:
        return "phi_level:" + std::to_string(level);
      case ObjKind::phi_band:
        return "phi_band:" + std::to_string(level) + ":" + std::to_string(beta);
      case ObjKind::psi:
        return "psi";
    }
    return "?";
  }

  static std::optional<ObjectiveId> parse(const std::string& s) {
    auto tail_int = [](const std::string& str, std::size_t pos) -> std::optional<std::int32_t> {
      try {
        std::size_t used = 0;
        int v = std::stoi(str.substr(pos), &used);
        if (pos + used != str.size()) return std::nullopt;
        return v;
      } catch (...) {
        return std::nullopt;
      }
    };
    if (s == "phi") return phi();
    if (s == "psi") return psi();
    if (s.rfind("phi_geq:", 0) == 0) {
      if (auto l = tail_int(s, 8)) return phi_geq(*l);
      return std::nullopt;
    }
    if (s.rfind("phi_level:", 0) == 0) {
      if (auto l = tail_int(s, 10)) return phi_level(*l);
      return std::nullopt;
    }
    if (s.rfind("phi_band:", 0) == 0) {
      auto colon = s.find(':', 9);
      if (colon == std::string::npos) return std::nullopt;
      try {
        int l = std::stoi(s.substr(9, colon - 9));
        if (auto b = tail_int(s, colon + 1)) return phi_band(l, *b);
      } catch (...) {
      }
      return std::nullopt;
    }
    return std::nullopt;
  }
};

inline void validate(const ObjectiveId& obj, const BalanceInstance& inst) {
  std::vector<std::string> out;
  switch (obj.kind) {
    case ObjKind::phi_geq:
    case ObjKind::phi_level:
      if (obj.level < 0 || obj.level > inst.mu) out.push_back("objective level out of range");
      break;
    case ObjKind::phi_band:
      if (obj.level < 0 || obj.level > inst.mu) out.push_back("objective level out of range");
      if (obj.beta < 1 || obj.beta > inst.nu) out.push_back("objective beta out of range");
      break;
    case ObjKind::psi:
      if (inst.setting != Setting::correlated)
        out.push_back("psi requires a correlated instance");
      break;
  }
  if (!out.empty()) throw ValidationError(std::move(out));
}

// number of nodes contained in none or in at least nu of the given sets
inline std::int64_t nosm(std::int32_t n, const std::vector<std::vector<std::int32_t>>& sets,
                         std::int32_t nu) {
  std::vector<std::int32_t> count(n, 0);
  for (const auto& s : sets)
    for (std::int32_t v : s) ++count[v];
  std::int64_t out = 0;
  for (std::int32_t v = 0; v < n; ++v)
    if (count[v] == 0 || count[v] >= nu) ++out;
  return out;
}

// level[v] = number of campaigns reaching v from the given seed profile
inline std::vector<std::uint8_t> level_partition(const BalanceInstance& inst,
                                                 const OutcomeProfile& profile,
                                                 const SeedProfile& base) {
  std::vector<std::uint8_t> level(inst.n, 0);
  Reacher r(inst.n);
  for (std::int32_t i = 1; i <= inst.mu; ++i) {
    r.start();
    r.visit_all(base[i - 1]);
    r.expand(profile.live(i));
    for (std::int32_t v : r.reached()) ++level[v];
  }
  return level;
}

inline SeedProfile merge_seeds(const SeedProfile& base, const SolutionProfile& s) {
  SeedProfile out = base;
  for (const Pair& p : s.pairs) {
    if (p.campaign >= 1) out[p.campaign - 1].push_back(p.node);
  }
  for (auto& set : out) canonicalize(set);
  return out;
}

// Per-world integrand evaluation with reusable buffers; one per worker.
class WorldEval {
 public:
  explicit WorldEval(const BalanceInstance& inst)
      : inst_(inst), reacher_(inst.n), level_base_(inst.n), level_full_(inst.n),
        reach0_(inst.n) {}

  // base: the seed profile levels are measured from (I, or R for band
  // objectives); full: base with the solution merged in; psi_seeds: the
  // fictitious campaign's seed nodes. mask, when given, restricts
  // counting to nodes with mask[v] != 0.
  std::int64_t eval(const ObjectiveId& obj, const OutcomeProfile& profile,
                    const SeedProfile& base, const SeedProfile& full,
                    std::span<const std::int32_t> psi_seeds,
                    const std::vector<std::uint8_t>* mask = nullptr) {
    const std::int32_t n = inst_.n;
    std::fill(level_base_.begin(), level_base_.end(), 0);
    for (std::int32_t i = 1; i <= inst_.mu; ++i) {
      reacher_.start();
      reacher_.visit_all(base[i - 1]);
      reacher_.expand(profile.live(i));
      for (std::int32_t v : reacher_.reached()) ++level_base_[v];
    }

    if (obj.kind == ObjKind::psi) {
      reacher_.start();
      reacher_.visit_all(psi_seeds);
      reacher_.expand(profile.live(0));
      std::fill(reach0_.begin(), reach0_.end(), 0);
      for (std::int32_t v : reacher_.reached()) reach0_[v] = 1;
      std::int64_t count = 0;
      for (std::int32_t v = 0; v < n; ++v) {
        if (mask && !(*mask)[v]) continue;
        const std::int32_t lb = level_base_[v];
        if (lb >= inst_.nu || (reach0_[v] && lb >= 1 && lb <= inst_.nu - 1)) ++count;
      }
      return count;
    }

    std::fill(level_full_.begin(), level_full_.end(), 0);
    for (std::int32_t i = 1; i <= inst_.mu; ++i) {
      reacher_.start();
      reacher_.visit_all(full[i - 1]);
      reacher_.expand(profile.live(i));
      for (std::int32_t v : reacher_.reached()) ++level_full_[v];
    }

    const std::int32_t threshold = obj.kind == ObjKind::phi_band ? obj.beta : inst_.nu;
    std::int64_t count = 0;
    for (std::int32_t v = 0; v < n; ++v) {
      if (mask && !(*mask)[v]) continue;
      const std::int32_t lb = level_base_[v];
      const bool in_universe =
          obj.kind == ObjKind::phi_level ? lb == obj.level : lb >= obj.level;
      if (!in_universe) continue;
      const std::int32_t lf = level_full_[v];
      if (lf == 0 || lf >= threshold) ++count;
    }
    return count;
  }

 private:
  const BalanceInstance& inst_;
  Reacher reacher_;
  std::vector<std::uint8_t> level_base_, level_full_, reach0_;
};

inline void check_solution_domain(const ObjectiveId& obj, const BalanceInstance& inst,
                                  const SolutionProfile& s) {
  if (obj.kind == ObjKind::psi) {
    validate_solution(s, inst, /*fictitious_ok=*/true);
    for (const Pair& p : s.pairs)
      if (p.campaign != 0)
        throw ValidationError("psi solutions must use the fictitious campaign 0");
  } else {
    validate_solution(s, inst);
  }
}

// per-world count whose expectation defines the objective
inline std::int64_t eval_world(const BalanceInstance& inst, const ObjectiveId& obj,
                               const OutcomeProfile& profile, const SeedProfile& base,
                               const SolutionProfile& s) {
  validate(obj, inst);
  check_solution_domain(obj, inst, s);
  WorldEval ev(inst);
  const SeedProfile full = merge_seeds(base, s);
  return ev.eval(obj, profile, base, full, s.campaign_nodes(0));
}

struct Estimate {
  double value = 0.0;
  std::int64_t samples_requested = 0;  // the |V|^2 ln(1/delta)/eps^2 count
  std::int64_t samples_used = 0;
  bool deterministic_shortcut = false;
  EstimatorConfig config;
};

inline std::int64_t sample_count(std::int32_t n, double epsilon, double delta) {
  const double t = static_cast<double>(n) * n * std::log(1.0 / delta) / (epsilon * epsilon);
  return static_cast<std::int64_t>(std::ceil(t));
}

// Monte-Carlo estimate of the objective: mean of the per-world integrand
// over sampled outcome profiles. Per-sample counts are integers, so the
// accumulated sum is exact and independent of worker count.
inline Estimate estimate_with_base(const BalanceInstance& inst, const ObjectiveId& obj,
                                   const SeedProfile& base, const SolutionProfile& s,
                                   const EstimatorConfig& cfg) {
  validate(cfg);
  validate(obj, inst);
  check_solution_domain(obj, inst, s);

  Estimate est;
  est.config = cfg;
  est.samples_requested = inst.deterministic() ? 1 : sample_count(inst.n, cfg.epsilon, cfg.delta);
  est.deterministic_shortcut = inst.deterministic();
  est.samples_used = cfg.sample_cap ? std::min(*cfg.sample_cap, est.samples_requested)
                                    : est.samples_requested;

  const SeedProfile full = merge_seeds(base, s);
  const std::vector<std::int32_t> psi_seeds = s.campaign_nodes(0);

  const std::int64_t total = est.samples_used;
  const int workers = static_cast<int>(
      std::min<std::int64_t>(total, std::max(1, cfg.threads)));

  auto run_range = [&](std::int64_t lo, std::int64_t hi, std::int64_t& acc) {
    WorldEval ev(inst);
    OutcomeProfile profile;
    std::int64_t sum = 0;
    for (std::int64_t t = lo; t < hi; ++t) {
      sample_profile_into(inst, cfg.master_seed, static_cast<std::uint64_t>(t), profile);
      sum += ev.eval(obj, profile, base, full, psi_seeds);
    }
    acc = sum;
  };

  std::int64_t sum = 0;
  if (workers == 1) {
    run_range(0, total, sum);
  } else {
    std::vector<std::int64_t> parts(workers, 0);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::int64_t chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::int64_t lo = w * chunk;
      const std::int64_t hi = std::min<std::int64_t>(total, lo + chunk);
      pool.emplace_back(run_range, lo, hi, std::ref(parts[w]));
    }
    for (auto& th : pool) th.join();
    for (std::int64_t part : parts) sum += part;
  }

  est.value = static_cast<double>(sum) / static_cast<double>(total);
  return est;
}

inline Estimate estimate(const BalanceInstance& inst, const ObjectiveId& obj,
                         const SolutionProfile& s, const EstimatorConfig& cfg) {
  return estimate_with_base(inst, obj, inst.seeds, s, cfg);
}

// All live/dead assignments of fractional arcs, with their probabilities.
// Heterogeneous mode enumerates per (arc, campaign) pair; correlated mode
// assigns each fractional arc once for all campaigns.
struct WorldEnsemble {
  std::vector<double> weights;
  std::vector<OutcomeProfile> profiles;

  static WorldEnsemble build(const BalanceInstance& inst, int max_fractional = 20) {
    struct Item {
      std::int32_t arc;
      std::int32_t campaign;  // 0 in correlated mode
      double p;
    };
    std::vector<Item> items;
    const bool cor = inst.setting == Setting::correlated;
    for (std::size_t j = 0; j < inst.arcs.size(); ++j) {
      const Arc& a = inst.arcs[j];
      if (cor) {
        if (a.p[0] != 0.0 && a.p[0] != 1.0)
          items.push_back({static_cast<std::int32_t>(j), 0, a.p[0]});
      } else {
        for (std::int32_t i = 1; i <= inst.mu; ++i)
          if (a.p[i - 1] != 0.0 && a.p[i - 1] != 1.0)
            items.push_back({static_cast<std::int32_t>(j), i, a.p[i - 1]});
      }
    }
    if (static_cast<int>(items.size()) > max_fractional)
      throw LimitError("exact evaluation limit exceeded: " + std::to_string(items.size()) +
                       " fractional arc entries (limit " + std::to_string(max_fractional) +
                       ")");

    WorldEnsemble out;
    const std::size_t worlds = std::size_t{1} << items.size();
    out.weights.reserve(worlds);
    out.profiles.reserve(worlds);
    for (std::size_t mask = 0; mask < worlds; ++mask) {
      double w = 1.0;
      OutcomeProfile profile;
      profile.correlated = cor;
      profile.sets.resize(cor ? 1 : inst.mu);
      for (auto& set : profile.sets) set.adj.assign(inst.n, {});
      // deterministic arcs
      for (const Arc& a : inst.arcs) {
        if (cor) {
          if (a.p[0] == 1.0) profile.sets[0].adj[a.u].push_back(a.v);
        } else {
          for (std::int32_t i = 1; i <= inst.mu; ++i)
            if (a.p[i - 1] == 1.0) profile.sets[i - 1].adj[a.u].push_back(a.v);
        }
      }
      for (std::size_t b = 0; b < items.size(); ++b) {
        const Item& it = items[b];
        const bool live = (mask >> b) & 1;
        w *= live ? it.p : 1.0 - it.p;
        if (live) {
          const Arc& a = inst.arcs[it.arc];
          auto& set = cor ? profile.sets[0] : profile.sets[it.campaign - 1];
          set.adj[a.u].push_back(a.v);
        }
      }
      out.weights.push_back(w);
      out.profiles.push_back(std::move(profile));
    }
    return out;
  }

  std::size_t size() const { return weights.size(); }

  double expectation(const BalanceInstance& inst, const ObjectiveId& obj,
                     const SeedProfile& base, const SolutionProfile& s,
                     const std::vector<std::uint8_t>* mask = nullptr) const {
    validate(obj, inst);
    check_solution_domain(obj, inst, s);
    WorldEval ev(inst);
    const SeedProfile full = merge_seeds(base, s);
    const std::vector<std::int32_t> psi_seeds = s.campaign_nodes(0);
    double acc = 0.0;
    for (std::size_t w = 0; w < profiles.size(); ++w)
      acc += weights[w] *
             static_cast<double>(ev.eval(obj, profiles[w], base, full, psi_seeds, mask));
    return acc;
  }
};

// exact expectation by world enumeration
inline double exact_value_with_base(const BalanceInstance& inst, const ObjectiveId& obj,
                                    const SeedProfile& base, const SolutionProfile& s,
                                    int max_fractional = 20) {
  return WorldEnsemble::build(inst, max_fractional).expectation(inst, obj, base, s);
}

inline double exact_value(const BalanceInstance& inst, const ObjectiveId& obj,
                          const SolutionProfile& s, int max_fractional = 20) {
  return exact_value_with_base(inst, obj, inst.seeds, s, max_fractional);
}

}  // namespace balex
