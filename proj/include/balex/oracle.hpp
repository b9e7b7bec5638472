#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "objective.hpp"

// Exhaustive exact solvers used as ground truth. Solutions are enumerated
// by size and lexicographically within a size, so ties resolve to the
// smallest sorted pair list; values come from the exact world ensemble,
// compared with a 1e-9 tolerance.

namespace balex {

struct OracleLimit {
  std::int64_t max_evaluations = 5'000'000;  // (solution, world) pairs
  int max_fractional = 20;
};

inline constexpr double kOracleTolerance = 1e-9;

namespace detail {

inline PairList objective_domain(const BalanceInstance& inst, const ObjectiveId& obj) {
  PairList domain;
  if (obj.kind == ObjKind::psi) {
    for (std::int32_t v = 0; v < inst.n; ++v) domain.push_back({v, 0});
  } else {
    for (std::int32_t v = 0; v < inst.n; ++v)
      for (std::int32_t i = 1; i <= inst.mu; ++i) domain.push_back({v, i});
  }
  return domain;
}

inline std::int64_t solution_count(std::int64_t domain, std::int64_t k) {
  std::int64_t total = 0, layer = 1;
  for (std::int64_t s = 0; s <= std::min(domain, k); ++s) {
    total += layer;
    if (total > (std::int64_t{1} << 62) / std::max<std::int64_t>(domain, 1)) return total;
    layer = layer * (domain - s) / (s + 1);
  }
  return total;
}

// visits all size<=k index combinations in shortlex order
template <class F>
void for_each_subset(std::int64_t domain, std::int64_t k, F&& fn) {
  std::vector<std::int32_t> idx;
  fn(idx);  // empty set
  for (std::int64_t size = 1; size <= std::min<std::int64_t>(domain, k); ++size) {
    idx.assign(size, 0);
    for (std::int64_t i = 0; i < size; ++i) idx[i] = static_cast<std::int32_t>(i);
    while (true) {
      fn(idx);
      std::int64_t pos = size - 1;
      while (pos >= 0 && idx[pos] == domain - size + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (std::int64_t i = pos + 1; i < size; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
}

}  // namespace detail

struct OracleResult {
  SolutionProfile best;
  double value = 0.0;
  std::int64_t solutions_evaluated = 0;
};

inline OracleResult brute_force_solve(const BalanceInstance& inst, const ObjectiveId& obj,
                                      const OracleLimit& limit = {}) {
  validate(obj, inst);
  const PairList domain = detail::objective_domain(inst, obj);
  const WorldEnsemble worlds = WorldEnsemble::build(inst, limit.max_fractional);
  const std::int64_t count =
      detail::solution_count(static_cast<std::int64_t>(domain.size()), inst.k);
  if (count * static_cast<std::int64_t>(worlds.size()) > limit.max_evaluations)
    throw LimitError("oracle ceiling exceeded: " + std::to_string(count) + " solutions x " +
                     std::to_string(worlds.size()) + " worlds");

  OracleResult out;
  bool first = true;
  detail::for_each_subset(
      static_cast<std::int64_t>(domain.size()), inst.k, [&](const std::vector<std::int32_t>& idx) {
        PairList pairs;
        pairs.reserve(idx.size());
        for (std::int32_t i : idx) pairs.push_back(domain[i]);
        SolutionProfile s(std::move(pairs));
        const double value = worlds.expectation(inst, obj, inst.seeds, s);
        ++out.solutions_evaluated;
        if (first || value > out.value + kOracleTolerance) {
          out.best = std::move(s);
          out.value = value;
          first = false;
        }
      });
  return out;
}

// complete (solution, exact value) table in enumeration order
inline std::vector<std::pair<SolutionProfile, double>> enumerate_values(
    const BalanceInstance& inst, const ObjectiveId& obj, std::int32_t k,
    const OracleLimit& limit = {}) {
  validate(obj, inst);
  const PairList domain = detail::objective_domain(inst, obj);
  const WorldEnsemble worlds = WorldEnsemble::build(inst, limit.max_fractional);
  const std::int64_t count = detail::solution_count(static_cast<std::int64_t>(domain.size()), k);
  if (count * static_cast<std::int64_t>(worlds.size()) > limit.max_evaluations)
    throw LimitError("oracle ceiling exceeded: " + std::to_string(count) + " solutions x " +
                     std::to_string(worlds.size()) + " worlds");

  std::vector<std::pair<SolutionProfile, double>> table;
  detail::for_each_subset(
      static_cast<std::int64_t>(domain.size()), k, [&](const std::vector<std::int32_t>& idx) {
        PairList pairs;
        pairs.reserve(idx.size());
        for (std::int32_t i : idx) pairs.push_back(domain[i]);
        SolutionProfile s(std::move(pairs));
        const double value = worlds.expectation(inst, obj, inst.seeds, s);
        table.emplace_back(std::move(s), value);
      });
  return table;
}

}  // namespace balex
