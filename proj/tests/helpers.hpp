#pragma once

#include <vector>

#include "balex/instance.hpp"
#include "balex/rng.hpp"

namespace testutil {

inline balex::BalanceInstance make_instance(std::int32_t n, std::int32_t mu, std::int32_t nu,
                                            std::int32_t k, balex::Setting setting,
                                            balex::SeedProfile seeds,
                                            std::vector<balex::Arc> arcs) {
  balex::BalanceInstance inst;
  inst.n = n;
  inst.mu = mu;
  inst.nu = nu;
  inst.k = k;
  inst.setting = setting;
  inst.seeds = std::move(seeds);
  for (auto& s : inst.seeds) balex::canonicalize(s);
  inst.arcs = std::move(arcs);
  balex::validate(inst);
  return inst;
}

inline balex::Arc arc(std::int32_t u, std::int32_t v, std::vector<double> p) {
  return balex::Arc{u, v, std::move(p)};
}

// star c -> {l1, l2}, deterministic correlated, mu = nu = 2, I = ({l1}, {})
inline balex::BalanceInstance star_instance(std::int32_t k = 2) {
  return make_instance(3, 2, 2, k, balex::Setting::correlated, {{1}, {}},
                       {arc(0, 1, {1.0, 1.0}), arc(0, 2, {1.0, 1.0})});
}

// two isolated nodes, mu = nu = 2, I = ({a}, {})
inline balex::BalanceInstance isolated_pair_instance(std::int32_t k) {
  return make_instance(2, 2, 2, k, balex::Setting::heterogeneous, {{0}, {}}, {});
}

// Random instance with a bounded number of fractional arc entries so the
// exact oracle stays cheap. Probabilities are drawn from a small palette.
inline balex::BalanceInstance random_instance(balex::rng::Stream stream, std::int32_t n,
                                              std::int32_t mu, std::int32_t nu, std::int32_t k,
                                              balex::Setting setting, std::int32_t arcs,
                                              std::int32_t fractional_budget) {
  balex::BalanceInstance inst;
  inst.n = n;
  inst.mu = mu;
  inst.nu = nu;
  inst.k = k;
  inst.setting = setting;
  inst.seeds.assign(mu, {});
  for (std::int32_t i = 0; i < mu; ++i)
    for (std::int32_t v = 0; v < n; ++v)
      if (stream.bernoulli(0.3)) inst.seeds[i].push_back(v);

  const double palette[3] = {0.3, 0.5, 0.7};
  std::int32_t fractional_left = fractional_budget;
  for (std::int32_t a = 0; a < arcs; ++a) {
    const std::int32_t u = static_cast<std::int32_t>(stream.below(n));
    std::int32_t v = static_cast<std::int32_t>(stream.below(n));
    if (u == v) v = (v + 1) % n;
    balex::Arc e;
    e.u = u;
    e.v = v;
    if (setting == balex::Setting::correlated) {
      double p;
      if (fractional_left > 0 && stream.bernoulli(0.6)) {
        p = palette[stream.below(3)];
        --fractional_left;
      } else {
        p = stream.bernoulli(0.5) ? 1.0 : 0.0;
      }
      e.p.assign(mu, p);
    } else {
      for (std::int32_t i = 0; i < mu; ++i) {
        if (fractional_left > 0 && stream.bernoulli(0.5)) {
          e.p.push_back(palette[stream.below(3)]);
          --fractional_left;
        } else {
          e.p.push_back(stream.bernoulli(0.5) ? 1.0 : 0.0);
        }
      }
    }
    inst.arcs.push_back(std::move(e));
  }
  balex::validate(inst);
  return inst;
}

}  // namespace testutil
