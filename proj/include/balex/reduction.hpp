#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include <json.hpp>

#include "hypergraph.hpp"
#include "objective.hpp"

// Constructive reduction from densest-k-sub-hypergraph to deterministic
// balance instances. Every hyperedge spawns one path gadget of length
// l = |V|+1 per (campaign d-subset, permutation) combination: the entering
// arc from the a-th endpoint is live for exactly one campaign of the
// subset, the chain carries all d of them, and the last nu-d campaigns
// are seeded everywhere. A gadget path reaches the exposure threshold
// exactly when its endpoints propagate all d campaigns in the assigned
// pattern, which ties the circle-node objective to rainbow edge counts.

namespace balex {

struct GadgetIndex {
  std::int32_t rect_nodes = 0;  // original hypergraph nodes, ids 0..rect-1
  std::int32_t d = 0;
  std::int32_t l = 0;
  std::int64_t lambda = 0;  // d! * C(mu-nu+d, d)
  std::int32_t mu = 0;
  std::int32_t nu = 0;
  std::vector<std::vector<std::int32_t>> edges;   // sorted endpoints, input order
  std::vector<std::vector<std::int32_t>> iotas;   // sorted d-subsets of [mu-nu+d], lex order
  std::vector<std::vector<std::int32_t>> perms;   // permutations of 1..d, lex order

  std::int32_t free_campaigns() const { return mu - nu + d; }

  // circle node ids are laid out (edge, iota, perm, t) row-major
  std::int32_t circle_id(std::int64_t edge_idx, std::int64_t iota_idx, std::int64_t perm_idx,
                         std::int32_t t) const {
    const std::int64_t chain =
        (edge_idx * static_cast<std::int64_t>(iotas.size()) + iota_idx) *
            static_cast<std::int64_t>(perms.size()) +
        perm_idx;
    return static_cast<std::int32_t>(rect_nodes + chain * l + (t - 1));
  }

  std::int64_t circle_count() const {
    return lambda * static_cast<std::int64_t>(l) * static_cast<std::int64_t>(edges.size());
  }
};

inline json to_json(const GadgetIndex& g) {
  return json{{"rect_nodes", g.rect_nodes}, {"d", g.d},
              {"l", g.l},                   {"lambda", g.lambda},
              {"mu", g.mu},                 {"nu", g.nu},
              {"edges", g.edges},           {"iotas", g.iotas},
              {"perms", g.perms},           {"layout", "(edge,iota,perm,t) row-major"}};
}

inline GadgetIndex gadget_from_json(const json& j) {
  GadgetIndex g;
  try {
    g.rect_nodes = j.at("rect_nodes").get<std::int32_t>();
    g.d = j.at("d").get<std::int32_t>();
    g.l = j.at("l").get<std::int32_t>();
    g.lambda = j.at("lambda").get<std::int64_t>();
    g.mu = j.at("mu").get<std::int32_t>();
    g.nu = j.at("nu").get<std::int32_t>();
    g.edges = j.at("edges").get<std::vector<std::vector<std::int32_t>>>();
    g.iotas = j.at("iotas").get<std::vector<std::vector<std::int32_t>>>();
    g.perms = j.at("perms").get<std::vector<std::vector<std::int32_t>>>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed gadget index JSON: ") + e.what());
  }
  return g;
}

namespace detail {

inline std::vector<std::vector<std::int32_t>> sorted_subsets(std::int32_t universe,
                                                             std::int32_t size) {
  std::vector<std::vector<std::int32_t>> out;
  std::vector<std::int32_t> s(size);
  for (std::int32_t i = 0; i < size; ++i) s[i] = i + 1;
  while (true) {
    out.push_back(s);
    std::int32_t pos = size - 1;
    while (pos >= 0 && s[pos] == universe - size + pos + 1) --pos;
    if (pos < 0) break;
    ++s[pos];
    for (std::int32_t i = pos + 1; i < size; ++i) s[i] = s[i - 1] + 1;
  }
  return out;
}

inline std::vector<std::vector<std::int32_t>> all_permutations(std::int32_t d) {
  std::vector<std::int32_t> perm(d);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<std::vector<std::int32_t>> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace detail

inline std::pair<BalanceInstance, GadgetIndex> transform_tau(const Hypergraph& h,
                                                             std::int32_t k, std::int32_t mu,
                                                             std::int32_t nu) {
  validate(h);
  std::vector<std::string> pre;
  if (nu < h.d + 1) pre.push_back("nu must be at least d+1");
  if (mu < nu) pre.push_back("mu must be at least nu");
  if (k < h.d) pre.push_back("budget must be at least d");
  if (!pre.empty()) throw ValidationError(std::move(pre));

  GadgetIndex g;
  g.rect_nodes = h.n;
  g.d = h.d;
  g.l = h.n + 1;
  g.mu = mu;
  g.nu = nu;
  g.edges = h.edges;
  g.iotas = detail::sorted_subsets(mu - nu + h.d, h.d);
  g.perms = detail::all_permutations(h.d);
  g.lambda = static_cast<std::int64_t>(g.iotas.size()) * g.perms.size();

  BalanceInstance inst;
  inst.mu = mu;
  inst.nu = nu;
  inst.k = k;
  inst.setting = Setting::heterogeneous;
  inst.n = static_cast<std::int32_t>(h.n + g.circle_count());

  for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
    for (std::size_t ii = 0; ii < g.iotas.size(); ++ii) {
      const auto& iota = g.iotas[ii];
      for (std::size_t pi = 0; pi < g.perms.size(); ++pi) {
        const auto& perm = g.perms[pi];
        const std::int32_t head = g.circle_id(ei, ii, pi, 1);
        // entering arcs: endpoint a carries campaign iota[perm[a]-1]
        for (std::int32_t a = 0; a < h.d; ++a) {
          Arc arc;
          arc.u = g.edges[ei][a];
          arc.v = head;
          arc.p.assign(mu, 0.0);
          arc.p[iota[perm[a] - 1] - 1] = 1.0;
          inst.arcs.push_back(std::move(arc));
        }
        // chain arcs carry every campaign of the subset
        for (std::int32_t t = 1; t < g.l; ++t) {
          Arc arc;
          arc.u = g.circle_id(ei, ii, pi, t);
          arc.v = g.circle_id(ei, ii, pi, t + 1);
          arc.p.assign(mu, 0.0);
          for (std::int32_t c : iota) arc.p[c - 1] = 1.0;
          inst.arcs.push_back(std::move(arc));
        }
      }
    }
  }

  inst.seeds.assign(mu, {});
  std::vector<std::int32_t> everyone(inst.n);
  std::iota(everyone.begin(), everyone.end(), 0);
  for (std::int32_t i = g.free_campaigns() + 1; i <= mu; ++i) inst.seeds[i - 1] = everyone;

  return {std::move(inst), std::move(g)};
}

// balance solution seeding campaign phi(v) at each colored node
inline SolutionProfile witness_solution(const std::vector<std::int32_t>& s,
                                        const Coloring& phi) {
  PairList pairs;
  for (std::int32_t v : s)
    if (phi.color[v] != 0) pairs.push_back({v, phi.color[v]});
  return SolutionProfile(std::move(pairs));
}

// rectangle nodes where the solution seeds any free campaign
inline std::vector<std::int32_t> extract_dksh_solution(const SolutionProfile& sol,
                                                       const BalanceInstance& inst,
                                                       const GadgetIndex& g) {
  if (inst.n != g.rect_nodes + g.circle_count())
    throw ValidationError("instance does not match the gadget index");
  std::vector<std::int32_t> out;
  for (const Pair& p : sol.pairs)
    if (p.node < g.rect_nodes && p.campaign >= 1 && p.campaign <= g.free_campaigns())
      out.push_back(p.node);
  canonicalize(out);
  return out;
}

// exact (phi_rect, phi_circle) of the deterministic transformed instance
inline std::pair<double, double> phi_split(const BalanceInstance& inst, const GadgetIndex& g,
                                           const SolutionProfile& sol) {
  if (inst.n != g.rect_nodes + g.circle_count())
    throw ValidationError("instance does not match the gadget index");
  const WorldEnsemble worlds = WorldEnsemble::build(inst, 0);
  std::vector<std::uint8_t> rect(inst.n, 0), circle(inst.n, 0);
  for (std::int32_t v = 0; v < inst.n; ++v)
    (v < g.rect_nodes ? rect : circle)[v] = 1;
  const double phi_rect =
      worlds.expectation(inst, ObjectiveId::phi(), inst.seeds, sol, &rect);
  const double phi_circle =
      worlds.expectation(inst, ObjectiveId::phi(), inst.seeds, sol, &circle);
  return {phi_rect, phi_circle};
}

}  // namespace balex
