#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

#include "instance.hpp"
#include "rng.hpp"

// Live-edge sampling and reachability. Arc e is live for campaign i with
// probability p_i(e), independently; spread equals reachability over live
// arcs. Substreams are keyed by (master seed, sample index, campaign), so
// the same world is regenerated identically by any worker.

namespace balex {

struct LiveEdgeSet {
  std::vector<std::vector<std::int32_t>> adj;  // adj[u] = live out-neighbors

  bool operator==(const LiveEdgeSet&) const = default;
};

struct OutcomeProfile {
  bool correlated = false;
  // correlated: a single shared set; heterogeneous: one per campaign (index i-1)
  std::vector<LiveEdgeSet> sets;

  // campaign 0 is valid only in correlated mode
  const LiveEdgeSet& live(std::int32_t campaign) const {
    if (correlated) return sets[0];
    assert(campaign >= 1);
    return sets[campaign - 1];
  }
};

inline constexpr std::uint64_t kCascadeStream = 0;

// one Bernoulli draw per arc, in arc order
inline void sample_live_edges_into(const BalanceInstance& inst, std::int32_t campaign,
                                   rng::Stream& stream, LiveEdgeSet& out) {
  out.adj.resize(inst.n);
  for (auto& lst : out.adj) lst.clear();
  const std::size_t pi = campaign == 0 ? 0 : static_cast<std::size_t>(campaign - 1);
  for (const Arc& a : inst.arcs)
    if (stream.bernoulli(a.p[pi])) out.adj[a.u].push_back(a.v);
}

inline LiveEdgeSet sample_live_edges(const BalanceInstance& inst, std::int32_t campaign,
                                     rng::Stream& stream) {
  LiveEdgeSet out;
  sample_live_edges_into(inst, campaign, stream, out);
  return out;
}

inline void sample_profile_into(const BalanceInstance& inst, std::uint64_t master_seed,
                                std::uint64_t sample_index, OutcomeProfile& out) {
  out.correlated = inst.setting == Setting::correlated;
  if (out.correlated) {
    out.sets.resize(1);
    auto stream = rng::Stream::make(master_seed, kCascadeStream, sample_index, 0);
    sample_live_edges_into(inst, 0, stream, out.sets[0]);
  } else {
    out.sets.resize(inst.mu);
    for (std::int32_t i = 1; i <= inst.mu; ++i) {
      auto stream = rng::Stream::make(master_seed, kCascadeStream, sample_index,
                                      static_cast<std::uint64_t>(i));
      sample_live_edges_into(inst, i, stream, out.sets[i - 1]);
    }
  }
}

inline OutcomeProfile sample_profile(const BalanceInstance& inst, std::uint64_t master_seed,
                                     std::uint64_t sample_index) {
  OutcomeProfile out;
  sample_profile_into(inst, master_seed, sample_index, out);
  return out;
}

// the single world of an all-0/1 instance
inline OutcomeProfile unique_world(const BalanceInstance& inst) {
  assert(inst.deterministic());
  return sample_profile(inst, 0, 0);
}

// Reusable BFS workspace. Epoch stamps avoid clearing the visited map
// between traversals.
class Reacher {
 public:
  explicit Reacher(std::int32_t n) : mark_(n, 0) {}

  void start() {
    ++stamp_;
    frontier_.clear();
  }

  bool visited(std::int32_t v) const { return mark_[v] == stamp_; }

  void visit(std::int32_t v) {
    if (mark_[v] != stamp_) {
      mark_[v] = stamp_;
      frontier_.push_back(v);
    }
  }

  void visit_all(std::span<const std::int32_t> nodes) {
    for (std::int32_t v : nodes) visit(v);
  }

  void expand(const LiveEdgeSet& live) {
    for (std::size_t head = 0; head < frontier_.size(); ++head)
      for (std::int32_t w : live.adj[frontier_[head]]) visit(w);
  }

  std::span<const std::int32_t> reached() const { return frontier_; }

 private:
  std::vector<std::uint64_t> mark_;
  std::uint64_t stamp_ = 0;
  std::vector<std::int32_t> frontier_;
};

// nodes reachable from seeds along live arcs, seeds included, sorted
inline std::vector<std::int32_t> reach(std::int32_t n, const LiveEdgeSet& live,
                                       std::span<const std::int32_t> seeds) {
  Reacher r(n);
  r.start();
  r.visit_all(seeds);
  r.expand(live);
  std::vector<std::int32_t> out(r.reached().begin(), r.reached().end());
  std::sort(out.begin(), out.end());
  return out;
}

// element-wise reach over a profile
inline std::vector<std::vector<std::int32_t>> reach_profile(
    const BalanceInstance& inst, const OutcomeProfile& profile, const SeedProfile& sets) {
  assert(static_cast<std::int32_t>(sets.size()) == inst.mu);
  std::vector<std::vector<std::int32_t>> out;
  out.reserve(sets.size());
  for (std::int32_t i = 1; i <= inst.mu; ++i)
    out.push_back(reach(inst.n, profile.live(i), sets[i - 1]));
  return out;
}

}  // namespace balex
