#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

// Problem instance types, validation and (de)serialization.
//
// Node ids are dense integers 0..n-1. Arcs are stored once with a
// mu-length probability vector shared by all campaigns; zero entries are
// kept so the correlated-equality check stays well defined. Campaign
// indices are 1-based (0 denotes the fictitious campaign of the
// correlated surrogate objective).

namespace balex {

using json = nlohmann::json;

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
  explicit ValidationError(std::string what)
      : ValidationError(std::vector<std::string>{std::move(what)}) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& vs) {
    std::string out;
    for (const auto& v : vs) {
      if (!out.empty()) out += "; ";
      out += v;
    }
    return out.empty() ? std::string("validation failed") : out;
  }
  std::vector<std::string> violations_;
};

class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Setting { heterogeneous, correlated };

inline std::string to_string(Setting s) {
  return s == Setting::heterogeneous ? "het" : "cor";
}

struct Arc {
  std::int32_t u = 0;
  std::int32_t v = 0;
  std::vector<double> p;  // length mu, entry i-1 is campaign i's probability

  bool operator==(const Arc&) const = default;
};

// Per-campaign node sets, index i-1 holds campaign i. Always sorted unique.
using SeedProfile = std::vector<std::vector<std::int32_t>>;

inline void canonicalize(std::vector<std::int32_t>& nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
}

struct BalanceInstance {
  std::int32_t n = 0;
  std::int32_t mu = 0;
  std::int32_t nu = 0;
  std::int32_t k = 0;
  Setting setting = Setting::heterogeneous;
  SeedProfile seeds;       // mu sets
  std::vector<Arc> arcs;

  bool operator==(const BalanceInstance&) const = default;

  bool deterministic() const {
    for (const auto& a : arcs)
      for (double q : a.p)
        if (q != 0.0 && q != 1.0) return false;
    return true;
  }

  // out-arc indices per node; built lazily by callers that need it
  std::vector<std::vector<std::int32_t>> out_arcs() const {
    std::vector<std::vector<std::int32_t>> out(n);
    for (std::size_t j = 0; j < arcs.size(); ++j)
      out[arcs[j].u].push_back(static_cast<std::int32_t>(j));
    return out;
  }
};

inline std::vector<std::string> violations(const BalanceInstance& inst) {
  std::vector<std::string> out;
  if (inst.mu < 2) out.push_back("mu must be at least 2");
  if (inst.nu < 2 || inst.nu > inst.mu) out.push_back("nu must satisfy 2 <= nu <= mu");
  if (inst.n < inst.mu) out.push_back("fewer nodes than campaigns");
  if (inst.k < inst.nu) out.push_back("budget below nu");
  if (static_cast<std::int64_t>(inst.k) >
      static_cast<std::int64_t>(inst.nu) * inst.n)
    out.push_back("budget exceeds nu|V|");
  if (static_cast<std::int32_t>(inst.seeds.size()) != inst.mu)
    out.push_back("seeds must list exactly mu sets");
  for (std::size_t i = 0; i < inst.seeds.size(); ++i)
    for (std::int32_t v : inst.seeds[i])
      if (v < 0 || v >= inst.n)
        out.push_back("seed set " + std::to_string(i + 1) + " contains invalid node " +
                      std::to_string(v));
  for (std::size_t j = 0; j < inst.arcs.size(); ++j) {
    const Arc& a = inst.arcs[j];
    const std::string tag = "arc " + std::to_string(j);
    if (a.u < 0 || a.u >= inst.n || a.v < 0 || a.v >= inst.n)
      out.push_back(tag + ": endpoint out of range");
    if (a.u == a.v) out.push_back(tag + ": self-loop");
    if (static_cast<std::int32_t>(a.p.size()) != inst.mu) {
      out.push_back(tag + ": probability vector must have mu entries");
      continue;
    }
    for (double q : a.p)
      if (!(q >= 0.0 && q <= 1.0)) {
        out.push_back(tag + ": probability out of range");
        break;
      }
    if (inst.setting == Setting::correlated)
      for (double q : a.p)
        if (q != a.p[0]) {
          out.push_back(tag + ": correlated probabilities differ");
          break;
        }
  }
  return out;
}

inline void validate(const BalanceInstance& inst) {
  auto v = violations(inst);
  if (!v.empty()) throw ValidationError(std::move(v));
}

inline json to_json(const BalanceInstance& inst) {
  json arcs = json::array();
  for (const auto& a : inst.arcs) arcs.push_back({{"u", a.u}, {"v", a.v}, {"p", a.p}});
  json seeds = json::array();
  for (const auto& s : inst.seeds) seeds.push_back(s);
  return json{{"n", inst.n},         {"mu", inst.mu},      {"nu", inst.nu},
              {"k", inst.k},         {"setting", to_string(inst.setting)},
              {"seeds", seeds},      {"arcs", arcs}};
}

inline std::string serialize(const BalanceInstance& inst) { return to_json(inst).dump(); }

inline BalanceInstance instance_from_json(const json& j) {
  BalanceInstance inst;
  try {
    inst.n = j.at("n").get<std::int32_t>();
    inst.mu = j.at("mu").get<std::int32_t>();
    inst.nu = j.at("nu").get<std::int32_t>();
    inst.k = j.at("k").get<std::int32_t>();
    const std::string s = j.at("setting").get<std::string>();
    if (s == "het")
      inst.setting = Setting::heterogeneous;
    else if (s == "cor")
      inst.setting = Setting::correlated;
    else
      throw ValidationError("setting must be \"het\" or \"cor\"");
    for (const auto& set : j.at("seeds")) {
      std::vector<std::int32_t> nodes = set.get<std::vector<std::int32_t>>();
      canonicalize(nodes);
      inst.seeds.push_back(std::move(nodes));
    }
    for (const auto& a : j.at("arcs")) {
      Arc arc;
      arc.u = a.at("u").get<std::int32_t>();
      arc.v = a.at("v").get<std::int32_t>();
      arc.p = a.at("p").get<std::vector<double>>();
      inst.arcs.push_back(std::move(arc));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed instance JSON: ") + e.what());
  }
  validate(inst);
  return inst;
}

inline BalanceInstance load_instance(const std::string& bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("instance is not valid JSON: ") + e.what());
  }
  return instance_from_json(j);
}

// A (node, campaign) pair; campaign 0 is only meaningful for the
// correlated surrogate objective.
struct Pair {
  std::int32_t node = 0;
  std::int32_t campaign = 0;

  auto operator<=>(const Pair&) const = default;
};

using PairList = std::vector<Pair>;  // canonical form: sorted unique

inline void canonicalize(PairList& pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

struct SolutionProfile {
  PairList pairs;  // sorted unique

  SolutionProfile() = default;
  explicit SolutionProfile(PairList p) : pairs(std::move(p)) { canonicalize(pairs); }

  bool operator==(const SolutionProfile&) const = default;

  std::size_t size() const { return pairs.size(); }
  bool contains(Pair p) const {
    return std::binary_search(pairs.begin(), pairs.end(), p);
  }

  // nodes assigned to a given campaign, sorted
  std::vector<std::int32_t> campaign_nodes(std::int32_t campaign) const {
    std::vector<std::int32_t> out;
    for (const Pair& p : pairs)
      if (p.campaign == campaign) out.push_back(p.node);
    return out;
  }
};

// fictitious_ok permits campaign 0 (used by the correlated surrogate's domain)
inline void validate_solution(const SolutionProfile& s, const BalanceInstance& inst,
                              bool fictitious_ok = false) {
  std::vector<std::string> out;
  if (static_cast<std::int64_t>(s.size()) > inst.k) out.push_back("solution exceeds budget");
  for (const Pair& p : s.pairs) {
    if (p.node < 0 || p.node >= inst.n) out.push_back("pair references invalid node");
    const std::int32_t lo = fictitious_ok ? 0 : 1;
    if (p.campaign < lo || p.campaign > inst.mu)
      out.push_back("pair references invalid campaign");
  }
  if (!out.empty()) throw ValidationError(std::move(out));
}

inline json to_json(const SolutionProfile& s) {
  json out = json::array();
  for (const Pair& p : s.pairs) out.push_back({p.node, p.campaign});
  return out;
}

inline SolutionProfile solution_from_json(const json& j) {
  PairList pairs;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2)
      throw ValidationError("pairs must be [[node,campaign],...]");
    pairs.push_back(Pair{e[0].get<std::int32_t>(), e[1].get<std::int32_t>()});
  }
  return SolutionProfile(std::move(pairs));
}

struct EstimatorConfig {
  double epsilon = 0.1;
  double delta = 0.1;
  std::optional<std::int64_t> sample_cap;
  std::uint64_t master_seed = 0;
  int threads = 1;
};

inline void validate(const EstimatorConfig& cfg) {
  std::vector<std::string> out;
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) out.push_back("epsilon must be in (0,1)");
  if (!(cfg.delta > 0.0 && cfg.delta <= 0.5)) out.push_back("delta must be in (0,1/2]");
  if (cfg.sample_cap && *cfg.sample_cap < 1) out.push_back("sample cap must be positive");
  if (cfg.threads < 1) out.push_back("threads must be positive");
  if (!out.empty()) throw ValidationError(std::move(out));
}

}  // namespace balex
