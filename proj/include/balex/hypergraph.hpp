#pragma once

#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "instance.hpp"
#include "rng.hpp"

// d-regular hypergraphs and the densest-k-sub-hypergraph utilities:
// exhaustive solvers for the plain and colored variants, and the random
// coloring whose expected rainbow fraction is d!/d^d.

namespace balex {

struct Hypergraph {
  std::int32_t n = 0;
  std::int32_t d = 0;
  std::vector<std::vector<std::int32_t>> edges;  // each sorted, exactly d distinct nodes

  bool operator==(const Hypergraph&) const = default;
};

inline void validate(const Hypergraph& h) {
  std::vector<std::string> out;
  if (h.d < 2) out.push_back("arity must be at least 2");
  if (h.n < h.d) out.push_back("fewer nodes than edge arity");
  for (std::size_t j = 0; j < h.edges.size(); ++j) {
    const auto& e = h.edges[j];
    const std::string tag = "hyperedge " + std::to_string(j);
    if (static_cast<std::int32_t>(e.size()) != h.d) {
      out.push_back(tag + " has " + std::to_string(e.size()) + " nodes, expected " +
                    std::to_string(h.d));
      continue;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] < 0 || e[i] >= h.n) out.push_back(tag + ": node out of range");
      if (i > 0 && e[i] == e[i - 1]) out.push_back(tag + ": repeated node");
    }
  }
  if (!out.empty()) throw ValidationError(std::move(out));
}

// format: first line "n d", then one hyperedge per line
inline Hypergraph parse_hypergraph(std::istream& in) {
  Hypergraph h;
  std::string line;
  std::int64_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    if (!have_header) {
      if (!(row >> h.n >> h.d))
        throw ValidationError("line " + std::to_string(lineno) + ": expected \"n d\" header");
      have_header = true;
      continue;
    }
    std::vector<std::int32_t> edge;
    std::int32_t v;
    while (row >> v) edge.push_back(v);
    if (!row.eof())
      throw ValidationError("line " + std::to_string(lineno) + ": malformed hyperedge");
    if (static_cast<std::int32_t>(edge.size()) != h.d)
      throw ValidationError("line " + std::to_string(lineno) + ": expected " +
                            std::to_string(h.d) + " node ids");
    std::sort(edge.begin(), edge.end());
    h.edges.push_back(std::move(edge));
  }
  if (!have_header) throw ValidationError("empty hypergraph file");
  validate(h);
  return h;
}

inline Hypergraph parse_hypergraph(const std::string& text) {
  std::istringstream in(text);
  return parse_hypergraph(in);
}

inline std::string format_hypergraph(const Hypergraph& h) {
  std::ostringstream out;
  out << h.n << ' ' << h.d << '\n';
  for (const auto& e : h.edges) {
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
    out << '\n';
  }
  return out.str();
}

// edges fully contained in S (S sorted)
inline std::int64_t induced_edge_count(const Hypergraph& h,
                                       const std::vector<std::int32_t>& s) {
  std::int64_t count = 0;
  for (const auto& e : h.edges) {
    bool inside = true;
    for (std::int32_t v : e)
      if (!std::binary_search(s.begin(), s.end(), v)) {
        inside = false;
        break;
      }
    if (inside) ++count;
  }
  return count;
}

// partial node coloring with values 1..d; 0 = unassigned
struct Coloring {
  std::vector<std::int8_t> color;

  explicit Coloring(std::int32_t n = 0) : color(n, 0) {}
  bool operator==(const Coloring&) const = default;
};

// edges inside S whose endpoints carry d distinct colors
inline std::int64_t rainbow_edge_count(const Hypergraph& h, const std::vector<std::int32_t>& s,
                                       const Coloring& phi) {
  std::int64_t count = 0;
  for (const auto& e : h.edges) {
    bool inside = true;
    std::uint32_t seen = 0;
    for (std::int32_t v : e) {
      if (!std::binary_search(s.begin(), s.end(), v) || phi.color[v] == 0) {
        inside = false;
        break;
      }
      const std::uint32_t bit = 1u << (phi.color[v] - 1);
      if (seen & bit) {
        inside = false;
        break;
      }
      seen |= bit;
    }
    if (inside) ++count;
  }
  return count;
}

namespace detail {

template <class F>
void for_each_node_subset(std::int32_t n, std::int32_t k, F&& fn) {
  std::vector<std::int32_t> s;
  fn(s);
  for (std::int32_t size = 1; size <= std::min(n, k); ++size) {
    s.assign(size, 0);
    for (std::int32_t i = 0; i < size; ++i) s[i] = i;
    while (true) {
      fn(s);
      std::int32_t pos = size - 1;
      while (pos >= 0 && s[pos] == n - size + pos) --pos;
      if (pos < 0) break;
      ++s[pos];
      for (std::int32_t i = pos + 1; i < size; ++i) s[i] = s[i - 1] + 1;
    }
  }
}

}  // namespace detail

struct DkshResult {
  std::vector<std::int32_t> nodes;
  std::int64_t value = 0;
};

// exhaustive densest-k-sub-hypergraph optimum; ties keep the first set in
// size-then-lexicographic order
inline DkshResult dksh_brute(const Hypergraph& h, std::int32_t k,
                             std::int64_t max_sets = 5'000'000) {
  validate(h);
  DkshResult out;
  std::int64_t visited = 0;
  detail::for_each_node_subset(h.n, k, [&](const std::vector<std::int32_t>& s) {
    if (++visited > max_sets) throw LimitError("dksh enumeration ceiling exceeded");
    const std::int64_t value = induced_edge_count(h, s);
    if (value > out.value) {
      out.value = value;
      out.nodes = s;
    }
  });
  return out;
}

struct ColoringResult {
  Coloring coloring;
  std::int64_t rainbow = 0;
};

// Repeated uniform colorings of S, keeping the best; each attempt hits a
// rainbow edge with probability d!/d^d, so the default attempt budget
// makes finding a near-best assignment overwhelmingly likely.
inline ColoringResult random_coloring(const Hypergraph& h, const std::vector<std::int32_t>& s,
                                      rng::Stream stream, std::int64_t attempts = 0) {
  validate(h);
  std::int64_t dpow = 1;
  for (std::int32_t i = 0; i < h.d; ++i) dpow *= h.d;
  if (attempts <= 0) attempts = 64 * dpow;

  ColoringResult best;
  best.coloring = Coloring(h.n);
  Coloring attempt(h.n);
  for (std::int64_t a = 0; a < attempts; ++a) {
    std::fill(attempt.color.begin(), attempt.color.end(), 0);
    for (std::int32_t v : s)
      attempt.color[v] = static_cast<std::int8_t>(1 + stream.below(h.d));
    const std::int64_t value = rainbow_edge_count(h, s, attempt);
    if (a == 0 || value > best.rainbow) {
      best.rainbow = value;
      best.coloring = attempt;
    }
  }
  return best;
}

struct McdshResult {
  std::vector<std::int32_t> nodes;
  Coloring coloring;
  std::int64_t value = 0;
};

// exhaustive colored optimum: all node sets of size <= k, all colorings
inline McdshResult mcdsh_brute(const Hypergraph& h, std::int32_t k,
                               std::int64_t max_evals = 5'000'000) {
  validate(h);
  McdshResult out;
  out.coloring = Coloring(h.n);
  std::int64_t visited = 0;
  detail::for_each_node_subset(h.n, k, [&](const std::vector<std::int32_t>& s) {
    std::int64_t colorings = 1;
    for (std::size_t i = 0; i < s.size(); ++i) colorings *= h.d;
    visited += colorings;
    if (visited > max_evals) throw LimitError("mcdsh enumeration ceiling exceeded");
    Coloring phi(h.n);
    for (std::int64_t code = 0; code < colorings; ++code) {
      std::int64_t rest = code;
      for (std::int32_t v : s) {
        phi.color[v] = static_cast<std::int8_t>(1 + rest % h.d);
        rest /= h.d;
      }
      const std::int64_t value = rainbow_edge_count(h, s, phi);
      if (value > out.value) {
        out.value = value;
        out.nodes = s;
        out.coloring = phi;
      }
    }
  });
  return out;
}

// random d-regular hypergraph with distinct edges
inline Hypergraph random_hypergraph(std::int32_t n, std::int32_t d, std::int32_t m,
                                    rng::Stream stream) {
  Hypergraph h;
  h.n = n;
  h.d = d;
  while (static_cast<std::int32_t>(h.edges.size()) < m) {
    std::vector<std::int32_t> edge;
    while (static_cast<std::int32_t>(edge.size()) < d) {
      const std::int32_t v = static_cast<std::int32_t>(stream.below(n));
      if (std::find(edge.begin(), edge.end(), v) == edge.end()) edge.push_back(v);
    }
    std::sort(edge.begin(), edge.end());
    if (std::find(h.edges.begin(), h.edges.end(), edge) == h.edges.end())
      h.edges.push_back(std::move(edge));
  }
  std::sort(h.edges.begin(), h.edges.end());
  return h;
}

}  // namespace balex
