#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ttc/bitset.hpp"
#include "ttc/error.hpp"

namespace ttc {

// Undirected graph on indexed vertices with bitset adjacency rows.
// No self-loops; adjacency kept symmetric by construction.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : n_(n), rows_(n, Bitset(n)) {}

  int n() const { return n_; }
  bool adjacent(int u, int v) const { return rows_[u].test(v); }
  const Bitset& row(int u) const { return rows_[u]; }
  int degree(int u) const { return rows_[u].count(); }

  void add_edge(int u, int v) {
    check(u != v, Errc::InvalidInput, "self-loop");
    rows_[u].set(v);
    rows_[v].set(u);
  }

  long long edge_count() const {
    long long s = 0;
    for (int u = 0; u < n_; ++u) s += degree(u);
    return s / 2;
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < n_; ++u)
      for (int v : rows_[u].to_list())
        if (v > u) out.emplace_back(u, v);
    return out;
  }

  Graph complement() const {
    Graph g(n_);
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v)
        if (!adjacent(u, v)) g.add_edge(u, v);
    return g;
  }

  // Induced subgraph; vertex i of the result is verts[i].
  Graph induced(const std::vector<int>& verts) const {
    Graph g(static_cast<int>(verts.size()));
    for (size_t i = 0; i < verts.size(); ++i)
      for (size_t j = i + 1; j < verts.size(); ++j)
        if (adjacent(verts[i], verts[j])) g.add_edge(static_cast<int>(i), static_cast<int>(j));
    return g;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_ = 0;
  std::vector<Bitset> rows_;
};

struct SrgCertificate {
  long long v = 0, k = 0, lambda = 0, mu = 0;
  friend bool operator==(const SrgCertificate&, const SrgCertificate&) = default;
};

struct SrgOutcome {
  std::optional<SrgCertificate> cert;
  int witness_u = -1, witness_v = -1;  // counterexample pair when not SRG
  std::string reason;
};

namespace graphs {

// Connected components as vertex lists, ordered by least vertex; vertices
// ascending within each component.
inline std::vector<std::vector<int>> components(const Graph& g) {
  std::vector<int> comp(g.n(), -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < g.n(); ++s) {
    if (comp[s] >= 0) continue;
    int id = static_cast<int>(out.size());
    std::vector<int> stack{s}, verts;
    comp[s] = id;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      verts.push_back(u);
      for (int v : g.row(u).to_list())
        if (comp[v] < 0) {
          comp[v] = id;
          stack.push_back(v);
        }
    }
    std::sort(verts.begin(), verts.end());
    out.push_back(std::move(verts));
  }
  return out;
}

// Verifies strong regularity by direct common-neighbour counting.
inline SrgOutcome srg_check(const Graph& g) {
  check(g.n() >= 3, Errc::InvalidInput, "srg_check needs at least 3 vertices");
  check(components(g).size() == 1, Errc::NotConnected, "srg_check needs a connected graph");
  SrgOutcome out;
  long long k = g.degree(0);
  for (int u = 0; u < g.n(); ++u)
    if (g.degree(u) != k) {
      out.witness_u = 0;
      out.witness_v = u;
      out.reason = "not regular";
      return out;
    }
  long long lambda = -1, mu = -1;
  for (int u = 0; u < g.n(); ++u)
    for (int v = u + 1; v < g.n(); ++v) {
      long long common = g.row(u).count_and(g.row(v));
      long long& slot = g.adjacent(u, v) ? lambda : mu;
      if (slot < 0) slot = common;
      if (slot != common) {
        out.witness_u = u;
        out.witness_v = v;
        out.reason = g.adjacent(u, v) ? "lambda not constant" : "mu not constant";
        return out;
      }
    }
  if (lambda < 0) lambda = 0;  // complete graph: no non-adjacent pairs -> mu stays -1
  if (mu < 0) mu = 0;
  SrgCertificate c{g.n(), k, lambda, mu};
  check(c.k * (c.k - c.lambda - 1) == (c.v - c.k - 1) * c.mu, Errc::Falsified,
        "srg feasibility identity violated");
  out.cert = c;
  return out;
}

// All independent sets of size exactly s, each ascending, in lexicographic
// order. Branch and bound: branch on the least candidate vertex, prune when
// the candidate pool cannot complete the set.
inline std::vector<std::vector<int>> cocliques_of_size(const Graph& g, int s) {
  std::vector<std::vector<int>> out;
  if (s == 0) return {{}};
  std::vector<int> chosen;
  Bitset cand(g.n());
  for (int v = 0; v < g.n(); ++v) cand.set(v);
  auto rec = [&](auto&& self, const Bitset& pool) -> void {
    int need = s - static_cast<int>(chosen.size());
    if (need == 0) {
      out.push_back(chosen);
      return;
    }
    if (pool.count() < need) return;
    auto vs = pool.to_list();
    for (size_t i = 0; i + need <= vs.size(); ++i) {
      int v = vs[i];
      Bitset next = pool;
      next.reset(v);
      for (size_t j = 0; j < i; ++j) next.reset(vs[j]);
      // remove v and its neighbours from the pool
      for (int u : g.row(v).to_list()) next.reset(u);
      chosen.push_back(v);
      self(self, next);
      chosen.pop_back();
    }
  };
  rec(rec, cand);
  return out;
}

inline std::vector<std::vector<int>> cliques_of_size(const Graph& g, int s) {
  return cocliques_of_size(g.complement(), s);
}

struct T7Outcome {
  bool ok = false;
  std::string failed_stage;
  std::vector<std::vector<int>> cliques;          // the seven 6-cliques
  std::vector<std::pair<int, int>> labels;        // vertex -> {i, j}, 0-based clique ids
};

// Certifies isomorphism with the triangular graph T(7): finds the seven
// 6-cliques, labels each vertex by the pair of cliques containing it, and
// checks adjacency <=> intersecting labels.
inline T7Outcome t7_certificate(const Graph& g) {
  T7Outcome out;
  if (g.n() != 21) {
    out.failed_stage = "vertex count is not 21";
    return out;
  }
  auto cliques = cliques_of_size(g, 6);
  if (cliques.size() != 7) {
    out.failed_stage = "number of 6-cliques is " + std::to_string(cliques.size()) + ", not 7";
    return out;
  }
  out.cliques = cliques;
  out.labels.assign(21, {-1, -1});
  for (int ci = 0; ci < 7; ++ci)
    for (int v : cliques[ci]) {
      auto& [a, b] = out.labels[v];
      if (a < 0)
        a = ci;
      else if (b < 0)
        b = ci;
      else {
        out.failed_stage = "a vertex lies in more than two 6-cliques";
        return out;
      }
    }
  for (auto [a, b] : out.labels)
    if (b < 0) {
      out.failed_stage = "a vertex lies in fewer than two 6-cliques";
      return out;
    }
  for (int u = 0; u < 21; ++u)
    for (int v = u + 1; v < 21; ++v) {
      auto [a, b] = out.labels[u];
      auto [c, d] = out.labels[v];
      bool meet = a == c || a == d || b == c || b == d;
      if (meet != g.adjacent(u, v)) {
        out.failed_stage = "adjacency does not match label intersection";
        return out;
      }
    }
  out.ok = true;
  return out;
}

// ---- graph6 (bit-exact per the de-facto format) ----

inline std::string graph6_encode(const Graph& g) {
  std::string s;
  long long n = g.n();
  if (n < 63) {
    s.push_back(static_cast<char>(n + 63));
  } else {
    check(n <= 258047, Errc::UnsupportedFormat, "graph6: n too large");
    s.push_back(126);
    s.push_back(static_cast<char>(((n >> 12) & 63) + 63));
    s.push_back(static_cast<char>(((n >> 6) & 63) + 63));
    s.push_back(static_cast<char>((n & 63) + 63));
  }
  int acc = 0, nbits = 0;
  for (int v = 1; v < g.n(); ++v)
    for (int u = 0; u < v; ++u) {
      acc = (acc << 1) | (g.adjacent(u, v) ? 1 : 0);
      if (++nbits == 6) {
        s.push_back(static_cast<char>(acc + 63));
        acc = 0;
        nbits = 0;
      }
    }
  if (nbits > 0) s.push_back(static_cast<char>((acc << (6 - nbits)) + 63));
  return s;
}

inline Graph graph6_decode(const std::string& s) {
  check(!s.empty(), Errc::InvalidInput, "graph6: empty string");
  size_t pos = 0;
  long long n;
  if (static_cast<unsigned char>(s[0]) == 126) {
    check(s.size() >= 4, Errc::InvalidInput, "graph6: truncated header");
    n = (static_cast<long long>(s[1] - 63) << 12) | ((s[2] - 63) << 6) | (s[3] - 63);
    pos = 4;
  } else {
    n = s[0] - 63;
    pos = 1;
  }
  check(n >= 0, Errc::InvalidInput, "graph6: bad vertex count");
  Graph g(static_cast<int>(n));
  int acc = 0, nbits = 0;
  for (int v = 1; v < n; ++v)
    for (int u = 0; u < v; ++u) {
      if (nbits == 0) {
        check(pos < s.size(), Errc::InvalidInput, "graph6: truncated body");
        acc = s[pos++] - 63;
        check(acc >= 0 && acc < 64, Errc::InvalidInput, "graph6: bad byte");
        nbits = 6;
      }
      if ((acc >> --nbits) & 1) g.add_edge(u, v);
    }
  return g;
}

inline std::string edge_list_encode(const Graph& g) {
  std::string s;
  for (auto [u, v] : g.edges()) s += std::to_string(u) + " " + std::to_string(v) + "\n";
  return s;
}

enum class GraphFormat { Graph6, AdjacencyJson, EdgeList };

inline GraphFormat parse_format(const std::string& name) {
  if (name == "graph6") return GraphFormat::Graph6;
  if (name == "adjacency-json") return GraphFormat::AdjacencyJson;
  if (name == "edge-list") return GraphFormat::EdgeList;
  fail(Errc::UnsupportedFormat, "unsupported graph format: " + name);
}

}  // namespace graphs

}  // namespace ttc
