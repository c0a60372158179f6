#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "gmu/core.hpp"

namespace gmu {

// A finite directed graph with integer vertices and optional vertex names.
struct Digraph {
  std::string name;
  int n = 0;
  std::vector<std::vector<int>> adj;  // sorted, no duplicates
  std::vector<std::string> names;     // size n, or empty

  std::string vertex_name(int v) const {
    if (v >= 0 && v < static_cast<int>(names.size())) return names[v];
    return "v" + std::to_string(v);
  }

  std::optional<int> index_of(const std::string& id) const {
    for (int v = 0; v < static_cast<int>(names.size()); ++v)
      if (names[v] == id) return v;
    return std::nullopt;
  }

  bool has_edge(int a, int b) const {
    return std::binary_search(adj[a].begin(), adj[a].end(), b);
  }
};

inline Digraph make_digraph(int n, std::vector<std::pair<int, int>> edges,
                            std::string name = "digraph") {
  Digraph d;
  d.name = std::move(name);
  d.n = n;
  d.adj.assign(n, {});
  for (auto [a, b] : edges) {
    check(0 <= a && a < n && 0 <= b && b < n, "edge endpoint out of range");
    d.adj[a].push_back(b);
  }
  for (auto& row : d.adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return d;
}

// Vertices are the game's positions (in sorted id order), edges its moves.
inline Digraph underlying_digraph(const Game& g) {
  Digraph d;
  d.name = g.name;
  auto pos = g.positions();
  d.n = static_cast<int>(pos.size());
  d.names = pos;
  d.adj.assign(d.n, {});
  std::map<std::string, int> index;
  for (int v = 0; v < d.n; ++v) index[pos[v]] = v;
  for (const auto& [a, b] : g.moves) d.adj[index.at(a)].push_back(index.at(b));
  for (auto& row : d.adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return d;
}

// Cycle data of the undirected simple graph underlying a digraph, plus the
// loop / opposed-pair flags that the directed graph itself carries.
struct GirthInfo {
  bool has_loop = false;
  bool has_two_cycle = false;            // some (a,b) and (b,a) both present
  std::optional<int> shortest_cycle;     // in the undirected simple graph; >= 3
};

inline GirthInfo girth_undirected(const Digraph& d) {
  GirthInfo info;
  std::vector<std::vector<int>> und(d.n);
  for (int a = 0; a < d.n; ++a)
    for (int b : d.adj[a]) {
      if (a == b) { info.has_loop = true; continue; }
      if (b < a || !d.has_edge(b, a)) {
        und[a].push_back(b);
        und[b].push_back(a);
      }
      if (a < b && d.has_edge(b, a)) info.has_two_cycle = true;
    }
  for (auto& row : und) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  // BFS from every vertex; a cross or back edge at depths (da, db) closes a
  // cycle of length da + db + 1 through the root's BFS tree.
  int best = -1;
  std::vector<int> dist(d.n), parent(d.n);
  for (int s = 0; s < d.n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(parent.begin(), parent.end(), -1);
    std::deque<int> q{s};
    dist[s] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int w : und[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          parent[w] = v;
          q.push_back(w);
        } else if (w != parent[v]) {
          int len = dist[v] + dist[w] + 1;
          if (best < 0 || len < best) best = len;
        }
      }
    }
  }
  if (best >= 0) info.shortest_cycle = best;
  return info;
}

// "Girth at least k" in the strict sense used for simulations: no loops, no
// opposed directed pairs, and every undirected simple cycle has length >= k.
inline bool girth_at_least(const GirthInfo& info, int k) {
  if (info.has_loop || info.has_two_cycle) return false;
  return !info.shortest_cycle || *info.shortest_cycle >= k;
}

inline bool girth_at_least(const Digraph& d, int k) {
  return girth_at_least(girth_undirected(d), k);
}

}  // namespace gmu
