#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gmu/arena.hpp"
#include "gmu/digraph.hpp"
#include "gmu/solvers.hpp"

namespace gmu {

// ---------------------------------------------------------------------------
// Cops-and-Thief games on digraphs.
//
// Positions are (v, C, turn) with |C| <= k.  Thief walks edges into cop-free
// vertices; Cops either skip, drop a fresh cop on the current vertex, or move
// a placed cop onto it.  A stuck Thief loses; every infinite play is won by
// Thief.  The retire variant enlarges Cops' moves: any subset of cops may be
// retired while skipping or while occupying the current vertex.
// ---------------------------------------------------------------------------

namespace detail {

// Vertices that survive when out-degree-zero vertices are removed repeatedly.
// The discarded region is closed under successors and free of cycles, so a
// thief entering it runs out of moves unaided; it never affects the winner.
inline std::vector<char> live_mask(const Digraph& g) {
  std::vector<int> outdeg(g.n, 0);
  std::vector<std::vector<int>> radj(g.n);
  for (int v = 0; v < g.n; ++v) {
    outdeg[v] = static_cast<int>(g.adj[v].size());
    for (int w : g.adj[v]) radj[w].push_back(v);
  }
  std::deque<int> dead;
  std::vector<char> alive(g.n, 1);
  for (int v = 0; v < g.n; ++v)
    if (outdeg[v] == 0) {
      alive[v] = 0;
      dead.push_back(v);
    }
  while (!dead.empty()) {
    int w = dead.front();
    dead.pop_front();
    for (int v : radj[w])
      if (alive[v] && --outdeg[v] == 0) {
        alive[v] = 0;
        dead.push_back(v);
      }
  }
  return alive;
}

// Ranks the subsets of {0..m-1} of size at most k: all subsets of one size
// are consecutive, and within a size the combinadic order is used.
struct SubsetIndexer {
  int m = 0, k = 0;
  std::vector<std::vector<long long>> binom;  // binom[i][j], j <= k
  std::vector<long long> offset;              // first index of each size
  long long count = 0;

  SubsetIndexer() = default;
  SubsetIndexer(int m_, int k_) : m(m_), k(k_) {
    binom.assign(m + 1, std::vector<long long>(k + 1, 0));
    for (int i = 0; i <= m; ++i) {
      binom[i][0] = 1;
      for (int j = 1; j <= std::min(i, k); ++j)
        binom[i][j] = binom[i - 1][j - 1] + (i - 1 >= j ? binom[i - 1][j] : 0);
    }
    offset.assign(k + 2, 0);
    for (int s = 0; s <= k; ++s) offset[s + 1] = offset[s] + binom[m][s];
    count = offset[k + 1];
  }

  long long index(const std::vector<int>& sorted) const {
    int s = static_cast<int>(sorted.size());
    long long r = offset[s];
    for (int i = 0; i < s; ++i) r += binom[sorted[i]][i + 1];
    return r;
  }

  std::vector<int> subset(long long idx) const {
    int s = 0;
    while (s + 1 <= k && offset[s + 1] <= idx) ++s;
    long long r = idx - offset[s];
    std::vector<int> out(s);
    int hi = m - 1;
    for (int i = s; i >= 1; --i) {
      while (binom[hi][i] > r) --hi;
      out[i - 1] = hi;
      r -= binom[hi][i];
      --hi;
    }
    return out;
  }
};

}  // namespace detail

// Exact winner of the k-cops game by backward induction over the pruned
// state space (a reachability attractor on the implicit position graph).
inline bool ent_game_winner(const Digraph& g, int k,
                            long long state_budget = 5000000) {
  auto alive = detail::live_mask(g);
  std::vector<int> live, to_live(g.n, -1);
  for (int v = 0; v < g.n; ++v)
    if (alive[v]) {
      to_live[v] = static_cast<int>(live.size());
      live.push_back(v);
    }
  const int m = static_cast<int>(live.size());
  if (m == 0) return true;  // every play drains into the pruned region
  k = std::min(k, m);
  detail::SubsetIndexer subsets(m, k);

  std::vector<std::vector<int>> adj(m), radj(m);
  for (int a = 0; a < m; ++a)
    for (int w : g.adj[live[a]])
      if (to_live[w] >= 0) {
        adj[a].push_back(to_live[w]);
        radj[to_live[w]].push_back(a);
      }

  // State ids: ((subset * m) + v) * 2 + turn, turn 0 = Cops, 1 = Thief.
  const long long n_states = subsets.count * m * 2;
  check(n_states <= state_budget, "cops game exceeds the state budget");
  auto id = [m](long long c, int v, int turn) { return (c * m + v) * 2 + turn; };

  std::vector<char> cops_win(n_states, 0);
  std::vector<int> remaining(n_states, 0);
  std::vector<long long> work;
  std::vector<char> in_c(m, 0);
  for (long long c = 0; c < subsets.count; ++c) {
    auto sub = subsets.subset(c);
    for (int x : sub) in_c[x] = 1;
    for (int v = 0; v < m; ++v) {
      int moves = 0;
      for (int w : adj[v])
        if (!in_c[w]) ++moves;
      long long t = id(c, v, 1);
      remaining[t] = moves;
      if (moves == 0) {
        cops_win[t] = 1;
        work.push_back(t);
      }
    }
    for (int x : sub) in_c[x] = 0;
  }

  while (!work.empty()) {
    long long s = work.back();
    work.pop_back();
    int turn = static_cast<int>(s & 1);
    int v = static_cast<int>((s >> 1) % m);
    long long c = (s >> 1) / m;
    auto sub = subsets.subset(c);
    auto push = [&](long long t) {
      if (!cops_win[t]) {
        cops_win[t] = 1;
        work.push_back(t);
      }
    };
    if (turn == 1) {
      // Cops predecessors choose a response leading here.
      bool v_in = std::binary_search(sub.begin(), sub.end(), v);
      if (!v_in) {
        push(id(c, v, 0));  // skip
      } else {
        std::vector<int> wo;  // the set without v
        for (int x : sub)
          if (x != v) wo.push_back(x);
        push(id(subsets.index(wo), v, 0));  // fresh drop
        std::vector<int> pred(wo.size() + 1);
        for (int x = 0; x < m; ++x) {  // moved a cop from x onto v
          if (x == v || std::binary_search(sub.begin(), sub.end(), x)) continue;
          std::merge(wo.begin(), wo.end(), &x, &x + 1, pred.begin());
          push(id(subsets.index(pred), v, 0));
        }
      }
    } else {
      // Thief predecessors lose one escape each time a successor falls.
      for (int u : radj[v]) {
        long long t = id(c, u, 1);
        if (!cops_win[t] && --remaining[t] == 0) {
          cops_win[t] = 1;
          work.push_back(t);
        }
      }
    }
  }

  long long empty = subsets.index({});
  for (int v = 0; v < m; ++v)
    if (!cops_win[id(empty, v, 0)]) return false;
  return true;
}

// Least number of cops that wins; at most the size of the pruned graph.
inline int entanglement(const Digraph& g, long long state_budget = 5000000) {
  for (int k = 0;; ++k)
    if (ent_game_winner(g, k, state_budget)) return k;
}

// ---------------------------------------------------------------------------
// Explicit desk-scale arenas for both game variants.  The initial choice of
// the thief is a dedicated root position with a move to every (v, {}, Cops).
// ---------------------------------------------------------------------------

struct EntArena {
  struct State {
    int v = -1;             // -1 on the root choice position
    std::vector<int> cops;  // sorted
    bool cops_turn = false;
  };
  Arena arena;
  std::vector<State> states;  // by arena position
  bool retire_variant = false;
  int k = 0;

  int position_of(int v, const std::vector<int>& cops, bool cops_turn) const {
    for (int p = 0; p < arena.size(); ++p)
      if (states[p].v == v && states[p].cops_turn == cops_turn &&
          states[p].cops == cops)
        return p;
    return -1;
  }
};

inline EntArena build_ent_arena(const Digraph& g, int k,
                                bool retire_variant = false,
                                long long state_budget = 5000000,
                                std::optional<int> initial = std::nullopt) {
  EntArena ea;
  ea.retire_variant = retire_variant;
  ea.k = k;
  ea.arena.name = "cops." + g.name;
  std::map<std::pair<std::vector<int>, std::pair<int, bool>>, int> index;
  std::deque<int> work;
  auto set_name = [&](const EntArena::State& s) {
    if (s.v < 0) return std::string("(pick)");
    std::string n = "(" + g.vertex_name(s.v) + " {";
    for (size_t i = 0; i < s.cops.size(); ++i)
      n += (i ? " " : "") + g.vertex_name(s.cops[i]);
    return n + (s.cops_turn ? "} cops)" : "} thief)");
  };
  auto touch = [&](int v, std::vector<int> cops, bool cops_turn) {
    auto key = std::make_pair(cops, std::make_pair(v, cops_turn));
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    check(static_cast<long long>(ea.arena.size()) < state_budget,
          "cops arena exceeds the state budget");
    EntArena::State st{v, std::move(cops), cops_turn};
    int id = ea.arena.add_position(cops_turn ? Owner::P0 : Owner::P1,
                                   set_name(st));
    ea.states.push_back(std::move(st));
    index.emplace(std::move(key), id);
    work.push_back(id);
    return id;
  };
  ea.arena.start = touch(-1, {}, false);
  while (!work.empty()) {
    int p = work.front();
    work.pop_front();
    // `states` may reallocate while expanding, so copy the descriptor.
    EntArena::State st = ea.states[p];
    if (st.v < 0) {
      if (initial) {
        ea.arena.add_edge(p, touch(*initial, {}, true));
      } else {
        for (int v = 0; v < g.n; ++v) ea.arena.add_edge(p, touch(v, {}, true));
      }
      continue;
    }
    if (st.cops_turn) {
      if (!retire_variant) {
        ea.arena.add_edge(p, touch(st.v, st.cops, false));  // skip
        if (static_cast<int>(st.cops.size()) < k) {
          std::vector<int> add = st.cops;
          add.insert(std::lower_bound(add.begin(), add.end(), st.v), st.v);
          ea.arena.add_edge(p, touch(st.v, add, false));
        }
        for (int x : st.cops) {
          std::vector<int> moved;
          for (int y : st.cops)
            if (y != x) moved.push_back(y);
          moved.insert(std::lower_bound(moved.begin(), moved.end(), st.v),
                       st.v);
          ea.arena.add_edge(p, touch(st.v, moved, false));
        }
      } else {
        // Any sub-team may stay, optionally occupying the current vertex.
        int c = static_cast<int>(st.cops.size());
        for (int mask = 0; mask < (1 << c); ++mask) {
          std::vector<int> kept;
          for (int i = 0; i < c; ++i)
            if (mask & (1 << i)) kept.push_back(st.cops[i]);
          ea.arena.add_edge(p, touch(st.v, kept, false));
          if (static_cast<int>(kept.size()) < k) {
            kept.insert(std::lower_bound(kept.begin(), kept.end(), st.v),
                        st.v);
            ea.arena.add_edge(p, touch(st.v, kept, false));
          }
        }
      }
    } else {
      for (int w : g.adj[st.v])
        if (!std::binary_search(st.cops.begin(), st.cops.end(), w))
          ea.arena.add_edge(p, touch(w, st.cops, true));
    }
  }
  return ea;
}

// Winner of the retire variant; cops may retire any sub-team while moving.
inline bool ent_variant_winner(const Digraph& g, int k,
                               long long state_budget = 5000000) {
  EntArena ea = build_ent_arena(g, k, true, state_budget);
  auto sol = solve_reachability(ea.arena, Owner::P1);
  return sol.winner[ea.arena.start] == Owner::P0;
}

// ---------------------------------------------------------------------------
// Trees with back edges.
// ---------------------------------------------------------------------------

struct TreeWithBackEdges {
  int n = 0;
  int root = 0;
  std::vector<int> parent;               // -1 at the root
  std::vector<std::pair<int, int>> back;  // (x, r) with r on x's root path
  std::vector<std::string> names;        // optional, size n

  std::string vertex_name(int v) const {
    if (v >= 0 && v < static_cast<int>(names.size())) return names[v];
    return "t" + std::to_string(v);
  }
};

inline std::vector<int> twbe_depths(const TreeWithBackEdges& t) {
  std::vector<int> d(t.n, -1);
  d[t.root] = 0;
  // Parents have smaller depth; resolve chains iteratively.
  std::function<int(int)> depth = [&](int v) -> int {
    if (d[v] >= 0) return d[v];
    return d[v] = depth(t.parent[v]) + 1;
  };
  for (int v = 0; v < t.n; ++v) depth(v);
  return d;
}

inline bool twbe_is_ancestor(const TreeWithBackEdges& t, int a, int x) {
  while (x != -1) {
    if (x == a) return true;
    x = t.parent[x];
  }
  return false;
}

inline std::vector<int> root_path(const TreeWithBackEdges& t, int v) {
  std::vector<int> path;
  for (int x = v; x != -1; x = t.parent[x]) path.push_back(x);
  std::reverse(path.begin(), path.end());
  return path;
}

// The tree path from an ancestor down to a vertex, both included.
inline std::vector<int> tree_path(const TreeWithBackEdges& t, int a, int b) {
  std::vector<int> path;
  int x = b;
  while (x != -1 && x != a) {
    path.push_back(x);
    x = t.parent[x];
  }
  check(x == a, "tree_path: source is not an ancestor of the target");
  path.push_back(a);
  std::reverse(path.begin(), path.end());
  return path;
}

inline TreeWithBackEdges make_twbe(int root, std::vector<int> parent,
                                   std::vector<std::pair<int, int>> back,
                                   std::vector<std::string> names = {}) {
  TreeWithBackEdges t;
  t.n = static_cast<int>(parent.size());
  t.root = root;
  t.parent = std::move(parent);
  t.back = std::move(back);
  t.names = std::move(names);
  check(0 <= root && root < t.n, "tree root out of range");
  check(t.parent[root] == -1, "tree root has a parent");
  for (int v = 0; v < t.n; ++v) {
    if (v == root) continue;
    check(0 <= t.parent[v] && t.parent[v] < t.n, "tree parent out of range");
    int steps = 0;
    for (int x = v; x != -1; x = t.parent[x])
      check(++steps <= t.n, "parent links contain a cycle");
  }
  for (auto [x, r] : t.back) {
    check(0 <= x && x < t.n && 0 <= r && r < t.n, "back edge out of range");
    check(twbe_is_ancestor(t, r, x), "back edge target is not an ancestor");
  }
  return t;
}

inline std::set<int> returns(const TreeWithBackEdges& t) {
  std::set<int> out;
  for (auto [x, r] : t.back) out.insert(r);
  return out;
}

namespace detail {

// Entry/exit stamps of an iterative preorder walk; u is in the subtree of v
// iff tin[v] <= tin[u] < tout[v].
struct EulerTour {
  std::vector<int> tin, tout;
  explicit EulerTour(const TreeWithBackEdges& t) : tin(t.n), tout(t.n) {
    std::vector<std::vector<int>> children(t.n);
    for (int v = 0; v < t.n; ++v)
      if (v != t.root) children[t.parent[v]].push_back(v);
    int clock = 0;
    std::vector<std::pair<int, size_t>> stack{{t.root, 0}};
    tin[t.root] = clock++;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < children[v].size()) {
        int c = children[v][next++];
        tin[c] = clock++;
        stack.push_back({c, 0});
      } else {
        tout[v] = clock;
        stack.pop_back();
      }
    }
  }
  bool in_subtree(int v, int u) const {
    return tin[v] <= tin[u] && tin[u] < tout[v];
  }
};

}  // namespace detail

// Number of returns on the root path that are hit from inside v's subtree.
inline int vertex_feedback(const TreeWithBackEdges& t, int v) {
  detail::EulerTour tour(t);
  int count = 0;
  for (int r : root_path(t, v)) {
    bool hit = false;
    for (auto [x, tgt] : t.back)
      if (tgt == r && tour.in_subtree(v, x)) {
        hit = true;
        break;
      }
    if (hit) ++count;
  }
  return count;
}

inline int feedback(const TreeWithBackEdges& t) {
  int best = 0;
  for (int v = 0; v < t.n; ++v) best = std::max(best, vertex_feedback(t, v));
  return best;
}

// Largest number of returns spanned by one back edge: for (x, r), the
// returns on the tree path r..x, both ends included.  Always >= feedback:
// a vertex of feedback m has back edges from its subtree into m returns
// above it, and the edge into the highest of them spans all m.  With this
// many cops the drop-and-recall strategy keeps every back-edge target
// guarded, which is what confines the thief to descending tree paths.
inline int return_nesting(const TreeWithBackEdges& t) {
  auto rs = returns(t);
  int best = 0;
  for (auto [x, r] : t.back) {
    int count = 0;
    for (int v : tree_path(t, r, x))
      if (rs.count(v)) ++count;
    best = std::max(best, count);
  }
  return best;
}

inline Digraph digraph_of(const TreeWithBackEdges& t) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < t.n; ++v)
    if (v != t.root) edges.push_back({t.parent[v], v});
  for (auto [x, r] : t.back) edges.push_back({x, r});
  Digraph d = make_digraph(t.n, edges, "tree");
  for (int v = 0; v < t.n; ++v) d.names.push_back(t.vertex_name(v));
  return d;
}

// For a simple path the target of its last back edge lies above everything
// visited, and a path that never leaves the subtree of its source uses tree
// edges only.  True iff both conclusions hold (they must, on valid input).
inline bool check_simple_path_lemma(const TreeWithBackEdges& t,
                                    const std::vector<int>& path) {
  check(!path.empty(), "empty path");
  std::set<int> seen;
  for (int v : path)
    check(seen.insert(v).second, "path is not simple");
  int last_return = -1;
  int blen = 0;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    int a = path[i], b = path[i + 1];
    if (t.parent[b] == a) continue;
    bool is_back = false;
    for (auto [x, r] : t.back) is_back = is_back || (x == a && r == b);
    check(is_back, "step is neither a tree edge nor a back edge");
    ++blen;
    last_return = b;
  }
  if (blen > 0)
    for (int v : path)
      if (!twbe_is_ancestor(t, last_return, v)) return false;
  bool inside = true;
  for (int v : path) inside = inside && twbe_is_ancestor(t, path.front(), v);
  if (inside && blen != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Covers and unravellings.
// ---------------------------------------------------------------------------

struct CoverMap {
  Digraph domain, codomain;
  int domain_root = -1, codomain_root = -1;  // both set: pointed cover
  std::vector<int> map;                      // domain vertex -> codomain vertex
};

inline bool is_cover(const CoverMap& c, std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (static_cast<int>(c.map.size()) != c.domain.n)
    return fail("map size mismatch");
  for (int v = 0; v < c.domain.n; ++v)
    if (c.map[v] < 0 || c.map[v] >= c.codomain.n)
      return fail("map value out of range");
  bool pointed = c.domain_root >= 0 || c.codomain_root >= 0;
  if (pointed) {
    if (c.domain_root < 0 || c.codomain_root < 0)
      return fail("only one side is pointed");
    if (c.map[c.domain_root] != c.codomain_root)
      return fail("root is not preserved");
  } else {
    std::vector<char> hit(c.codomain.n, 0);
    for (int v = 0; v < c.domain.n; ++v) hit[c.map[v]] = 1;
    for (int h = 0; h < c.codomain.n; ++h)
      if (!hit[h]) return fail("map is not surjective");
  }
  for (int v = 0; v < c.domain.n; ++v) {
    std::set<int> images;
    for (int w : c.domain.adj[v]) {
      if (!c.codomain.has_edge(c.map[v], c.map[w]))
        return fail("edge " + c.domain.vertex_name(v) + "->" +
                    c.domain.vertex_name(w) + " has no image");
      if (!images.insert(c.map[w]).second)
        return fail("two successors of " + c.domain.vertex_name(v) +
                    " share an image");
    }
    if (images.size() != c.codomain.adj[c.map[v]].size())
      return fail("successors of " + c.domain.vertex_name(v) +
                  " miss an image successor");
  }
  return true;
}

struct UnravelPolicy {
  int max_repeats = 1;     // path copies of an image before a back edge
  bool share_nearest = true;  // back edge to the deepest copy (else highest)
  bool avoid_root_return = false;  // never aim a back edge at the root
  long long node_budget = 200000;
};

struct Unravelling {
  TreeWithBackEdges tree;
  CoverMap cover;
};

// Depth-first expansion from the point; meeting an image already on the
// current root path yields a back edge once enough copies accumulated.
inline Unravelling unravel(const Digraph& g, int root,
                           UnravelPolicy policy = {}) {
  check(0 <= root && root < g.n, "unravel: root out of range");
  {
    std::vector<char> seen(g.n, 0);
    std::deque<int> q{root};
    seen[root] = 1;
    int found = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int w : g.adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++found;
          q.push_back(w);
        }
    }
    check(found == g.n, "unravel: not all vertices reachable from the root");
  }
  std::vector<int> parent, image;
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> back;
  std::vector<std::vector<int>> on_path(g.n);
  std::vector<int> copies(g.n, 0);
  auto new_node = [&](int img, int par) {
    check(static_cast<long long>(parent.size()) < policy.node_budget,
          "unravel: node budget exhausted");
    parent.push_back(par);
    image.push_back(img);
    names.push_back(g.vertex_name(img) + "." + std::to_string(copies[img]++));
    return static_cast<int>(parent.size()) - 1;
  };
  std::function<void(int)> expand = [&](int kv) {
    for (int w : g.adj[image[kv]]) {
      const auto& cps = on_path[w];
      int target = -1;
      if (static_cast<int>(cps.size()) >= policy.max_repeats) {
        target = policy.share_nearest ? cps.back() : cps.front();
        if (policy.avoid_root_return && target == 0) {
          if (cps.size() >= 2)
            target = policy.share_nearest ? cps.back() : cps[1];
          else
            target = -1;  // grow a second copy instead
        }
      }
      if (target >= 0) {
        back.push_back({kv, target});
      } else {
        int kw = new_node(w, kv);
        on_path[w].push_back(kw);
        expand(kw);
        on_path[w].pop_back();
      }
    }
  };
  int kr = new_node(root, -1);
  on_path[root].push_back(kr);
  expand(kr);
  on_path[root].pop_back();

  Unravelling u;
  u.tree = make_twbe(kr, parent, back, names);
  u.cover.domain = digraph_of(u.tree);
  u.cover.codomain = g;
  u.cover.domain_root = kr;
  u.cover.codomain_root = root;
  u.cover.map = image;
  std::string why;
  check(is_cover(u.cover, &why), "unravel produced a non-cover: " + why);
  return u;
}

// ---------------------------------------------------------------------------
// The canonical cops strategy on a tree with back edges: drop on every
// visited return; when the team is full, recall the cop closest to the root.
// Positional in the (v, C, turn) arena.
// ---------------------------------------------------------------------------

// Cop set after the thief walked the tree path down to h: the returns on the
// root path whose tree path to h carries at most k returns.
inline std::vector<int> canonical_cop_set(const TreeWithBackEdges& t, int k,
                                          int h) {
  auto rs = returns(t);
  auto path = root_path(t, h);
  std::vector<int> rets;
  for (int v : path)
    if (rs.count(v)) rets.push_back(v);
  std::vector<int> out;
  for (size_t i = 0; i < rets.size(); ++i)
    if (static_cast<int>(rets.size() - i) <= k) out.push_back(rets[i]);
  std::sort(out.begin(), out.end());
  return out;
}

struct CanonicalCops {
  EntArena game;  // restricted to plays that start at the root
  Strategy strategy;  // for Cops (P0), positional
};

// The canonical strategy guards root-start plays; a thief released deep in
// the tree can race the recall rule around back edges, so the arena pins the
// initial choice to the root.  The strategy keeps the deepest k visited
// returns occupied; that blocks every back edge only when no back edge
// spans more than k returns, hence the return_nesting precondition (plain
// feedback is not enough: a 6-vertex tree of feedback 3 but nesting 4 beats
// the 3-cop recall rule, see the regression tests).
// Edge choices of the drop-and-recall rule: occupy every visited return,
// recalling the cop closest to the root (smallest index on ties) when the
// team is full.  No precondition; callers decide whether k is large enough.
inline std::vector<std::optional<int>> canonical_choices(
    const TreeWithBackEdges& t, int k, const EntArena& game) {
  auto rs = returns(t);
  auto depth = twbe_depths(t);
  std::vector<std::optional<int>> choice(game.arena.size());
  for (int p = 0; p < game.arena.size(); ++p) {
    const auto& st = game.states[p];
    if (st.v < 0 || !st.cops_turn) continue;
    std::vector<int> want = st.cops;
    if (rs.count(st.v) && k > 0) {
      if (static_cast<int>(want.size()) >= k) {
        int out = want[0];
        for (int x : want)
          if (depth[x] < depth[out]) out = x;
        want.erase(std::find(want.begin(), want.end(), out));
      }
      want.insert(std::lower_bound(want.begin(), want.end(), st.v), st.v);
    }
    for (int e : game.arena.out[p])
      if (game.states[game.arena.edges[e].dst].cops == want) {
        choice[p] = e;
        break;
      }
    check(choice[p].has_value(), "canonical move not present in the arena");
  }
  return choice;
}

inline CanonicalCops canonical_cops_strategy(const TreeWithBackEdges& t,
                                             int k,
                                             long long state_budget = 5000000) {
  check(k >= return_nesting(t), "fewer cops than the deepest back-edge span");
  CanonicalCops cc;
  cc.game = build_ent_arena(digraph_of(t), k, false, state_budget, t.root);
  cc.strategy = Strategy::positional(canonical_choices(t, k, cc.game));
  return cc;
}

}  // namespace gmu
