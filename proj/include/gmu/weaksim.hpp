#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "gmu/core.hpp"
#include "gmu/digraph.hpp"
#include "gmu/entanglement.hpp"
#include "gmu/io.hpp"

namespace gmu {

// ---------------------------------------------------------------------------
// Weak simulations of a game by another: every move of the left game is
// answered by a nonempty simple path of the right game.  The relation is
// surjective on the left and functional from right to left (a right vertex
// determines the left vertex it simulates).
// ---------------------------------------------------------------------------

struct WeakSimulation {
  // gRh pairs.
  std::set<std::pair<std::string, std::string>> rel;
  // (g, g', h) -> the answering path h h1 ... hn, source included.
  std::map<std::tuple<std::string, std::string, std::string>,
           std::vector<std::string>>
      path;
};

// Each game simulates itself: answer every move by the move itself.
inline WeakSimulation identity_simulation(const Game& g) {
  WeakSimulation sim;
  for (const auto& p : g.positions()) sim.rel.insert({p, p});
  for (const auto& [a, b] : g.moves) sim.path[{a, b, a}] = {a, b};
  return sim;
}

struct SimReport {
  bool ok = true;
  std::vector<std::string> problems;

  void fail(const std::string& msg) {
    ok = false;
    if (problems.size() < 50) problems.push_back(msg);
  }
};

inline SimReport check_weak_simulation(const Game& g, const Game& h,
                                       const WeakSimulation& sim) {
  SimReport rep;
  for (const auto& [a, b] : sim.rel) {
    if (!g.has(a)) rep.fail("left position does not exist: " + a);
    if (!h.has(b)) rep.fail("right position does not exist: " + b);
  }
  std::set<std::string> covered;
  for (const auto& [a, b] : sim.rel) covered.insert(a);
  for (const auto& p : g.positions())
    if (!covered.count(p)) rep.fail("not surjective: no partner for " + p);
  std::map<std::string, std::string> left_of;
  for (const auto& [a, b] : sim.rel) {
    auto it = left_of.find(b);
    if (it != left_of.end() && it->second != a)
      rep.fail("not functional: " + b + " simulates both " + it->second +
               " and " + a);
    left_of.emplace(b, a);
  }
  for (const auto& [a, b] : sim.rel) {
    if (!g.has(a) || !h.has(b)) continue;
    for (const auto& a2 : g.successors(a))
      if (!sim.path.count({a, a2, b}))
        rep.fail("no path for move " + a + " -> " + a2 + " from " + b);
  }
  for (const auto& [key, pi] : sim.path) {
    const auto& [a, a2, b] = key;
    std::string where = a + " -> " + a2 + " from " + b;
    if (!g.has(a) || !g.has(a2) || !h.has(b)) {
      rep.fail("path over unknown positions: " + where);
      continue;
    }
    if (!sim.rel.count({a, b})) rep.fail("path for unrelated pair: " + where);
    if (!g.has_move(a, a2)) rep.fail("path for a non-move: " + where);
    if (pi.size() < 2) {
      rep.fail("empty path: " + where);
      continue;
    }
    if (pi.front() != b) rep.fail("path does not start at " + b + ": " + where);
    std::set<std::string> seen;
    for (const auto& v : pi)
      if (!seen.insert(v).second) rep.fail("path not simple: " + where);
    for (size_t i = 0; i + 1 < pi.size(); ++i)
      if (!h.has_move(pi[i], pi[i + 1]))
        rep.fail("path step " + pi[i] + " -> " + pi[i + 1] +
                 " is not a move: " + where);
    if (!sim.rel.count({a2, pi.back()}))
      rep.fail("path target " + pi.back() + " not related to " + a2 + ": " +
               where);
  }
  return rep;
}

// All left edges that some answering path routes through a given right
// vertex.  Keys with no incidences are absent.
inline std::map<std::string, std::set<std::pair<std::string, std::string>>>
edges_through(const WeakSimulation& sim) {
  std::map<std::string, std::set<std::pair<std::string, std::string>>> out;
  for (const auto& [key, pi] : sim.path) {
    const auto& [a, a2, b] = key;
    for (const auto& v : pi) out[v].insert({a, a2});
  }
  return out;
}

inline SimReport check_star_property(const Game& g, const Game& h,
                                     const WeakSimulation& sim) {
  (void)h;
  SimReport rep;
  GirthInfo gi = girth_undirected(underlying_digraph(g));
  if (!girth_at_least(gi, 4)) {
    if (gi.has_loop) rep.fail("left game has a loop");
    if (gi.has_two_cycle) rep.fail("left game has an opposed move pair");
    if (gi.shortest_cycle && *gi.shortest_cycle < 4)
      rep.fail("left game has an undirected cycle of length " +
               std::to_string(*gi.shortest_cycle));
  }
  for (const auto& [v, es] : edges_through(sim)) {
    for (auto it = es.begin(); it != es.end(); ++it)
      for (auto jt = std::next(it); jt != es.end(); ++jt) {
        std::set<std::string> span{it->first, it->second, jt->first,
                                   jt->second};
        if (span.size() != 3)
          rep.fail("edges " + it->first + "->" + it->second + " and " +
                   jt->first + "->" + jt->second + " meet at " + v +
                   " but share no endpoint");
      }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Star data: the edges through a vertex form a star; its center, and the
// derived vertex projection f used to place cops.
// ---------------------------------------------------------------------------

struct StarData {
  std::map<std::string, std::set<std::pair<std::string, std::string>>> through;
  std::map<std::string, std::string> center;  // defined where |through| >= 2
  std::map<std::string, std::string> f;       // defined where through != {}
};

inline StarData star_data(const Game& g, const Game& h,
                          const WeakSimulation& sim) {
  (void)g;
  StarData sd;
  sd.through = edges_through(sim);
  for (const auto& [v, es] : sd.through) {
    check(!es.empty(), "empty incidence set stored");
    if (es.size() == 1) {
      const auto& [a, b] = *es.begin();
      bool has_pred = !h.predecessors(v).empty();
      sd.f[v] = has_pred ? b : a;
      continue;
    }
    std::set<std::string> cand{es.begin()->first, es.begin()->second};
    for (const auto& [a, b] : es) {
      std::set<std::string> keep;
      if (cand.count(a)) keep.insert(a);
      if (cand.count(b)) keep.insert(b);
      cand = std::move(keep);
    }
    check(cand.size() == 1,
          "edges through " + v + " do not form a star with a unique center");
    sd.center[v] = *cand.begin();
    sd.f[v] = *cand.begin();
  }
  return sd;
}

// ---------------------------------------------------------------------------
// Covers at the game level, and lifting a simulation through a cover.
// ---------------------------------------------------------------------------

struct GameCover {
  Game domain;
  Game codomain;
  std::map<std::string, std::string> rho;  // domain position -> codomain
};

inline bool is_game_cover(const GameCover& c, std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  for (const auto& p : c.domain.positions()) {
    auto it = c.rho.find(p);
    if (it == c.rho.end()) return fail("no image for " + p);
    if (!c.codomain.has(it->second))
      return fail("image of " + p + " does not exist");
    if (c.domain.kind_of(p) != c.codomain.kind_of(it->second))
      return fail("kind changes under the map at " + p);
  }
  if (!c.domain.start.empty()) {
    if (c.codomain.start.empty() ||
        c.rho.at(c.domain.start) != c.codomain.start)
      return fail("start is not preserved");
  } else {
    std::set<std::string> hit;
    for (const auto& [p, q] : c.rho) hit.insert(q);
    for (const auto& q : c.codomain.positions())
      if (!hit.count(q)) return fail("map is not surjective at " + q);
  }
  for (const auto& p : c.domain.positions()) {
    std::set<std::string> images;
    for (const auto& s : c.domain.successors(p)) {
      if (!c.codomain.has_move(c.rho.at(p), c.rho.at(s)))
        return fail("move " + p + " -> " + s + " has no image move");
      if (!images.insert(c.rho.at(s)).second)
        return fail("two successors of " + p + " share the image " +
                    c.rho.at(s));
    }
    if (images.size() != c.codomain.successors(c.rho.at(p)).size())
      return fail("successors of " + p + " miss an image successor");
  }
  return true;
}

// The unravelled move graph as a game over the tree vertices, every copy
// keeping the kind, rank, and label of the position it covers.
inline GameCover cover_of_unravelling(const Game& h, const Unravelling& u) {
  Digraph d = underlying_digraph(h);
  check(d.n == u.cover.codomain.n, "unravelling is of a different digraph");
  for (int v = 0; v < d.n; ++v)
    check(d.vertex_name(v) == u.cover.codomain.vertex_name(v),
          "unravelling is of a different digraph");
  GameCover out;
  out.codomain = h;
  out.domain.name = "unravel." + h.name;
  for (int i = 0; i < u.tree.n; ++i) {
    std::string id = u.tree.vertex_name(i);
    std::string img = d.vertex_name(u.cover.map[i]);
    out.rho[id] = img;
    out.domain.kind[id] = h.kind_of(img);
    if (is_player(h.kind_of(img))) out.domain.rank[id] = h.rank_of(img);
    if (h.kind_of(img) == Kind::Draw) out.domain.label[id] = h.label_of(img);
  }
  for (int i = 0; i < u.tree.n; ++i)
    if (i != u.tree.root)
      out.domain.moves.insert(
          {u.tree.vertex_name(u.tree.parent[i]), u.tree.vertex_name(i)});
  for (auto [x, r] : u.tree.back)
    out.domain.moves.insert(
        {u.tree.vertex_name(x), u.tree.vertex_name(r)});
  out.domain.start = u.tree.vertex_name(u.tree.root);
  if (h.start.empty()) out.domain.start.clear();
  require_valid(out.domain);
  return out;
}

// Related pairs pull back along the cover; answering paths lift uniquely
// step by step, because a cover restricts to a bijection on successors.
inline WeakSimulation lift_through_cover(const WeakSimulation& sim,
                                         const GameCover& cover) {
  std::string why;
  check(is_game_cover(cover, &why), "not a cover: " + why);
  std::map<std::string, std::string> left_of;
  for (const auto& [a, b] : sim.rel) left_of.emplace(b, a);
  WeakSimulation out;
  for (const auto& [kpos, img] : cover.rho) {
    auto it = left_of.find(img);
    if (it != left_of.end()) out.rel.insert({it->second, kpos});
  }
  for (const auto& [gpos, kpos] : out.rel) {
    const std::string& img = cover.rho.at(kpos);
    for (const auto& [key, pi] : sim.path) {
      const auto& [a, a2, b] = key;
      if (a != gpos || b != img) continue;
      std::vector<std::string> lifted{kpos};
      for (size_t i = 1; i < pi.size(); ++i) {
        std::optional<std::string> next;
        for (const auto& s : cover.domain.successors(lifted.back()))
          if (cover.rho.at(s) == pi[i]) {
            check(!next, "two lifts of one path step at " + lifted.back());
            next = s;
          }
        check(next.has_value(), "no lift of path step " + pi[i - 1] + " -> " +
                                    pi[i] + " at " + lifted.back());
        lifted.push_back(*next);
      }
      out.path[{a, a2, kpos}] = std::move(lifted);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Simulation text format: `rel g h` and `path g g' h : h0 h1 ... hn` lines.
// ---------------------------------------------------------------------------

inline WeakSimulation parse_simulation(std::istream& in) {
  WeakSimulation sim;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word) || word[0] == '#') continue;
    if (word == "rel") {
      std::string a, b, extra;
      if (!(ls >> a >> b) || (ls >> extra))
        throw ParseError(lineno, "expected: rel <g> <h>");
      sim.rel.insert({a, b});
    } else if (word == "path") {
      std::string a, a2, b, colon;
      if (!(ls >> a >> a2 >> b >> colon) || colon != ":")
        throw ParseError(lineno, "expected: path <g> <g'> <h> : <h0> ...");
      std::vector<std::string> pi;
      std::string v;
      while (ls >> v) pi.push_back(v);
      if (pi.empty()) throw ParseError(lineno, "path has no vertices");
      if (sim.path.count({a, a2, b}))
        throw ParseError(lineno, "duplicate path for " + a + " " + a2 + " " + b);
      sim.path[{a, a2, b}] = std::move(pi);
    } else {
      throw ParseError(lineno, "unknown directive: " + word);
    }
  }
  return sim;
}

inline WeakSimulation parse_simulation(const std::string& text) {
  std::istringstream in(text);
  return parse_simulation(in);
}

inline std::string serialize(const WeakSimulation& sim) {
  std::ostringstream out;
  for (const auto& [a, b] : sim.rel) out << "rel " << a << " " << b << "\n";
  for (const auto& [key, pi] : sim.path) {
    const auto& [a, a2, b] = key;
    out << "path " << a << " " << a2 << " " << b << " :";
    for (const auto& v : pi) out << " " << v;
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// From a simulation to a cops strategy.  The right game is unravelled at a
// vertex related to the thief's chosen start; the lifted simulation routes
// every thief move through the tree, the drop-and-recall strategy guards the
// tree side with k cops, and the f-images of those cops plus the last two
// thief vertices guard the left game with k + 2 cops in the retire-variant
// rules.
// ---------------------------------------------------------------------------

// The positions in the game reachable from one position, as a game pointed
// at that position.
inline Game reachable_subgame(const Game& g, const std::string& from) {
  check(g.has(from), "unknown position: " + from);
  std::set<std::string> keep;
  std::deque<std::string> work{from};
  keep.insert(from);
  while (!work.empty()) {
    std::string v = work.front();
    work.pop_front();
    for (const auto& s : g.successors(v))
      if (keep.insert(s).second) work.push_back(s);
  }
  Game out;
  out.name = g.name;
  for (const auto& p : keep) {
    out.kind[p] = g.kind_of(p);
    if (is_player(g.kind_of(p))) out.rank[p] = g.rank_of(p);
    if (g.kind_of(p) == Kind::Draw) out.label[p] = g.label_of(p);
  }
  for (const auto& [a, b] : g.moves)
    if (keep.count(a) && keep.count(b)) out.moves.insert({a, b});
  out.start = from;
  return out;
}

class SimCopsEngine {
 public:
  // Memory of the construction between rounds: the previous and current
  // halt points on the tree and the pending path target.
  struct Memory {
    int p = -1;  // -1 encodes "no previous halt point yet"
    int c = 0;
    int h = 0;
  };
  struct Response {
    std::set<std::string> cops;  // next guarded set on the left game
    Memory mem;
  };

  SimCopsEngine(Game left, const Game& right, const WeakSimulation& sim,
                std::string start, UnravelPolicy policy = {})
      : left_(std::move(left)), start_(std::move(start)) {
    check(left_.has(start_), "unknown start: " + start_);
    // Pick the least right partner of the start and unravel what it reaches.
    std::optional<std::string> h0;
    for (const auto& [a, b] : sim.rel)
      if (a == start_ && !h0) h0 = b;
    check(h0.has_value(), "start has no right partner");
    Game reach = reachable_subgame(right, *h0);
    Digraph rd = underlying_digraph(reach);
    policy.avoid_root_return = true;
    unravelling_ = unravel(rd, *rd.index_of(*h0), policy);
    tree_ = unravelling_.tree;
    cover_ = cover_of_unravelling(reach, unravelling_);
    check(tree_game().predecessors(root_name()).empty(),
          "the unravelling root has a predecessor");

    // Restrict the simulation to the reachable part, lift it to the tree,
    // and compute the star data there.
    WeakSimulation rsim;
    for (const auto& [a, b] : sim.rel)
      if (reach.has(b)) rsim.rel.insert({a, b});
    for (const auto& [key, pi] : sim.path) {
      const auto& [a, a2, b] = key;
      if (reach.has(b)) rsim.path[key] = pi;
    }
    sim_ = lift_through_cover(rsim, cover_);
    stars_ = star_data(left_, tree_game(), sim_);
    k_tree_ = return_nesting(tree_);

    for (int i = 0; i < tree_.n; ++i) index_[tree_.vertex_name(i)] = i;
    tour_.emplace(tree_);
    if (!left_.successors(start_).empty())
      check(f_of(root()) == start_, "root image does not project to the start");
  }

  const Game& left() const { return left_; }
  const Game& tree_game() const { return cover_.domain; }
  const TreeWithBackEdges& tree() const { return tree_; }
  const WeakSimulation& tree_sim() const { return sim_; }
  const StarData& stars() const { return stars_; }
  int k_tree() const { return k_tree_; }
  int root() const { return tree_.root; }
  std::string root_name() const { return tree_.vertex_name(tree_.root); }
  const std::string& start() const { return start_; }
  Memory initial_memory() const { return {-1, tree_.root, tree_.root}; }

  std::set<std::string> initial_cops() const { return {start_}; }

  // Cops' answer to the thief move g -> g', with every step of the proof's
  // construction asserted: the lifted path stays below the current halt
  // point, its cycle elimination is the tree path, the cut vertex lies on
  // the simulation part, the tree-side play is the drop-and-recall play,
  // and the four memory conditions hold afterwards.
  Response respond(const std::string& g, const std::string& g2,
                   const Memory& m) const {
    check(left_.has_move(g, g2), "not a move: " + g + " -> " + g2);
    check(f_of(m.c) == g, "halt point does not project to the thief vertex");

    auto it = sim_.path.find({g, g2, tree_.vertex_name(m.h)});
    check(it != sim_.path.end(),
          "no simulation path for " + g + " -> " + g2 + " at " +
              tree_.vertex_name(m.h));
    std::vector<int> pi;
    for (const auto& v : it->second) pi.push_back(index_.at(v));
    check(pi.size() >= 2 && pi.front() == m.h, "malformed lifted path");
    for (size_t i = 1; i < pi.size(); ++i)
      check(tour_->in_subtree(m.c, pi[i]),
            "simulation leaves the explored subtree (abandon branch)");

    std::vector<int> walk = tree_path(tree_, m.c, m.h);
    walk.insert(walk.end(), pi.begin() + 1, pi.end());
    std::vector<int> sigma;
    for (int v : walk) {
      auto at = std::find(sigma.begin(), sigma.end(), v);
      if (at != sigma.end())
        sigma.erase(std::next(at), sigma.end());
      else
        sigma.push_back(v);
    }
    check(sigma == tree_path(tree_, m.c, pi.back()),
          "cycle elimination is not the tree path");

    std::optional<int> cut;
    for (int v : sigma)
      if (f_defined(v) && f_of(v) == g2) {
        cut = v;
        break;
      }
    check(cut.has_value(), "no cut vertex projecting to " + g2);
    check(std::find(pi.begin(), pi.end(), *cut) != pi.end(),
          "cut vertex outside the simulation part");
    check(*cut != m.c && tour_->in_subtree(m.c, *cut),
          "halt point did not advance");

    std::vector<int> guard = canonical_cop_set(tree_, k_tree_, *cut);
    check(static_cast<int>(guard.size()) <= k_tree_, "tree guard too large");
    check(replay_canonical(m.c, *cut) == guard,
          "tree-side play deviates from the drop-and-recall play");

    Response r;
    r.mem = {m.c, *cut, pi.back()};
    for (int v : guard) r.cops.insert(f_of(v));
    r.cops.insert(g);
    r.cops.insert(g2);
    check(static_cast<int>(r.cops.size()) <= k_tree_ + 2,
          "left guard exceeds the cop budget");

    // The four conditions of the construction at the new thief position.
    check(f_of(*cut) == g2, "projection broken at the new halt point");
    for (int v : tree_path(tree_, *cut, pi.back()))
      check(f_of(v) == g || f_of(v) == g2,
            "pending path projects outside the last two thief vertices");
    check(std::find(pi.begin(), pi.end(), *cut) != pi.end() &&
              pi.back() == r.mem.h,
          "pending target is not the simulation target");
    for (int v : tree_path(tree_, m.c, *cut))
      check(v == *cut || !f_defined(v) || f_of(v) != g2,
            "cut vertex is not the first projection hit");
    return r;
  }

  bool f_defined(int v) const {
    return stars_.f.count(tree_.vertex_name(v)) != 0;
  }
  std::string f_of(int v) const {
    auto it = stars_.f.find(tree_.vertex_name(v));
    check(it != stars_.f.end(),
          "projection undefined at " + tree_.vertex_name(v));
    return it->second;
  }

 private:
  // The drop-and-recall evolution along the tree path from c (already
  // processed) down to c', which must land on the closed-form guard set.
  std::vector<int> replay_canonical(int c, int cut) const {
    auto rs = returns(tree_);
    auto depth = twbe_depths(tree_);
    std::vector<int> cops = canonical_cop_set(tree_, k_tree_, c);
    auto path = tree_path(tree_, c, cut);
    for (size_t i = 1; i < path.size(); ++i) {
      int v = path[i];
      if (!rs.count(v) || k_tree_ == 0) continue;
      if (static_cast<int>(cops.size()) >= k_tree_) {
        int out = cops[0];
        for (int x : cops)
          if (depth[x] < depth[out]) out = x;
        cops.erase(std::find(cops.begin(), cops.end(), out));
      }
      cops.insert(std::lower_bound(cops.begin(), cops.end(), v), v);
    }
    return cops;
  }

  Game left_;
  std::string start_;
  Unravelling unravelling_;
  TreeWithBackEdges tree_;
  GameCover cover_;
  WeakSimulation sim_;
  StarData stars_;
  int k_tree_ = 0;
  std::map<std::string, int> index_;
  std::optional<detail::EulerTour> tour_;
};

inline SimCopsEngine make_sim_cops_engine(const Game& left, const Game& right,
                                          const WeakSimulation& sim,
                                          const std::string& start,
                                          UnravelPolicy policy = {}) {
  return SimCopsEngine(left, right, sim, start, policy);
}

// Exhaustive run of the constructed response against every thief behavior
// from the engine's start.  Every reachable round re-checks the proof's
// conditions; the halt point descends strictly, so all plays are finite and
// end with the thief stuck.
struct SimCopsRun {
  bool ok = false;
  int k_tree = 0;
  long long rounds = 0;   // thief moves answered
  int max_depth = 0;      // longest play seen
  std::string problem;    // first failure, empty when ok
};

inline SimCopsRun run_sim_cops(const SimCopsEngine& eng,
                               long long round_budget = 1000000) {
  SimCopsRun out;
  out.k_tree = eng.k_tree();
  struct Node {
    std::string g;
    std::set<std::string> cops;
    SimCopsEngine::Memory mem;
    int depth;
  };
  std::deque<Node> work;
  work.push_back({eng.start(), eng.initial_cops(), eng.initial_memory(), 0});
  std::set<std::tuple<std::string, std::vector<std::string>, int, int, int>>
      seen;
  try {
    while (!work.empty()) {
      Node n = work.front();
      work.pop_front();
      std::vector<std::string> ckey(n.cops.begin(), n.cops.end());
      if (!seen.insert({n.g, ckey, n.mem.p, n.mem.c, n.mem.h}).second)
        continue;
      out.max_depth = std::max(out.max_depth, n.depth);
      for (const auto& g2 : eng.left().successors(n.g)) {
        if (n.cops.count(g2)) continue;
        check(++out.rounds <= round_budget, "round budget exhausted");
        if (eng.left().successors(g2).empty()) continue;  // skip, thief stuck
        auto r = eng.respond(n.g, g2, n.mem);
        // Legality in the retire-variant rules: everything guarded next to
        // the thief's new vertex was guarded before.
        for (const auto& v : r.cops)
          check(v == g2 || n.cops.count(v),
                "next guard set puts a fresh cop away from the thief");
        check(n.mem.c != r.mem.c, "halt point stalled");
        work.push_back({g2, r.cops, r.mem, n.depth + 1});
      }
    }
    out.ok = true;
  } catch (const std::exception& e) {
    out.problem = e.what();
  }
  return out;
}

// The same response packaged as an arena strategy on the explicit
// retire-variant game restricted to the engine's start (small instances).
struct SimCops {
  EntArena game;
  Strategy strategy;
  int k_tree = 0;
};

inline SimCops cops_strategy_from_simulation(
    const SimCopsEngine& eng, long long state_budget = 5000000) {
  SimCops out;
  out.k_tree = eng.k_tree();
  auto dg = std::make_shared<Digraph>(underlying_digraph(eng.left()));
  auto ea = std::make_shared<EntArena>(
      build_ent_arena(*dg, eng.k_tree() + 2, true, state_budget,
                      *dg->index_of(eng.start())));
  out.game = *ea;
  auto engine = std::make_shared<SimCopsEngine>(eng);

  auto encode = [](const std::string& g, const SimCopsEngine::Memory& m) {
    return g + "|" + std::to_string(m.p) + "|" + std::to_string(m.c) + "|" +
           std::to_string(m.h);
  };
  auto decode = [](const std::string& s) {
    auto p1 = s.find('|');
    auto p2 = s.find('|', p1 + 1);
    auto p3 = s.find('|', p2 + 1);
    SimCopsEngine::Memory m{std::stoi(s.substr(p1 + 1, p2 - p1 - 1)),
                            std::stoi(s.substr(p2 + 1, p3 - p2 - 1)),
                            std::stoi(s.substr(p3 + 1))};
    return std::make_pair(s.substr(0, p1), m);
  };

  // Shared by choice and update: what the cops do at a cops position given
  // the memory, as (next cop set, next memory).
  auto answer = [engine, dg](const EntArena::State& st, const std::string& g,
                             const SimCopsEngine::Memory& m) {
    std::string g2 = dg->vertex_name(st.v);
    std::set<std::string> cops;
    SimCopsEngine::Memory mem = m;
    if (g.empty()) {
      cops = engine->initial_cops();
      mem = engine->initial_memory();
    } else if (engine->left().successors(g2).empty()) {
      for (int x : st.cops) cops.insert(dg->vertex_name(x));  // plain skip
    } else {
      auto r = engine->respond(g, g2, m);
      cops = r.cops;
      mem = r.mem;
    }
    return std::make_pair(cops, mem);
  };

  Strategy s;
  s.initial = encode("", {-1, eng.root(), eng.root()});
  s.choice = [ea, dg, answer, decode](
                 int pos, const std::string& memstr) -> std::optional<int> {
    const auto& arena = ea->arena;
    const auto& st = ea->states[pos];
    if (st.v < 0 || !st.cops_turn) return std::nullopt;
    auto [g, m] = decode(memstr);
    auto [cops, mem] = answer(st, g, m);
    (void)mem;
    std::vector<int> want;
    for (const auto& v : cops) want.push_back(*dg->index_of(v));
    std::sort(want.begin(), want.end());
    for (int e : arena.out[pos])
      if (ea->states[arena.edges[e].dst].cops == want) return e;
    check(false, "constructed guard set is not a legal move");
    return std::nullopt;
  };
  s.update = [ea, dg, answer, decode, encode](const std::string& memstr,
                                              int edge) {
    const auto& e = ea->arena.edges[edge];
    const auto& dst = ea->states[e.dst];
    const auto& src = ea->states[e.src];
    if (dst.v >= 0 && !dst.cops_turn && src.v >= 0 && src.cops_turn) {
      // Cops just moved: recompute what choice computed.
      auto [g, m] = decode(memstr);
      auto [cops, mem] = answer(src, g, m);
      (void)cops;
      return encode(dg->vertex_name(src.v), mem);
    }
    return memstr;
  };
  out.strategy = std::move(s);
  return out;
}

// The numeric content of the bound: with a certified simulation of G by H,
// the left entanglement is at most the right one plus two.  Exact solves
// within the state budget; larger instances are reported as skipped.
struct EntBoundReport {
  bool skipped = false;
  bool holds = false;
  int left_ent = -1;
  int right_ent = -1;
};

inline EntBoundReport verify_entanglement_bound(const Game& g, const Game& h,
                                                const WeakSimulation& sim,
                                                long long budget = 5000000) {
  check(check_weak_simulation(g, h, sim).ok, "not a weak simulation");
  check(check_star_property(g, h, sim).ok, "no star property");
  EntBoundReport rep;
  try {
    rep.left_ent = entanglement(underlying_digraph(g), budget);
    rep.right_ent = entanglement(underlying_digraph(h), budget);
  } catch (const std::exception&) {
    rep.skipped = true;
    return rep;
  }
  rep.holds = rep.left_ent <= rep.right_ent + 2;
  return rep;
}

}  // namespace gmu
