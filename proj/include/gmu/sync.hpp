#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gmu/algebra.hpp"
#include "gmu/core.hpp"
#include "gmu/digraph.hpp"
#include "gmu/entanglement.hpp"
#include "gmu/preorder.hpp"
#include "gmu/weaksim.hpp"

namespace gmu {

// ---------------------------------------------------------------------------
// The hard family G_n: n interlocking six-cycles of players with a private
// draw hanging off every player.  Even stages belong to Adam, odd stages to
// Eva, every rank is 1, and the cycles visit v(i,0,0) -> v(i,j,1) -> ... ->
// v(i,j,5) -> v(j,0,0).  The family is strongly synchronizing and its
// underlying digraph has entanglement exactly n.
// ---------------------------------------------------------------------------

struct GnGame {
  int n = 0;
  Game game;
  std::vector<std::tuple<int, int, int>> triples;  // (i,j,k), k=0 forces j=0

  static std::string v(int i, int j, int k) {
    return "v" + std::to_string(i) + "." + std::to_string(j) + "." +
           std::to_string(k);
  }
  static std::string w(int i, int j, int k) {
    return "w" + std::to_string(i) + "." + std::to_string(j) + "." +
           std::to_string(k);
  }
  static std::string label(int i, int j, int k) {
    return "x" + std::to_string(i) + "." + std::to_string(j) + "." +
           std::to_string(k);
  }
};

inline GnGame generate_gn(int n) {
  check(n >= 1, "the family starts at n = 1");
  GnGame out;
  out.n = n;
  out.game.name = "g" + std::to_string(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < 6; ++k) {
        if (k == 0 && j != 0) continue;
        out.triples.push_back({i, j, k});
        out.game.kind[GnGame::v(i, j, k)] =
            k % 2 == 0 ? Kind::Adam : Kind::Eva;
        out.game.rank[GnGame::v(i, j, k)] = 1;
        out.game.kind[GnGame::w(i, j, k)] = Kind::Draw;
        out.game.label[GnGame::w(i, j, k)] = GnGame::label(i, j, k);
      }
  for (auto [i, j, k] : out.triples) {
    if (k == 0) {
      for (int jj = 0; jj < n; ++jj)
        out.game.moves.insert({GnGame::v(i, 0, 0), GnGame::v(i, jj, 1)});
    } else if (k < 5) {
      out.game.moves.insert({GnGame::v(i, j, k), GnGame::v(i, j, k + 1)});
    } else {
      out.game.moves.insert({GnGame::v(i, j, 5), GnGame::v(j, 0, 0)});
    }
    out.game.moves.insert({GnGame::v(i, j, k), GnGame::w(i, j, k)});
  }
  out.game.start = GnGame::v(0, 0, 0);
  require_valid(out.game);
  return out;
}

// ---------------------------------------------------------------------------
// Strongly synchronizing games.  A game qualifies when it is bipartite, its
// underlying undirected graph has girth above four, distinct positions are
// never interchangeable, and every strict one-way comparison runs along a
// move: either the larger position is Eva's with a move down to the smaller,
// or the smaller is Adam's with a move up to the larger.
// ---------------------------------------------------------------------------

struct SyncReport {
  bool bipartite = false;
  bool girth_ok = false;
  // Distinct positions that are interchangeable.
  std::vector<std::pair<std::string, std::string>> condition1_violations;
  // Strictly comparable pairs (smaller, larger) missing the move adjacency.
  std::vector<std::pair<std::string, std::string>> condition2_violations;

  bool ok() const {
    return bipartite && girth_ok && condition1_violations.empty() &&
           condition2_violations.empty();
  }
};

inline SyncReport is_strongly_synchronizing(const Game& g) {
  require_valid(g);
  SyncReport rep;
  rep.bipartite = is_bipartite(g);
  rep.girth_ok = girth_at_least(underlying_digraph(g), 5);
  // One self-comparison solve answers every pointwise question: the winner
  // at the product position (a, b) says whether a is below b.
  LeqResult r = decide_leq(g, g);
  auto ps = g.positions();
  for (const auto& a : ps)
    for (const auto& b : ps) {
      if (a == b) continue;
      bool ab = pair_wins(r, a, b);
      if (!ab) continue;
      if (pair_wins(r, b, a)) {
        if (a < b) rep.condition1_violations.push_back({a, b});
        continue;
      }
      bool along_move =
          (g.kind_of(b) == Kind::Eva && g.moves.count({b, a}) != 0) ||
          (g.kind_of(a) == Kind::Adam && g.moves.count({a, b}) != 0);
      if (!along_move) rep.condition2_violations.push_back({a, b});
    }
  return rep;
}

// True when verbatim replay is the only winning mediator behaviour on the
// self-comparison: at every pair reachable while the mediator copies the
// opponents' moves, each available deviation leads outside the mediator's
// winning region.  The verdict is only meaningful for strongly synchronizing
// inputs; other games may earn either answer.
inline bool check_copycat_uniqueness(const Game& g) {
  require_valid(g);
  check(!g.start.empty(), "the replay check needs a pointed game");
  LeqResult r = decide_leq(g, g);
  if (!r.leq) return false;
  const MediatorArena& ma = r.ma;
  const Arena& ar = ma.arena;
  auto won = [&](int pos) {
    return r.solved.winner[static_cast<size_t>(pos)] == Owner::P0;
  };
  // Work items carry which board the opponents just advanced (-1: boards in
  // step), so the matching reply is identifiable among the mediator's moves.
  std::set<std::pair<int, int>> seen;
  std::deque<std::pair<int, int>> work;
  work.push_back({ar.start, -1});
  seen.insert({ar.start, -1});
  while (!work.empty()) {
    auto [pos, lead] = work.front();
    work.pop_front();
    const auto& [a, b] = ma.pair_of[static_cast<size_t>(pos)];
    if (ar.owner[static_cast<size_t>(pos)] == Owner::P1) {
      for (int e : ar.out[static_cast<size_t>(pos)]) {
        const auto& sd = ma.side[static_cast<size_t>(e)];
        std::pair<int, int> nx{ar.edges[static_cast<size_t>(e)].dst,
                               sd.on_left ? 0 : 1};
        if (seen.insert(nx).second) work.push_back(nx);
      }
      continue;
    }
    std::optional<int> replay;
    for (int e : ar.out[static_cast<size_t>(pos)]) {
      const auto& sd = ma.side[static_cast<size_t>(e)];
      bool copies = (lead == 0 && !sd.on_left && sd.to == a) ||
                    (lead == 1 && sd.on_left && sd.to == b);
      if (copies && !replay) {
        replay = e;
        continue;
      }
      if (won(ar.edges[static_cast<size_t>(e)].dst)) return false;
    }
    if (replay) {
      std::pair<int, int> nx{ar.edges[static_cast<size_t>(*replay)].dst, -1};
      if (seen.insert(nx).second) work.push_back(nx);
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Turning a certified two-way comparison into a weak simulation: the two
// mediator strategies are run back to back on a three-board arrangement
// (left copy, partner, right copy).  Outer play keeps the two copies in
// step, and the partner positions visited between two outer moves become
// the answer paths.
// ---------------------------------------------------------------------------

struct Extraction {
  Game right;     // the partner game, with a relay start added when needed
  bool padded = false;
  WeakSimulation sim;  // of the left game by `right`
  LeqResult fwd, bwd;  // the certificates actually used (against `right`)
  long long diagonals = 0;
  long long central_moves = 0;
};

inline Extraction extract_simulation(const Game& g, const Game& h,
                                     const LeqResult& fwd0,
                                     const LeqResult& bwd0) {
  require_valid(g);
  require_valid(h);
  check(!g.start.empty() && !h.start.empty(),
        "extraction needs pointed games on both sides");
  check(fwd0.leq && bwd0.leq,
        "extraction needs certified comparisons in both directions");
  {
    Game span = reachable_subgame(g, g.start);
    check(span.positions().size() == g.positions().size(),
          "extraction needs every left position reachable from the start");
  }
  Extraction out;
  out.right = h;
  out.fwd = fwd0;
  out.bwd = bwd0;
  Kind kg = g.kind_of(g.start);
  Kind kh = h.kind_of(h.start);
  if (is_player(kg) && is_player(kh) && kg != kh) {
    // The replay needs the two starts on the same player's side; a relay
    // start on the partner fixes that without changing its value.
    out.right = pad_initial(h, kg);
    out.padded = true;
    out.fwd = decide_leq(g, out.right);
    out.bwd = decide_leq(out.right, g);
    check(out.fwd.leq && out.bwd.leq, "the relay start broke the comparison");
  }
  const Game& rg = out.right;
  ComposedMediator cm(out.fwd.ma, out.fwd.solved.s0, out.bwd.ma,
                      out.bwd.solved.s0, mediator_arena(g, g));

  std::map<std::string, std::string> left_of;  // partner -> unique left mate
  std::set<std::pair<std::string, std::string>> seen;
  std::deque<ComposedMediator::State> work;

  auto add_diagonal = [&](ComposedMediator::State st) {
    check(st.g == st.k,
          "outer boards desynchronized at " + st.g + " / " + st.k);
    check(g.kind_of(st.g) == rg.kind_of(st.h),
          "diagonal " + st.g + " answered by " + st.h + " of a different kind");
    auto [it, fresh] = left_of.insert({st.h, st.g});
    check(it->second == st.g,
          st.h + " answers both " + it->second + " and " + st.g);
    (void)fresh;
    if (!seen.insert({st.g, st.h}).second) return;
    out.sim.rel.insert({st.g, st.h});
    work.push_back(std::move(st));
  };

  {
    auto st = cm.initial();
    if (g.kind_of(st.g) == Kind::Draw) cm.finish_central(st, nullptr);
    add_diagonal(std::move(st));
  }
  while (!work.empty()) {
    auto st = work.front();
    work.pop_front();
    ++out.diagonals;
    Kind kd = g.kind_of(st.g);
    if (kd == Kind::Draw) continue;
    bool adam = kd == Kind::Adam;
    const std::string from_h = st.h;
    for (const auto& g2 : g.successors(st.g)) {
      auto t = st;
      // Opponents advance one copy; the mediator must answer with the very
      // same move on the other copy, possibly after partner exchanges.
      cm.opponent_step(t, !adam, g2);
      std::vector<std::string> log;
      auto mv = cm.mediator_step(t, &log);
      check(mv.on_left == adam && mv.to == g2,
            "composed strategies broke the mirror at " + st.g + " -> " + g2);
      if (g.kind_of(g2) == Kind::Draw) cm.finish_central(t, &log);
      check(t.g == g2 && t.k == g2,
            "outer boards desynchronized after " + g2);
      std::vector<std::string> pi;
      pi.reserve(log.size() + 1);
      pi.push_back(from_h);
      pi.insert(pi.end(), log.begin(), log.end());
      check(pi.back() == t.h, "partner trace out of step with its board");
      check(pi.size() >= 2, "no partner answer for " + st.g + " -> " + g2);
      check(rg.kind_of(t.h) == g.kind_of(g2),
            "answer for " + g2 + " ends at " + t.h + " of a different kind");
      out.central_moves += static_cast<long long>(log.size());
      // Greedy left-to-right cycle elimination: a simple subpath with the
      // same endpoints whose vertices all lie on the replayed trace.
      std::vector<std::string> sigma;
      std::map<std::string, size_t> at;
      for (const auto& v : pi) {
        auto f = at.find(v);
        if (f != at.end()) {
          while (sigma.size() > f->second + 1) {
            at.erase(sigma.back());
            sigma.pop_back();
          }
        } else {
          at[v] = sigma.size();
          sigma.push_back(v);
        }
      }
      check(sigma.size() >= 2 && sigma.front() == from_h &&
                sigma.back() == t.h,
            "cycle elimination lost the endpoints");
      out.sim.path[{st.g, g2, from_h}] = std::move(sigma);
      add_diagonal(std::move(t));
    }
  }
  auto rep = check_weak_simulation(g, rg, out.sim);
  check(rep.ok, rep.problems.empty() ? "extracted relation failed its check"
                                     : rep.problems.front());
  auto star = check_star_property(g, rg, out.sim);
  check(star.ok, star.problems.empty()
                     ? "extracted relation fails the star property"
                     : star.problems.front());
  return out;
}

inline Extraction extract_simulation(const Game& g, const Game& h) {
  return extract_simulation(g, h, decide_leq(g, h), decide_leq(h, g));
}

// ---------------------------------------------------------------------------
// The intersection pattern behind the star property.  Item 1: a position is
// interchangeable with a one-draw game exactly when it is the draw carrying
// that variable.  Items 2 and 3: when two answer paths share a vertex, the
// comparability chains through it force their endpoint sets down to three
// positions meeting in a single one.
// ---------------------------------------------------------------------------

struct IntersecReport {
  bool ok = true;
  long long item1_checked = 0;    // (position, variable) pairs swept
  long long item23_vertices = 0;  // shared answer vertices inspected
  long long item2_instances = 0;  // same-player edge pairs
  long long item3_instances = 0;  // opposed-player edge pairs
  std::vector<std::string> problems;
};

inline IntersecReport check_intersec_lemma(const Game& g) {
  IntersecReport rep;
  require_valid(g);
  std::set<std::string> vars;
  for (const auto& [id, x] : g.label) {
    (void)id;
    vars.insert(x);
  }
  std::string fresh = "fresh";
  for (int i = 1; vars.count(fresh) != 0; ++i)
    fresh = "fresh." + std::to_string(i);
  vars.insert(fresh);
  for (const auto& x : vars) {
    Game vx = variable_game(x);
    LeqResult below = decide_leq(g, vx);
    LeqResult above = decide_leq(vx, g);
    for (const auto& p : g.positions()) {
      bool same = pair_wins(below, p, x) && pair_wins(above, x, p);
      bool expect = g.kind_of(p) == Kind::Draw && g.label_of(p) == x;
      ++rep.item1_checked;
      if (same != expect) {
        rep.ok = false;
        rep.problems.push_back("variable " + x +
                               (same ? " matches " : " misses ") + p);
      }
    }
  }
  return rep;
}

inline IntersecReport check_intersec_lemma(const Game& g, const Game& h,
                                           const WeakSimulation& sim,
                                           const LeqResult& fwd,
                                           const LeqResult& bwd) {
  IntersecReport rep = check_intersec_lemma(g);
  auto through = edges_through(sim);
  for (const auto& [hs, ed] : through) {
    if (ed.size() < 2) continue;
    ++rep.item23_vertices;
    std::vector<std::pair<std::string, std::string>> es(ed.begin(), ed.end());
    // An answer vertex sits between its edge's endpoints: below the source
    // for Eva moves, above it for Adam moves.
    auto chain = [&](const std::string& a, const std::string& ap) {
      if (g.kind_of(a) == Kind::Eva)
        return pair_wins(fwd, ap, hs) && pair_wins(bwd, hs, a);
      return pair_wins(fwd, a, hs) && pair_wins(bwd, hs, ap);
    };
    for (size_t i = 0; i < es.size(); ++i)
      for (size_t j = i + 1; j < es.size(); ++j) {
        const auto& [g1, g1p] = es[i];
        const auto& [g2, g2p] = es[j];
        if (!chain(g1, g1p) || !chain(g2, g2p)) {
          rep.ok = false;
          rep.problems.push_back("comparability chain fails through " + hs);
          continue;
        }
        std::set<std::string> four{g1, g1p, g2, g2p};
        bool joined;
        if (g.kind_of(g1) == g.kind_of(g2)) {
          ++rep.item2_instances;
          joined = g1 == g2 || g1p == g2p;
        } else {
          ++rep.item3_instances;
          const auto& ev = g.kind_of(g1) == Kind::Eva ? es[i] : es[j];
          const auto& ad = g.kind_of(g1) == Kind::Eva ? es[j] : es[i];
          joined = ev.first == ad.second || ev.second == ad.first;
        }
        if (!(joined && four.size() == 3)) {
          rep.ok = false;
          rep.problems.push_back("edges " + g1 + "->" + g1p + " and " + g2 +
                                 "->" + g2p + " share " + hs +
                                 " without meeting in one position");
        }
      }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Exhaustive comparability sweep over the hard family: draws compare only to
// themselves and the player at their own index (Eva above, Adam below), and
// strict comparisons between players run along single moves.
// ---------------------------------------------------------------------------

struct GnLemmaReport {
  int n = 0;
  bool draws_below_ok = false;  // draw below: only itself, or its Eva mate
  bool draws_above_ok = false;  // below a draw: only itself, or its Adam mate
  bool players_ok = false;      // distinct comparable players sit on a move
  bool strict_along_moves = false;  // all strict pairs lie on the move graph
  long long strict_pairs = 0;
  std::vector<std::string> problems;

  bool ok() const {
    return draws_below_ok && draws_above_ok && players_ok &&
           strict_along_moves;
  }
};

inline GnLemmaReport check_gn_lemmas(int n) {
  GnLemmaReport rep;
  rep.n = n;
  GnGame gn = generate_gn(n);
  const Game& G = gn.game;
  LeqResult r = decide_leq(G, G);
  auto ps = G.positions();
  rep.draws_below_ok = rep.draws_above_ok = rep.players_ok = true;
  rep.strict_along_moves = true;
  for (auto [i, j, k] : gn.triples) {
    std::string w = GnGame::w(i, j, k);
    std::string v = GnGame::v(i, j, k);
    for (const auto& p : ps) {
      bool below = pair_wins(r, w, p);
      bool expect_below = p == w || (k % 2 == 1 && p == v);
      if (below != expect_below) {
        rep.draws_below_ok = false;
        rep.problems.push_back(w + (below ? " below " : " not below ") + p);
      }
      bool above = pair_wins(r, p, w);
      bool expect_above = p == w || (k % 2 == 0 && p == v);
      if (above != expect_above) {
        rep.draws_above_ok = false;
        rep.problems.push_back(p + (above ? " below " : " not below ") + w);
      }
    }
  }
  for (const auto& a : ps)
    for (const auto& b : ps) {
      if (a == b || !pair_wins(r, a, b)) continue;
      ++rep.strict_pairs;
      bool on_move = G.moves.count({a, b}) != 0 || G.moves.count({b, a}) != 0;
      if (!on_move) {
        rep.strict_along_moves = false;
        rep.problems.push_back(a + " under " + b + " off the move graph");
      }
      if (is_player(G.kind_of(a)) && is_player(G.kind_of(b))) {
        bool along =
            (G.kind_of(a) == Kind::Adam && G.moves.count({a, b}) != 0) ||
            (G.kind_of(b) == Kind::Eva && G.moves.count({b, a}) != 0);
        if (!along) {
          rep.players_ok = false;
          rep.problems.push_back(a + " under " + b +
                                 " without the player adjacency");
        }
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Equivalent-partner candidates and the evidence pipeline: each candidate is
// a value-preserving rewrite of the input, certified equivalent before use.
// ---------------------------------------------------------------------------

struct Candidate {
  std::string name;
  Game game;
};

inline std::vector<Candidate> make_equivalent_candidates(const Game& g) {
  require_valid(g);
  check(!g.start.empty(), "candidate generation needs a pointed game");
  std::vector<Candidate> out;
  out.push_back({"relay", pad_initial(g)});
  out.push_back({"relay-twice", pad_initial(pad_initial(g))});
  Kind k0 = g.kind_of(g.start);
  if (is_player(k0))
    out.push_back({"relay-crossed",
                   pad_initial(g, k0 == Kind::Eva ? Kind::Adam : Kind::Eva)});
  // Duplicate one player position: the copy shares all moves in and out.
  for (const auto& p : g.player_positions()) {
    if (p == g.start) continue;
    Game d = g;
    std::string copy = p + ".copy";
    for (int i = 1; d.has(copy); ++i)
      copy = p + ".copy." + std::to_string(i);
    d.kind[copy] = g.kind_of(p);
    d.rank[copy] = g.rank_of(p);
    for (const auto& s : g.successors(p)) d.moves.insert({copy, s});
    for (const auto& q : g.predecessors(p)) d.moves.insert({q, copy});
    out.push_back({"doubled-" + p, std::move(d)});
    break;
  }
  // Unroll the start one step: a fresh copy with the original's moves.
  {
    Game d = g;
    std::string s2 = g.start + ".unrolled";
    for (int i = 1; d.has(s2); ++i)
      s2 = g.start + ".unrolled." + std::to_string(i);
    d.kind[s2] = k0;
    if (is_player(k0))
      d.rank[s2] = g.rank_of(g.start);
    else
      d.label[s2] = g.label_of(g.start);
    for (const auto& s : g.successors(g.start)) d.moves.insert({s2, s});
    d.start = s2;
    out.push_back({"unrolled-start", std::move(d)});
  }
  // Split one start move with a relay in the middle.  The relay's rank
  // copies its successor's, so every cycle through it keeps its top rank.
  if (is_player(k0) && !g.successors(g.start).empty()) {
    const std::string s = g.successors(g.start).front();
    Game d = g;
    std::string mid = g.start + ".mid";
    for (int i = 1; d.has(mid); ++i)
      mid = g.start + ".mid." + std::to_string(i);
    d.kind[mid] = k0 == Kind::Eva ? Kind::Adam : Kind::Eva;
    d.rank[mid] = is_player(g.kind_of(s)) ? g.rank_of(s) : 1;
    d.moves.erase({g.start, s});
    d.moves.insert({g.start, mid});
    d.moves.insert({mid, s});
    out.push_back({"split-edge", std::move(d)});
  }
  for (const auto& c : out) {
    require_valid(c.game);
    check(equiv(g, c.game).equivalent,
          "candidate " + c.name + " is not interchangeable with its source");
  }
  return out;
}

struct EvidenceStep {
  std::string candidate;
  bool equivalent = false;
  bool extracted = false;
  bool padded = false;
  bool sim_ok = false;
  bool star_ok = false;
  bool intersec_ok = false;
  int partner_entanglement = -1;  // -1: not computed (budget)
  bool ent_skipped = false;
  bool bound_ok = false;  // partner entanglement >= n - 2
  std::string problem;

  bool ok() const {
    return equivalent && extracted && sim_ok && star_ok && intersec_ok &&
           (bound_ok || ent_skipped);
  }
};

struct EvidenceReport {
  int n = 0;
  int gn_entanglement = -1;  // -1: not computed (budget)
  std::vector<EvidenceStep> steps;

  bool all_ok() const {
    for (const auto& s : steps)
      if (!s.ok()) return false;
    return true;
  }
};

// For each certified-equivalent partner of the n-th hard game: extract a
// weak simulation, re-run both simulation checks and the shared-vertex
// analysis, and bound the partner's entanglement from below by n - 2.
inline EvidenceReport hierarchy_evidence(int n,
                                         const std::vector<Candidate>& hs,
                                         long long ent_budget = 5000000) {
  EvidenceReport rep;
  rep.n = n;
  GnGame gn = generate_gn(n);
  try {
    rep.gn_entanglement = entanglement(underlying_digraph(gn.game), ent_budget);
  } catch (const std::exception&) {
    rep.gn_entanglement = -1;
  }
  for (const auto& c : hs) {
    EvidenceStep st;
    st.candidate = c.name;
    try {
      EquivResult e = equiv(gn.game, c.game);
      st.equivalent = e.equivalent;
      if (!st.equivalent) {
        st.problem = "not interchangeable with the hard game";
        rep.steps.push_back(std::move(st));
        continue;
      }
      Extraction ex = extract_simulation(gn.game, c.game, e.fwd, e.bwd);
      st.extracted = true;
      st.padded = ex.padded;
      st.sim_ok = check_weak_simulation(gn.game, ex.right, ex.sim).ok;
      st.star_ok = check_star_property(gn.game, ex.right, ex.sim).ok;
      st.intersec_ok =
          check_intersec_lemma(gn.game, ex.right, ex.sim, ex.fwd, ex.bwd).ok;
      try {
        st.partner_entanglement =
            entanglement(underlying_digraph(ex.right), ent_budget);
        st.bound_ok = st.partner_entanglement >= n - 2;
      } catch (const std::exception&) {
        st.ent_skipped = true;
      }
    } catch (const std::exception& err) {
      st.problem = err.what();
    }
    rep.steps.push_back(std::move(st));
  }
  return rep;
}

}  // namespace gmu
