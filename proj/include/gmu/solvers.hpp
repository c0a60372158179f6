#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gmu/arena.hpp"

namespace gmu {

struct SolveResult {
  std::vector<Owner> winner;  // per position
  Strategy s0, s1;            // for P0 / P1, defined on the owner's region
};

namespace detail {

inline std::vector<std::vector<int>> reverse_edges(const Arena& a) {
  std::vector<std::vector<int>> in(a.size());
  for (int e = 0; e < static_cast<int>(a.edges.size()); ++e)
    in[a.edges[e].dst].push_back(e);
  return in;
}

// Player `who` attracts to `target` inside `alive`.  Returns membership and
// records, for `who`-owned positions newly attracted, the edge to use.
struct Attractor {
  std::vector<char> in_set;
  std::vector<std::optional<int>> edge_choice;
};

inline Attractor attract(const Arena& a, const std::vector<char>& alive,
                         const std::vector<char>& target, Owner who,
                         const std::vector<std::vector<int>>& rev) {
  Attractor res;
  res.in_set.assign(a.size(), 0);
  res.edge_choice.assign(a.size(), std::nullopt);
  std::vector<int> live_out(a.size(), 0);
  std::deque<int> queue;
  for (int p = 0; p < a.size(); ++p) {
    if (!alive[p]) continue;
    for (int e : a.out[p])
      if (alive[a.edges[e].dst]) ++live_out[p];
    if (target[p]) {
      res.in_set[p] = 1;
      queue.push_back(p);
    }
  }
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    for (int e : rev[q]) {
      int p = a.edges[e].src;
      if (!alive[p] || res.in_set[p]) continue;
      if (a.owner[p] == who) {
        res.in_set[p] = 1;
        res.edge_choice[p] = e;
        queue.push_back(p);
      } else {
        if (--live_out[p] == 0) {
          res.in_set[p] = 1;
          queue.push_back(p);
        }
      }
    }
  }
  return res;
}

}  // namespace detail

// Normal play (the stuck player loses) with all infinite plays won by
// `infinite_winner`.  Positional strategies for both players.
inline SolveResult solve_reachability(const Arena& a, Owner infinite_winner) {
  const Owner w = infinite_winner, f = other(w);
  auto rev = detail::reverse_edges(a);
  // f wins exactly the positions from which it forces the play into a stuck
  // position owned by w (or w is stuck right away).
  std::vector<char> fwin(a.size(), 0);
  std::vector<std::optional<int>> fedge(a.size()), wedge(a.size());
  std::vector<int> pending(a.size(), 0);
  std::deque<int> queue;
  for (int p = 0; p < a.size(); ++p) {
    pending[p] = static_cast<int>(a.out[p].size());
    if (a.owner[p] == w && pending[p] == 0) {
      fwin[p] = 1;
      queue.push_back(p);
    }
  }
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    for (int e : rev[q]) {
      int p = a.edges[e].src;
      if (fwin[p]) continue;
      if (a.owner[p] == f) {
        fwin[p] = 1;
        fedge[p] = e;
        queue.push_back(p);
      } else if (--pending[p] == 0) {
        fwin[p] = 1;
        queue.push_back(p);
      }
    }
  }
  SolveResult res;
  res.winner.assign(a.size(), w);
  for (int p = 0; p < a.size(); ++p) {
    if (fwin[p]) {
      res.winner[p] = f;
    } else if (a.owner[p] == w) {
      // Any move avoiding f's winning region stays winning for w.
      for (int e : a.out[p])
        if (!fwin[a.edges[e].dst]) { wedge[p] = e; break; }
    }
  }
  Strategy sf = Strategy::positional(fedge), sw = Strategy::positional(wedge);
  res.s0 = f == Owner::P0 ? sf : sw;
  res.s1 = f == Owner::P1 ? sf : sw;
  return res;
}

namespace detail {

struct ZielonkaState {
  const Arena& a;
  const std::vector<int>& prio;
  const std::vector<std::vector<int>>& rev;
  std::vector<Owner>& winner;
  std::vector<std::optional<int>>& choice0;
  std::vector<std::optional<int>>& choice1;

  void solve(std::vector<char>& alive) {
    int top = -1;
    for (int p = 0; p < a.size(); ++p)
      if (alive[p]) top = std::max(top, prio[p]);
    if (top < 0) return;
    Owner i = top % 2 == 0 ? Owner::P0 : Owner::P1;
    auto& mine = i == Owner::P0 ? choice0 : choice1;
    std::vector<char> target(a.size(), 0);
    for (int p = 0; p < a.size(); ++p)
      if (alive[p] && prio[p] == top) target[p] = 1;
    Attractor A = attract(a, alive, target, i, rev);
    std::vector<char> rest = alive;
    for (int p = 0; p < a.size(); ++p)
      if (A.in_set[p]) rest[p] = 0;
    solve(rest);
    bool opponent_empty = true;
    for (int p = 0; p < a.size(); ++p)
      if (rest[p] && winner[p] != i) { opponent_empty = false; break; }
    if (opponent_empty) {
      for (int p = 0; p < a.size(); ++p) {
        if (!alive[p]) continue;
        winner[p] = i;
        if (A.in_set[p] && a.owner[p] == i) {
          if (A.edge_choice[p]) {
            mine[p] = A.edge_choice[p];
          } else {
            // Top-priority position: any move staying in the subgame.
            for (int e : a.out[p])
              if (alive[a.edges[e].dst]) { mine[p] = e; break; }
          }
        }
        // Positions outside A keep the strategy from the recursive call.
      }
      return;
    }
    Owner j = other(i);
    auto& theirs = j == Owner::P0 ? choice0 : choice1;
    std::vector<char> wj(a.size(), 0);
    for (int p = 0; p < a.size(); ++p)
      if (rest[p] && winner[p] == j) wj[p] = 1;
    Attractor B = attract(a, alive, wj, j, rev);
    std::vector<char> rest2 = alive;
    for (int p = 0; p < a.size(); ++p)
      if (B.in_set[p]) rest2[p] = 0;
    solve(rest2);
    for (int p = 0; p < a.size(); ++p) {
      if (!alive[p] || !B.in_set[p]) continue;
      winner[p] = j;
      if (!wj[p] && a.owner[p] == j && B.edge_choice[p])
        theirs[p] = B.edge_choice[p];
      // Positions in wj keep the strategy from the first recursive call.
    }
  }
};

}  // namespace detail

// Max-parity solving (P0 wins an infinite play iff the maximum priority seen
// infinitely often is even); the stuck player loses.  Positional strategies.
inline SolveResult solve_parity(const Arena& a, const std::vector<int>& priority) {
  check(priority.size() == static_cast<size_t>(a.size()),
        "solve_parity: priority vector size mismatch");
  // Totalize: route stuck positions to self-looping sinks whose priority
  // encodes the normal-play loss.
  Arena t = a;
  std::vector<int> prio = priority;
  for (int r : prio) check(r >= 0, "solve_parity: negative priority");
  int sink_odd = t.add_position(Owner::P1, "#stuck0");
  int sink_even = t.add_position(Owner::P0, "#stuck1");
  t.add_edge(sink_odd, sink_odd);
  t.add_edge(sink_even, sink_even);
  prio.push_back(1);
  prio.push_back(0);
  for (int p = 0; p < a.size(); ++p)
    if (a.out[p].empty())
      t.add_edge(p, a.owner[p] == Owner::P0 ? sink_odd : sink_even);
  auto rev = detail::reverse_edges(t);
  std::vector<Owner> winner(t.size(), Owner::P0);
  std::vector<std::optional<int>> c0(t.size()), c1(t.size());
  detail::ZielonkaState z{t, prio, rev, winner, c0, c1};
  std::vector<char> alive(t.size(), 1);
  z.solve(alive);
  SolveResult res;
  res.winner.assign(winner.begin(), winner.begin() + a.size());
  c0.resize(a.size());
  c1.resize(a.size());
  // Totalization edges are not real moves.
  for (int p = 0; p < a.size(); ++p) {
    if (c0[p] && *c0[p] >= static_cast<int>(a.edges.size())) c0[p] = std::nullopt;
    if (c1[p] && *c1[p] >= static_cast<int>(a.edges.size())) c1[p] = std::nullopt;
  }
  res.s0 = Strategy::positional(c0);
  res.s1 = Strategy::positional(c1);
  return res;
}

namespace detail {

// ---- Latest-appearance-record reduction for the two-board condition ----

// P0 wins with exactly the infinitely-occurring color set S iff S's left
// part has odd maximum or S's right part has even maximum.
inline bool good_color_set(const std::vector<Color>& colors,
                           const std::vector<int>& subset) {
  int maxl = -1, maxr = -1;
  for (int ci : subset) {
    const Color& c = colors[ci];
    if (c.k == Color::K::Left) maxl = std::max(maxl, c.rank);
    if (c.k == Color::K::Right) maxr = std::max(maxr, c.rank);
  }
  if (maxl >= 0 && maxl % 2 == 1) return true;
  if (maxr >= 0 && maxr % 2 == 0) return true;
  return false;
}

struct LarProduct {
  Arena product;
  std::vector<int> prio;
  std::vector<int> base_pos;        // product index -> arena position (base nodes)
  std::vector<std::vector<int>> base_rec;  // product index -> record
  std::map<std::pair<int, std::string>, int> base_index;
  std::vector<int> edge_to_arena;   // product edge -> arena edge
  std::string initial_record;
  std::vector<Color> colors;

  static std::string encode(const std::vector<int>& rec) {
    std::string s;
    for (size_t i = 0; i < rec.size(); ++i) {
      if (i) s.push_back(',');
      s += std::to_string(rec[i]);
    }
    return s;
  }
  static std::vector<int> decode(const std::string& s) {
    std::vector<int> rec;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) rec.push_back(std::stoi(tok));
    return rec;
  }
};

// Build the parity game over (position, record) states.  Colored edges pass
// through a midpoint node carrying the hit priority; neutral edges keep the
// record and the base priority 1 (an all-neutral tail is a P0 loss).
inline LarProduct build_lar(const Arena& a) {
  LarProduct lp;
  std::set<Color> cset;
  for (const auto& e : a.edges)
    if (e.color.k != Color::K::Neutral) cset.insert(e.color);
  lp.colors.assign(cset.begin(), cset.end());
  const int m = static_cast<int>(lp.colors.size());
  check(m <= 8, "projection condition: too many distinct colors");
  std::map<Color, int> cindex;
  for (int i = 0; i < m; ++i) cindex[lp.colors[i]] = i;
  std::vector<int> r0(m);
  for (int i = 0; i < m; ++i) r0[i] = i;
  lp.initial_record = LarProduct::encode(r0);

  auto base_of = [&](int p, const std::vector<int>& rec) {
    auto key = std::make_pair(p, LarProduct::encode(rec));
    auto it = lp.base_index.find(key);
    if (it != lp.base_index.end()) return it->second;
    int id = lp.product.add_position(a.owner[p],
                                     a.pos_name[p] + "|" + key.second);
    lp.prio.push_back(1);
    lp.base_pos.push_back(p);
    lp.base_rec.push_back(rec);
    lp.base_index.emplace(key, id);
    return id;
  };

  // Seed every arena position with the initial record so regions are total.
  std::deque<int> work;
  std::vector<char> expanded;
  auto touch = [&](int p, const std::vector<int>& rec) {
    int id = base_of(p, rec);
    if (id >= static_cast<int>(expanded.size())) expanded.resize(id + 1, 0);
    if (!expanded[id]) {
      expanded[id] = 1;
      work.push_back(id);
    }
    return id;
  };
  for (int p = 0; p < a.size(); ++p) touch(p, r0);

  while (!work.empty()) {
    int id = work.front();
    work.pop_front();
    int p = lp.base_pos[id];
    std::vector<int> rec = lp.base_rec[id];
    for (int e : a.out[p]) {
      const auto& edge = a.edges[e];
      if (edge.color.k == Color::K::Neutral) {
        int to = touch(edge.dst, rec);
        lp.product.add_edge(id, to);
        lp.edge_to_arena.push_back(e);
      } else {
        int ci = cindex.at(edge.color);
        std::vector<int> rec2;
        rec2.reserve(rec.size());
        rec2.push_back(ci);
        int hit = 0;
        for (int i = 0; i < m; ++i) {
          if (rec[i] == ci) { hit = i + 1; continue; }
          rec2.push_back(rec[i]);
        }
        check(hit > 0, "record invariant broken");
        std::vector<int> prefix(rec2.begin(), rec2.begin() + hit);
        int hp = good_color_set(lp.colors, prefix) ? 2 * hit : 2 * hit + 1;
        int mid = lp.product.add_position(a.owner[p], "#mid");
        lp.prio.push_back(hp);
        lp.base_pos.push_back(-1);
        lp.base_rec.push_back({});
        lp.product.add_edge(id, mid);
        lp.edge_to_arena.push_back(e);
        int to = touch(edge.dst, rec2);
        lp.product.add_edge(mid, to);
        lp.edge_to_arena.push_back(e);
      }
    }
  }
  return lp;
}

inline Strategy lar_strategy(std::shared_ptr<const LarProduct> lp,
                             std::shared_ptr<const SolveResult> sol,
                             const Arena& a, Owner who) {
  Strategy s;
  s.initial = lp->initial_record;
  const int m = static_cast<int>(lp->colors.size());
  std::map<Color, int> cindex;
  for (int i = 0; i < m; ++i) cindex[lp->colors[i]] = i;
  auto arena_colors = std::make_shared<std::vector<Color>>();
  for (const auto& e : a.edges) arena_colors->push_back(e.color);
  s.update = [cindex, arena_colors](const std::string& mem, int e) {
    const Color& c = (*arena_colors)[e];
    if (c.k == Color::K::Neutral) return mem;
    auto rec = LarProduct::decode(mem);
    std::vector<int> rec2;
    rec2.push_back(cindex.at(c));
    for (int x : rec)
      if (x != rec2[0]) rec2.push_back(x);
    return LarProduct::encode(rec2);
  };
  s.choice = [lp, sol, who](int p, const std::string& mem) -> std::optional<int> {
    auto it = lp->base_index.find({p, mem});
    if (it == lp->base_index.end()) return std::nullopt;
    const Strategy& inner = who == Owner::P0 ? sol->s0 : sol->s1;
    auto pe = inner.choice(it->second, "");
    if (!pe) return std::nullopt;
    return lp->edge_to_arena[*pe];
  };
  return s;
}

}  // namespace detail

// Decide the two-board condition: P0 wins an infinite play iff infinitely
// many left-colored edges occur and the maximum left rank occurring
// infinitely often is odd, or infinitely many right-colored edges occur and
// the maximum right rank occurring infinitely often is even.  Finite plays:
// the stuck player loses.
inline SolveResult solve_projection_disjunction(const Arena& a) {
  auto lp = std::make_shared<detail::LarProduct>(detail::build_lar(a));
  auto sol = std::make_shared<SolveResult>(
      solve_parity(lp->product, lp->prio));
  SolveResult res;
  res.winner.assign(a.size(), Owner::P0);
  for (int p = 0; p < a.size(); ++p) {
    int id = lp->base_index.at({p, lp->initial_record});
    res.winner[p] = sol->winner[id];
  }
  res.s0 = detail::lar_strategy(lp, sol, a, Owner::P0);
  res.s1 = detail::lar_strategy(lp, sol, a, Owner::P1);
  return res;
}

// Explore the arena with `player`'s moves fixed by the strategy, then solve
// the restricted product for the opponent's best response.  True iff the
// strategy wins from the arena's start.
inline bool verify_strategy(const Arena& a, const WinCondition& cond,
                            const Strategy& strat, Owner player,
                            std::string* diag = nullptr) {
  check(a.start >= 0, "verify_strategy: arena has no start");
  auto fail = [&](const std::string& why) {
    if (diag) *diag = why;
    return false;
  };
  std::map<std::pair<int, std::string>, int> index;
  std::vector<std::pair<int, std::string>> states;
  Arena r;
  std::deque<int> work;
  auto touch = [&](int pos, const std::string& mem) {
    auto key = std::make_pair(pos, mem);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = r.add_position(a.owner[pos], a.pos_name[pos] + "|" + mem);
    index.emplace(key, id);
    states.push_back(key);
    work.push_back(id);
    return id;
  };
  r.start = touch(a.start, strat.initial);
  while (!work.empty()) {
    int id = work.front();
    work.pop_front();
    auto [pos, mem] = states[id];
    if (static_cast<int>(states.size()) > 2000000)
      throw std::logic_error("verify_strategy: restricted product too large");
    std::vector<int> follow;
    if (a.owner[pos] == player) {
      auto e = strat.choice(pos, mem);
      if (!e) {
        if (!a.out[pos].empty())
          return fail("no choice at reachable position " + a.pos_name[pos] +
                      " memory " + mem);
        // genuinely stuck: the restricted state keeps no moves
      } else {
        bool legal = false;
        for (int oe : a.out[pos]) legal = legal || oe == *e;
        if (!legal)
          return fail("illegal choice at " + a.pos_name[pos]);
        follow.push_back(*e);
      }
    } else {
      follow = a.out[pos];
    }
    for (int e : follow) {
      int to = touch(a.edges[e].dst, strat.update(mem, e));
      r.add_edge(id, to, a.edges[e].color);
    }
  }
  std::vector<Owner> winner;
  switch (cond.type) {
    case WinCondition::Type::Reachability:
      winner = solve_reachability(r, cond.infinite_winner).winner;
      break;
    case WinCondition::Type::Parity: {
      std::vector<int> prio(r.size());
      for (int i = 0; i < r.size(); ++i) prio[i] = cond.priority[states[i].first];
      winner = solve_parity(r, prio).winner;
      break;
    }
    case WinCondition::Type::ProjectionDisjunction:
      winner = solve_projection_disjunction(r).winner;
      break;
  }
  if (winner[r.start] != player)
    return fail("opponent beats the strategy from the start state");
  return true;
}

}  // namespace gmu
