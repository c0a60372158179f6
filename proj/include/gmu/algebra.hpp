#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gmu/core.hpp"

namespace gmu {

// The one-position game holding a draw labelled x.
inline Game variable_game(const std::string& x) {
  check(!x.empty(), "empty variable name");
  Game g;
  g.name = "var_" + x;
  g.kind[x] = Kind::Draw;
  g.label[x] = x;
  g.start = x;
  return g;
}

namespace detail {
inline Game meet_join_base(const std::vector<std::string>& labels, bool meet) {
  const std::string owner = meet ? "p0" : "q0";
  Game g;
  g.name = meet ? "meet" : "join";
  g.kind[owner] = meet ? Kind::Adam : Kind::Eva;
  g.rank[owner] = 0;
  g.start = owner;
  for (const auto& x : labels) {
    check(x != owner, "label collides with owner id: " + x);
    check(!g.has(x) || g.kind_of(x) == Kind::Draw, "duplicate label: " + x);
    if (g.has(x)) continue;  // labels form a set
    g.kind[x] = Kind::Draw;
    g.label[x] = x;
    g.moves.insert({owner, x});
  }
  return g;
}
}  // namespace detail

// Adam chooses among draws labelled by the given variables (stuck = best
// possible for Eva when the set is empty).
inline Game meet_of(const std::vector<std::string>& labels) {
  return detail::meet_join_base(labels, true);
}

// Eva chooses among draws labelled by the given variables.
inline Game join_of(const std::vector<std::string>& labels) {
  return detail::meet_join_base(labels, false);
}

// Rename every position with a prefix (used to guarantee disjointness).
inline Game prefix_game(const Game& g, const std::string& pre) {
  Game out;
  out.name = g.name;
  for (const auto& [id, k] : g.kind) out.kind[pre + id] = k;
  for (const auto& [id, r] : g.rank) out.rank[pre + id] = r;
  for (const auto& [id, l] : g.label) out.label[pre + id] = l;
  for (const auto& [a, b] : g.moves) out.moves.insert({pre + a, pre + b});
  if (!g.start.empty()) out.start = pre + g.start;
  return out;
}

// Disjoint union; the result is unpointed (callers pick a start).
inline Game sum(const std::vector<Game>& parts) {
  Game out;
  out.name = "sum";
  for (const auto& p : parts) {
    for (const auto& [id, k] : p.kind) {
      check(!out.has(id), "sum: position id used twice: " + id);
      out.kind[id] = k;
    }
    for (const auto& [id, r] : p.rank) out.rank[id] = r;
    for (const auto& [id, l] : p.label) out.label[id] = l;
    for (const auto& mv : p.moves) out.moves.insert(mv);
  }
  return out;
}

// K = G over H via psi: every draw of G is rerouted to a position of H.
// Player positions and player-to-player moves of G survive; the draws of K
// are exactly those of H.
inline Game compose(const Game& g, const std::map<std::string, std::string>& psi,
                    const Game& h) {
  check(g.param_positions().empty() && h.param_positions().empty(),
        "compose: parameter positions are not allowed");
  Game out;
  out.name = "(" + g.name + "." + h.name + ")";
  for (const auto& [id, k] : g.kind) {
    if (!is_player(k)) continue;
    check(!h.has(id), "compose: position id used twice: " + id);
    out.kind[id] = k;
    out.rank[id] = g.rank_of(id);
  }
  for (const auto& [id, k] : h.kind) out.kind[id] = k;
  for (const auto& [id, r] : h.rank) out.rank[id] = r;
  for (const auto& [id, l] : h.label) out.label[id] = l;
  auto target = [&](const std::string& d) -> const std::string& {
    auto it = psi.find(d);
    check(it != psi.end(), "compose: draw not routed: " + d);
    check(h.has(it->second), "compose: route target not in right game: " + it->second);
    return it->second;
  };
  for (const auto& [a, b] : g.moves) {
    if (g.kind_of(b) == Kind::Draw)
      out.moves.insert({a, target(b)});
    else
      out.moves.insert({a, b});
  }
  for (const auto& mv : h.moves) out.moves.insert(mv);
  if (!g.start.empty())
    out.start = g.kind_of(g.start) == Kind::Draw ? target(g.start) : g.start;
  return out;
}

// Substitute games for (some of) a game's draw labels.  Unmapped labels stay
// draw positions with the same label.  Components are prefixed to keep ids
// disjoint.
inline Game subst(const Game& g, const std::map<std::string, Game>& by_label) {
  std::vector<Game> parts;
  std::map<std::string, std::string> psi;  // draw id of g -> position of sum
  std::map<std::string, std::string> mounted;  // label -> start id in the sum
  int counter = 0;
  for (const auto& d : g.draw_positions()) {
    const std::string& x = g.label_of(d);
    auto it = mounted.find(x);
    if (it == mounted.end()) {
      std::string pre = "s" + std::to_string(counter++) + ".";
      auto found = by_label.find(x);
      Game part = found != by_label.end() ? prefix_game(found->second, pre)
                                          : prefix_game(variable_game(x), pre);
      check(!part.start.empty(), "subst: component for " + x + " is unpointed");
      it = mounted.emplace(x, part.start).first;
      parts.push_back(std::move(part));
    }
    psi[d] = it->second;
  }
  Game inner = sum(parts);
  Game out = compose(g, psi, inner);
  out.name = g.name + "[subst]";
  return out;
}

// Meet / join of pointed games, built from the base game and substitution.
inline Game meet_games(const std::vector<Game>& parts) {
  std::vector<std::string> labels;
  std::map<std::string, Game> by_label;
  for (size_t i = 0; i < parts.size(); ++i) {
    std::string x = "m" + std::to_string(i);
    labels.push_back(x);
    by_label[x] = parts[i];
  }
  Game out = subst(meet_of(labels), by_label);
  out.name = "meet_games";
  return out;
}

inline Game join_games(const std::vector<Game>& parts) {
  std::vector<std::string> labels;
  std::map<std::string, Game> by_label;
  for (size_t i = 0; i < parts.size(); ++i) {
    std::string x = "j" + std::to_string(i);
    labels.push_back(x);
    by_label[x] = parts[i];
  }
  Game out = subst(join_of(labels), by_label);
  out.name = "join_games";
  return out;
}

// A system closes some draw positions into new player positions (eva / adam)
// and adds moves from the closed positions back into the game.
struct FixpointSystem {
  std::set<std::string> eva, adam;
  std::set<std::pair<std::string, std::string>> moves;
};

enum class Theta { Mu, Nu };

// The closed positions receive the least rank consistent with the fixpoint
// flavour: the current maximum if its parity already matches (odd for Mu,
// even for Nu), one more otherwise; 1 resp. 0 when the game has no ranked
// positions at all.
inline int fixpoint_rank(Theta theta, int max_rank) {
  bool want_odd = theta == Theta::Mu;
  if (max_rank < 0) return want_odd ? 1 : 0;
  bool is_odd = max_rank % 2 != 0;
  return is_odd == want_odd ? max_rank : max_rank + 1;
}

inline Game fixpoint(Theta theta, const Game& g, const FixpointSystem& s) {
  for (const auto& d : s.eva)
    check(s.adam.count(d) == 0, "fixpoint: position closed twice: " + d);
  Game out = g;
  out.name = std::string(theta == Theta::Mu ? "mu." : "nu.") + g.name;
  int r = fixpoint_rank(theta, max_priority(g));
  auto close = [&](const std::string& d, Kind k) {
    check(g.has(d) && g.kind_of(d) == Kind::Draw,
          "fixpoint: not a draw position: " + d);
    out.kind[d] = k;
    out.rank[d] = r;
    out.label.erase(d);
  };
  for (const auto& d : s.eva) close(d, Kind::Eva);
  for (const auto& d : s.adam) close(d, Kind::Adam);
  for (const auto& [a, b] : s.moves) {
    check(s.eva.count(a) || s.adam.count(a),
          "fixpoint: move source not a closed position: " + a);
    check(g.has(b) && g.kind_of(b) != Kind::Param,
          "fixpoint: bad move target: " + b);
    out.moves.insert({a, b});
  }
  return out;
}

// Swap the players and shift every rank by one (winners of infinite plays
// swap, stuck positions swap owners).
inline Game dual(const Game& g) {
  Game out = g;
  out.name = "dual." + g.name;
  for (auto& [id, k] : out.kind) {
    if (k == Kind::Eva) k = Kind::Adam;
    else if (k == Kind::Adam) k = Kind::Eva;
  }
  for (auto& [id, r] : out.rank) r += 1;
  return out;
}

// Prepend a relay with a single move to the old start.  A one-successor
// position denotes the same lattice value as its successor, so the result is
// interchangeable with the input.  The relay kind defaults to the start's
// own and may be overridden to place the start on the other player's side.
inline Game pad_initial(const Game& g,
                        std::optional<Kind> relay_kind = std::nullopt) {
  check(!g.start.empty(), "pad_initial: unpointed game");
  Kind k = g.kind_of(g.start);
  check(is_player(k), "pad_initial: start must be a player position");
  Kind rk = relay_kind.value_or(k);
  check(is_player(rk), "pad_initial: the relay must belong to a player");
  int i = 0;
  std::string id = "pad0";
  while (g.has(id)) id = "pad" + std::to_string(++i);
  Game out = g;
  out.name = "pad." + g.name;
  out.kind[id] = rk;
  out.rank[id] = g.rank_of(g.start);
  out.moves.insert({id, g.start});
  out.start = id;
  return out;
}

// Check that `f` is a structure-preserving bijection from a onto b.
inline bool isomorphic_under(const Game& a, const Game& b,
                             const std::map<std::string, std::string>& f) {
  if (f.size() != a.kind.size() || a.kind.size() != b.kind.size()) return false;
  std::set<std::string> image;
  for (const auto& [x, y] : f) {
    if (!a.has(x) || !b.has(y)) return false;
    if (!image.insert(y).second) return false;
    if (a.kind_of(x) != b.kind_of(y)) return false;
    if (is_player(a.kind_of(x)) && a.rank_of(x) != b.rank_of(y)) return false;
    if (a.kind_of(x) == Kind::Draw && a.label_of(x) != b.label_of(y)) return false;
  }
  if (a.moves.size() != b.moves.size()) return false;
  for (const auto& [x, y] : a.moves)
    if (!b.has_move(f.at(x), f.at(y))) return false;
  if (a.start.empty() != b.start.empty()) return false;
  if (!a.start.empty() && f.at(a.start) != b.start) return false;
  return true;
}

}  // namespace gmu
