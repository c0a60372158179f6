#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gmu {

// Throwing precondition helper; active in all build types.
inline void check(bool cond, const std::string& msg) {
  if (!cond) throw std::logic_error(msg);
}

// Position kinds.  Eva and Adam positions carry a rank; Draw positions carry
// a lattice-variable label; Param positions are unlabelled draw-like
// positions introduced by the predecessor operation.
enum class Kind { Eva, Adam, Draw, Param };

inline bool is_player(Kind k) { return k == Kind::Eva || k == Kind::Adam; }

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Eva: return "eva";
    case Kind::Adam: return "adam";
    case Kind::Draw: return "draw";
    case Kind::Param: return "param";
  }
  return "?";
}

// A ranked game with draw positions.  Positions are identified by strings.
// An empty `start` means the game is unpointed (as produced by `sum`).
struct Game {
  std::string name;
  std::map<std::string, Kind> kind;
  std::map<std::string, int> rank;           // player positions only
  std::map<std::string, std::string> label;  // draw positions only
  std::set<std::pair<std::string, std::string>> moves;
  std::string start;

  bool has(const std::string& id) const { return kind.count(id) != 0; }

  Kind kind_of(const std::string& id) const {
    auto it = kind.find(id);
    check(it != kind.end(), "unknown position: " + id);
    return it->second;
  }

  int rank_of(const std::string& id) const {
    auto it = rank.find(id);
    check(it != rank.end(), "position has no rank: " + id);
    return it->second;
  }

  const std::string& label_of(const std::string& id) const {
    auto it = label.find(id);
    check(it != label.end(), "position has no label: " + id);
    return it->second;
  }

  std::vector<std::string> positions() const {
    std::vector<std::string> out;
    out.reserve(kind.size());
    for (const auto& [id, k] : kind) out.push_back(id);
    return out;
  }

  std::vector<std::string> player_positions() const {
    std::vector<std::string> out;
    for (const auto& [id, k] : kind)
      if (is_player(k)) out.push_back(id);
    return out;
  }

  std::vector<std::string> draw_positions() const {
    std::vector<std::string> out;
    for (const auto& [id, k] : kind)
      if (k == Kind::Draw) out.push_back(id);
    return out;
  }

  std::vector<std::string> param_positions() const {
    std::vector<std::string> out;
    for (const auto& [id, k] : kind)
      if (k == Kind::Param) out.push_back(id);
    return out;
  }

  std::vector<std::string> successors(const std::string& id) const {
    std::vector<std::string> out;
    for (auto it = moves.lower_bound({id, std::string()});
         it != moves.end() && it->first == id; ++it)
      out.push_back(it->second);
    return out;
  }

  std::vector<std::string> predecessors(const std::string& id) const {
    std::vector<std::string> out;
    for (const auto& [a, b] : moves)
      if (b == id) out.push_back(a);
    return out;
  }

  bool has_move(const std::string& a, const std::string& b) const {
    return moves.count({a, b}) != 0;
  }
};

// Structural well-formedness; returns a list of violations (empty = valid).
inline std::vector<std::string> validate(const Game& g) {
  std::vector<std::string> bad;
  if (!g.start.empty() && !g.has(g.start))
    bad.push_back("start position does not exist: " + g.start);
  for (const auto& [id, k] : g.kind) {
    if (is_player(k)) {
      if (!g.rank.count(id)) bad.push_back("player position lacks a rank: " + id);
      if (g.label.count(id)) bad.push_back("player position has a label: " + id);
    } else if (k == Kind::Draw) {
      if (!g.label.count(id)) bad.push_back("draw position lacks a label: " + id);
      if (g.rank.count(id)) bad.push_back("draw position has a rank: " + id);
    } else {  // Param
      if (g.label.count(id)) bad.push_back("param position has a label: " + id);
      if (g.rank.count(id)) bad.push_back("param position has a rank: " + id);
    }
  }
  for (const auto& [id, r] : g.rank) {
    if (!g.has(id)) bad.push_back("rank on unknown position: " + id);
    else if (!is_player(g.kind_of(id))) {}  // already reported above
    if (r < 0) bad.push_back("negative rank on " + id);
  }
  for (const auto& [id, l] : g.label)
    if (!g.has(id)) bad.push_back("label on unknown position: " + id);
  for (const auto& [a, b] : g.moves) {
    if (!g.has(a)) { bad.push_back("move from unknown position: " + a); continue; }
    if (!g.has(b)) { bad.push_back("move to unknown position: " + b); continue; }
    if (!is_player(g.kind_of(a)))
      bad.push_back("move out of a non-player position: " + a + " -> " + b);
  }
  return bad;
}

inline void require_valid(const Game& g) {
  auto bad = validate(g);
  if (!bad.empty())
    throw std::logic_error("invalid game " + g.name + ": " + bad.front());
}

// Largest rank of a player position; -1 when there are none.
inline int max_priority(const Game& g) {
  int m = -1;
  for (const auto& [id, r] : g.rank) m = std::max(m, r);
  return m;
}

// Player positions attaining the largest rank.
inline std::vector<std::string> top_positions(const Game& g) {
  int m = max_priority(g);
  std::vector<std::string> out;
  if (m < 0) return out;
  for (const auto& [id, r] : g.rank)
    if (r == m) out.push_back(id);
  return out;
}

// The predecessor game: top-rank player positions become unlabelled
// parameter positions and lose their outgoing moves.
inline Game predecessor(const Game& g) {
  Game out = g;
  out.name = g.name + "-";
  auto tops = top_positions(g);
  std::set<std::string> top(tops.begin(), tops.end());
  for (const auto& t : tops) {
    out.kind[t] = Kind::Param;
    out.rank.erase(t);
  }
  std::set<std::pair<std::string, std::string>> kept;
  for (const auto& mv : g.moves)
    if (!top.count(mv.first)) kept.insert(mv);
  out.moves = std::move(kept);
  return out;
}

// Every move from an Eva position reaches an Adam or draw-like position,
// and symmetrically.
inline bool is_bipartite(const Game& g) {
  for (const auto& [a, b] : g.moves) {
    Kind ka = g.kind_of(a), kb = g.kind_of(b);
    if (ka == Kind::Eva && kb == Kind::Eva) return false;
    if (ka == Kind::Adam && kb == Kind::Adam) return false;
  }
  return true;
}

inline Game repoint(Game g, const std::string& new_start) {
  check(new_start.empty() || g.has(new_start),
        "repoint: unknown position " + new_start);
  g.start = new_start;
  return g;
}

}  // namespace gmu
