#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gmu/core.hpp"

namespace gmu {

enum class Owner { P0, P1 };

inline Owner other(Owner o) { return o == Owner::P0 ? Owner::P1 : Owner::P0; }

// Edge observation: which board moved and the rank entered there, if any.
struct Color {
  enum class K { Neutral, Left, Right };
  K k = K::Neutral;
  int rank = 0;

  bool operator==(const Color& o) const { return k == o.k && rank == o.rank; }
  bool operator<(const Color& o) const {
    if (k != o.k) return k < o.k;
    return rank < o.rank;
  }
};

inline Color neutral() { return {Color::K::Neutral, 0}; }
inline Color left_rank(int r) { return {Color::K::Left, r}; }
inline Color right_rank(int r) { return {Color::K::Right, r}; }

struct ArenaEdge {
  int src = -1, dst = -1;
  Color color;
};

// A two-player board: positions owned by P0 or P1, edges optionally colored.
struct Arena {
  std::string name;
  std::vector<Owner> owner;
  std::vector<std::string> pos_name;
  std::vector<ArenaEdge> edges;
  std::vector<std::vector<int>> out;  // edge indices by source
  int start = -1;

  int size() const { return static_cast<int>(owner.size()); }

  int add_position(Owner o, std::string name) {
    owner.push_back(o);
    pos_name.push_back(std::move(name));
    out.emplace_back();
    return size() - 1;
  }

  int add_edge(int src, int dst, Color c = neutral()) {
    check(0 <= src && src < size() && 0 <= dst && dst < size(),
          "arena edge endpoint out of range");
    edges.push_back({src, dst, c});
    int id = static_cast<int>(edges.size()) - 1;
    out[src].push_back(id);
    return id;
  }
};

// Winning conditions for arena solving.
struct WinCondition {
  enum class Type { Reachability, Parity, ProjectionDisjunction };
  Type type = Type::Reachability;
  // Reachability: who wins infinite plays (finite plays: stuck owner loses).
  Owner infinite_winner = Owner::P1;
  // Parity: per-position priorities; P0 wins an infinite play iff the
  // maximum priority seen infinitely often is even.
  std::vector<int> priority;

  static WinCondition reachability(Owner infinite) {
    WinCondition c;
    c.type = Type::Reachability;
    c.infinite_winner = infinite;
    return c;
  }
  static WinCondition parity(std::vector<int> prio) {
    WinCondition c;
    c.type = Type::Parity;
    c.priority = std::move(prio);
    return c;
  }
  static WinCondition projection_disjunction() {
    WinCondition c;
    c.type = Type::ProjectionDisjunction;
    return c;
  }
};

// A (possibly finite-memory) strategy.  Memory states are strings; `choice`
// returns an edge index legal at the position, for positions in the owner's
// winning region; `update` reacts to every traversed edge.
struct Strategy {
  std::string initial;
  std::function<std::string(const std::string&, int)> update;   // (mem, edge)
  std::function<std::optional<int>(int, const std::string&)> choice;

  static Strategy positional(std::vector<std::optional<int>> choice_by_pos) {
    Strategy s;
    s.initial = "";
    s.update = [](const std::string& m, int) { return m; };
    auto table = std::make_shared<std::vector<std::optional<int>>>(
        std::move(choice_by_pos));
    s.choice = [table](int pos, const std::string&) -> std::optional<int> {
      if (pos < 0 || pos >= static_cast<int>(table->size())) return std::nullopt;
      return (*table)[pos];
    };
    return s;
  }
};

// Number of distinct non-neutral edge colors; the record construction for
// the projection condition is exponential in this count.
inline int distinct_colors(const Arena& a) {
  std::set<Color> cs;
  for (const auto& e : a.edges)
    if (e.color.k != Color::K::Neutral) cs.insert(e.color);
  return static_cast<int>(cs.size());
}

}  // namespace gmu
