#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gmu/core.hpp"
#include "gmu/io.hpp"
#include "gmu/solvers.hpp"

namespace gmu {

// An explicit finite lattice: element names, the full order relation, and
// cached meet/join tables.  Finite lattices are complete, so every game
// evaluates in one.
struct FiniteLattice {
  std::string name;
  std::vector<std::string> elems;
  std::vector<std::vector<char>> order;  // order[a][b] == a <= b (closed)
  std::vector<std::vector<int>> meet_tab, join_tab;
  int top = -1, bottom = -1;
  int chain_length = 0;  // number of elements on a longest chain

  int size() const { return static_cast<int>(elems.size()); }

  int index_of(const std::string& e) const {
    for (int i = 0; i < size(); ++i)
      if (elems[i] == e) return i;
    throw std::logic_error("lattice " + name + ": unknown element " + e);
  }

  bool le(int a, int b) const { return order[a][b]; }
  int meet(int a, int b) const { return meet_tab[a][b]; }
  int join(int a, int b) const { return join_tab[a][b]; }

  int meet_all(const std::vector<int>& xs) const {
    int acc = top;
    for (int x : xs) acc = meet(acc, x);
    return acc;
  }
  int join_all(const std::vector<int>& xs) const {
    int acc = bottom;
    for (int x : xs) acc = join(acc, x);
    return acc;
  }

  // Build from any relation; completes the reflexive-transitive closure,
  // then checks antisymmetry and the existence of all meets and joins.
  static FiniteLattice from_relation(
      std::string name, std::vector<std::string> elems,
      const std::vector<std::pair<int, int>>& pairs) {
    FiniteLattice L;
    L.name = std::move(name);
    L.elems = std::move(elems);
    int n = L.size();
    check(n > 0, "lattice " + L.name + " has no elements");
    L.order.assign(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) L.order[i][i] = 1;
    for (auto [a, b] : pairs) L.order[a][b] = 1;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        if (L.order[i][k])
          for (int j = 0; j < n; ++j)
            if (L.order[k][j]) L.order[i][j] = 1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && L.order[i][j] && L.order[j][i])
          throw std::logic_error("lattice " + L.name + ": not antisymmetric (" +
                                 L.elems[i] + ", " + L.elems[j] + ")");
    auto bound = [&](int a, int b, bool lower) -> int {
      std::vector<int> cands;
      for (int c = 0; c < n; ++c) {
        bool ok = lower ? (L.order[c][a] && L.order[c][b])
                        : (L.order[a][c] && L.order[b][c]);
        if (ok) cands.push_back(c);
      }
      for (int c : cands) {
        bool extreme = true;
        for (int d : cands)
          if (lower ? !L.order[d][c] : !L.order[c][d]) { extreme = false; break; }
        if (extreme) return c;
      }
      return -1;
    };
    L.meet_tab.assign(n, std::vector<int>(n, -1));
    L.join_tab.assign(n, std::vector<int>(n, -1));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        L.meet_tab[a][b] = bound(a, b, true);
        L.join_tab[a][b] = bound(a, b, false);
        if (L.meet_tab[a][b] < 0 || L.join_tab[a][b] < 0)
          throw std::logic_error("lattice " + L.name + ": no meet/join for (" +
                                 L.elems[a] + ", " + L.elems[b] + ")");
      }
    L.bottom = 0;
    L.top = 0;
    for (int c = 0; c < n; ++c) {
      L.bottom = L.meet_tab[L.bottom][c];
      L.top = L.join_tab[L.top][c];
    }
    // Longest chain by DP over the strict order (a DAG).
    std::vector<int> depth(n, 1);
    bool moved = true;
    while (moved) {
      moved = false;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (a != b && L.order[a][b] && depth[a] + 1 > depth[b]) {
            depth[b] = depth[a] + 1;
            moved = true;
          }
    }
    L.chain_length = *std::max_element(depth.begin(), depth.end());
    return L;
  }
};

// ---- Stock lattices -------------------------------------------------------

inline FiniteLattice chain_lattice(int n) {
  std::vector<std::string> elems;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    elems.push_back("c" + std::to_string(i));
    if (i) pairs.push_back({i - 1, i});
  }
  return FiniteLattice::from_relation("chain" + std::to_string(n),
                                      std::move(elems), pairs);
}

inline FiniteLattice boolean_lattice(int bits) {
  int n = 1 << bits;
  std::vector<std::string> elems;
  std::vector<std::pair<int, int>> pairs;
  for (int m = 0; m < n; ++m) {
    std::string e = "s";
    for (int b = 0; b < bits; ++b)
      if (m & (1 << b)) e.push_back('a' + b);
    elems.push_back(m == 0 ? "s0" : e);
  }
  for (int m = 0; m < n; ++m)
    for (int m2 = 0; m2 < n; ++m2)
      if ((m & m2) == m) pairs.push_back({m, m2});
  return FiniteLattice::from_relation("bool" + std::to_string(bits),
                                      std::move(elems), pairs);
}

// Three incomparable atoms between bottom and top.
inline FiniteLattice diamond_m3() {
  return FiniteLattice::from_relation(
      "M3", {"bot", "a", "b", "c", "top"},
      {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}});
}

// The pentagon: bot < a < top and bot < b < c < top, a incomparable to b, c.
inline FiniteLattice pentagon_n5() {
  return FiniteLattice::from_relation("N5", {"bot", "a", "b", "c", "top"},
                                      {{0, 1}, {1, 4}, {0, 2}, {2, 3}, {3, 4}});
}

// A random intersection-closed family of subsets of a small base set,
// ordered by inclusion; at most max_elems elements.
inline FiniteLattice random_closure_lattice(std::mt19937_64& rng,
                                            int max_elems = 12) {
  const int base = 4;
  std::uniform_int_distribution<int> subset(0, (1 << base) - 1),
      gens_d(2, 5);
  for (int attempt = 0;; ++attempt) {
    std::set<int> family;
    family.insert((1 << base) - 1);
    int gens = gens_d(rng);
    for (int i = 0; i < gens; ++i) family.insert(subset(rng));
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<int> cur(family.begin(), family.end());
      for (int a : cur)
        for (int b : cur)
          if (family.insert(a & b).second) grew = true;
    }
    if (static_cast<int>(family.size()) > max_elems) continue;
    std::vector<int> masks(family.begin(), family.end());
    std::vector<std::string> elems;
    for (int m : masks) {
      std::string e = "f";
      for (int b = 0; b < base; ++b)
        if (m & (1 << b)) e.push_back('a' + b);
      elems.push_back(e);
    }
    std::vector<std::pair<int, int>> pairs;
    for (size_t i = 0; i < masks.size(); ++i)
      for (size_t j = 0; j < masks.size(); ++j)
        if ((masks[i] & masks[j]) == masks[i])
          pairs.push_back({static_cast<int>(i), static_cast<int>(j)});
    return FiniteLattice::from_relation("closure", std::move(elems), pairs);
  }
}

// ---- Text format ----------------------------------------------------------
// lattice <name> / elem <id> / leq <a> <b> / end

inline FiniteLattice parse_lattice(std::istream& in) {
  std::string name;
  std::vector<std::string> elems;
  std::map<std::string, int> index;
  std::vector<std::pair<int, int>> pairs;
  bool head = false, done = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::tokens_of(line);
    if (toks.empty()) continue;
    if (done) throw ParseError(lineno, "content after 'end'");
    if (toks[0] == "lattice") {
      if (toks.size() != 2) throw ParseError(lineno, "'lattice' expects a name");
      head = true;
      name = toks[1];
    } else if (!head) {
      throw ParseError(lineno, "expected 'lattice <name>' first");
    } else if (toks[0] == "elem") {
      if (toks.size() != 2) throw ParseError(lineno, "'elem' expects an id");
      if (index.count(toks[1]))
        throw ParseError(lineno, "duplicate element: " + toks[1]);
      index[toks[1]] = static_cast<int>(elems.size());
      elems.push_back(toks[1]);
    } else if (toks[0] == "leq") {
      if (toks.size() != 3) throw ParseError(lineno, "'leq' expects two ids");
      for (int i : {1, 2})
        if (!index.count(toks[i]))
          throw ParseError(lineno, "unknown element: " + toks[i]);
      pairs.push_back({index.at(toks[1]), index.at(toks[2])});
    } else if (toks[0] == "end") {
      done = true;
    } else {
      throw ParseError(lineno, "unknown record: " + toks[0]);
    }
  }
  if (!head) throw ParseError(lineno, "missing 'lattice' record");
  if (!done) throw ParseError(lineno, "missing 'end' record");
  try {
    return FiniteLattice::from_relation(name, std::move(elems), pairs);
  } catch (const std::logic_error& e) {
    throw ParseError(lineno, e.what());
  }
}

inline FiniteLattice parse_lattice(const std::string& text) {
  std::istringstream ss(text);
  return parse_lattice(ss);
}

inline std::string serialize(const FiniteLattice& L) {
  std::ostringstream out;
  out << "lattice " << L.name << "\n";
  for (const auto& e : L.elems) out << "elem " << e << "\n";
  // Emit the covering relation; parsing closes it again.
  int n = L.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b || !L.order[a][b]) continue;
      bool covering = true;
      for (int c = 0; c < n && covering; ++c)
        if (c != a && c != b && L.order[a][c] && L.order[c][b]) covering = false;
      if (covering) out << "leq " << L.elems[a] << " " << L.elems[b] << "\n";
    }
  out << "end\n";
  return out.str();
}

// ---- Evaluation -----------------------------------------------------------

// Draw-position id -> lattice element.  Parameter positions introduced by
// the predecessor operation are valuated by their position id as well.
using Valuation = std::map<std::string, int>;
// Player-position id -> lattice element.
using Assignment = std::map<std::string, int>;

inline Valuation valuation_from_labels(const Game& g,
                                       const std::map<std::string, int>& by_label) {
  Valuation v;
  for (const auto& d : g.draw_positions()) {
    auto it = by_label.find(g.label_of(d));
    check(it != by_label.end(), "no value for label " + g.label_of(d));
    v[d] = it->second;
  }
  return v;
}

struct EvalStats {
  int top_level_iterations = 0;
};

namespace detail {

inline Assignment eval_rec(const Game& g, const FiniteLattice& L,
                           const Valuation& dval, EvalStats* stats) {
  Assignment result;
  auto players = g.player_positions();
  if (players.empty()) return result;
  int maxr = max_priority(g);
  bool least = maxr % 2 == 1;
  auto tops = top_positions(g);
  std::set<std::string> top_set(tops.begin(), tops.end());
  Game pred = predecessor(g);

  std::map<std::string, int> X;
  for (const auto& t : tops) X[t] = least ? L.bottom : L.top;
  Assignment inner;
  int iterations = 0;
  while (true) {
    ++iterations;
    Valuation inner_val = dval;
    for (const auto& [t, v] : X) inner_val[t] = v;
    inner = eval_rec(pred, L, inner_val, nullptr);
    auto value_of = [&](const std::string& p) -> int {
      if (top_set.count(p)) return X.at(p);
      if (is_player(g.kind_of(p))) return inner.at(p);
      return dval.at(p);  // draw or parameter
    };
    std::map<std::string, int> X2;
    for (const auto& t : tops) {
      std::vector<int> vals;
      for (const auto& s : g.successors(t)) vals.push_back(value_of(s));
      X2[t] = g.kind_of(t) == Kind::Eva ? L.join_all(vals) : L.meet_all(vals);
    }
    if (X2 == X) break;
    X = std::move(X2);
  }
  if (stats) stats->top_level_iterations = iterations;
  result = inner;
  for (const auto& [t, v] : X) result[t] = v;
  return result;
}

}  // namespace detail

// The interpretation of the game over L at the given draw valuation: one
// lattice element per player position.
inline Assignment eval(const Game& g, const FiniteLattice& L,
                       const Valuation& dval, EvalStats* stats = nullptr) {
  for (const auto& d : g.draw_positions())
    check(dval.count(d) != 0, "eval: valuation misses draw " + d);
  for (const auto& d : g.param_positions())
    check(dval.count(d) != 0, "eval: valuation misses parameter " + d);
  return detail::eval_rec(g, L, dval, stats);
}

// Value at the start position (draw starts read the valuation directly).
inline int eval_at_start(const Game& g, const FiniteLattice& L,
                         const Valuation& dval) {
  check(!g.start.empty(), "eval_at_start: unpointed game");
  if (!is_player(g.kind_of(g.start))) return dval.at(g.start);
  return eval(g, L, dval).at(g.start);
}

// ---- Two-element oracle ---------------------------------------------------
// Over the two-element lattice the value of a position is 1 iff Eva wins the
// parity game in which each draw is replaced by an immediate win for Eva
// (value 1) or for Adam (value 0).  Decided by the parity solver.

inline std::map<std::string, int> eval_closed_in_two_region(
    const Game& g, const std::map<std::string, int>& val01) {
  Arena a;
  std::map<std::string, int> index;
  for (const auto& p : g.player_positions())
    index[p] = a.add_position(g.kind_of(p) == Kind::Eva ? Owner::P0 : Owner::P1,
                              p);
  int eva_wins = a.add_position(Owner::P1, "#one");   // Adam stuck here
  int adam_wins = a.add_position(Owner::P0, "#zero");  // Eva stuck here
  std::vector<int> prio(a.size(), 0);
  for (const auto& p : g.player_positions()) prio[index.at(p)] = g.rank_of(p);
  for (const auto& [s, t] : g.moves) {
    if (is_player(g.kind_of(t))) {
      a.add_edge(index.at(s), index.at(t));
    } else {
      int v = val01.at(t);
      a.add_edge(index.at(s), v == 1 ? eva_wins : adam_wins);
    }
  }
  auto sol = solve_parity(a, prio);
  std::map<std::string, int> out;
  for (const auto& [p, i] : index)
    out[p] = sol.winner[i] == Owner::P0 ? 1 : 0;
  return out;
}

inline int eval_closed_in_two(const Game& g,
                              const std::map<std::string, int>& val01) {
  check(!g.start.empty(), "eval_closed_in_two: unpointed game");
  if (!is_player(g.kind_of(g.start))) return val01.at(g.start);
  return eval_closed_in_two_region(g, val01).at(g.start);
}

// ---- Monotonicity checking ------------------------------------------------

struct MonotoneReport {
  int samples = 0;
  int violations = 0;
  std::string first_violation;
};

inline MonotoneReport check_monotone(const Game& g, const FiniteLattice& L,
                                     int samples, std::mt19937_64& rng) {
  MonotoneReport rep;
  auto draws = g.draw_positions();
  std::uniform_int_distribution<int> elem(0, L.size() - 1);
  for (int s = 0; s < samples; ++s) {
    Valuation lo, hi;
    for (const auto& d : draws) {
      int a = elem(rng);
      std::vector<int> ups;
      for (int b = 0; b < L.size(); ++b)
        if (L.le(a, b)) ups.push_back(b);
      int b = ups[std::uniform_int_distribution<int>(
          0, static_cast<int>(ups.size()) - 1)(rng)];
      lo[d] = a;
      hi[d] = b;
    }
    Assignment alo = eval(g, L, lo), ahi = eval(g, L, hi);
    ++rep.samples;
    for (const auto& [p, v] : alo) {
      if (!L.le(v, ahi.at(p))) {
        ++rep.violations;
        if (rep.first_violation.empty())
          rep.first_violation = "position " + p + " in " + L.name;
        break;
      }
    }
  }
  return rep;
}

}  // namespace gmu
