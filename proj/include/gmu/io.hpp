#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gmu/core.hpp"
#include "gmu/digraph.hpp"

namespace gmu {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
};

namespace detail {
inline std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) {
    if (t[0] == '#') break;
    toks.push_back(t);
  }
  return toks;
}
}  // namespace detail

// Text format, one record per line ('#' starts a comment):
//   game <name>
//   eva <id> <rank>      adam <id> <rank>
//   draw <id> <label>    param <id>
//   move <src> <dst>     start <id>
//   end
inline Game parse_game(std::istream& in) {
  Game g;
  bool seen_game = false, seen_end = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::tokens_of(line);
    if (toks.empty()) continue;
    if (seen_end) throw ParseError(lineno, "content after 'end'");
    const std::string& rec = toks[0];
    auto want = [&](size_t n) {
      if (toks.size() != n + 1)
        throw ParseError(lineno, "'" + rec + "' expects " + std::to_string(n) +
                                     " field(s)");
    };
    auto fresh = [&](const std::string& id) {
      if (g.has(id)) throw ParseError(lineno, "duplicate position: " + id);
    };
    if (rec == "game") {
      want(1);
      if (seen_game) throw ParseError(lineno, "duplicate 'game' record");
      seen_game = true;
      g.name = toks[1];
    } else if (!seen_game) {
      throw ParseError(lineno, "expected 'game <name>' first");
    } else if (rec == "eva" || rec == "adam") {
      want(2);
      fresh(toks[1]);
      int r = 0;
      try {
        size_t used = 0;
        r = std::stoi(toks[2], &used);
        if (used != toks[2].size()) throw std::invalid_argument("");
      } catch (...) {
        throw ParseError(lineno, "bad rank: " + toks[2]);
      }
      if (r < 0) throw ParseError(lineno, "negative rank: " + toks[2]);
      g.kind[toks[1]] = rec == "eva" ? Kind::Eva : Kind::Adam;
      g.rank[toks[1]] = r;
    } else if (rec == "draw") {
      want(2);
      fresh(toks[1]);
      g.kind[toks[1]] = Kind::Draw;
      g.label[toks[1]] = toks[2];
    } else if (rec == "param") {
      want(1);
      fresh(toks[1]);
      g.kind[toks[1]] = Kind::Param;
    } else if (rec == "move") {
      want(2);
      g.moves.insert({toks[1], toks[2]});
    } else if (rec == "start") {
      want(1);
      if (!g.start.empty()) throw ParseError(lineno, "duplicate 'start'");
      g.start = toks[1];
    } else if (rec == "end") {
      want(0);
      seen_end = true;
    } else {
      throw ParseError(lineno, "unknown record: " + rec);
    }
  }
  if (!seen_game) throw ParseError(lineno, "missing 'game' record");
  if (!seen_end) throw ParseError(lineno, "missing 'end' record");
  auto bad = validate(g);
  if (!bad.empty()) throw ParseError(lineno, "invalid game: " + bad.front());
  return g;
}

inline Game parse_game(const std::string& text) {
  std::istringstream ss(text);
  return parse_game(ss);
}

inline std::string serialize(const Game& g) {
  std::ostringstream out;
  out << "game " << g.name << "\n";
  for (const auto& [id, k] : g.kind)
    if (k == Kind::Eva) out << "eva " << id << " " << g.rank_of(id) << "\n";
  for (const auto& [id, k] : g.kind)
    if (k == Kind::Adam) out << "adam " << id << " " << g.rank_of(id) << "\n";
  for (const auto& [id, k] : g.kind)
    if (k == Kind::Draw) out << "draw " << id << " " << g.label_of(id) << "\n";
  for (const auto& [id, k] : g.kind)
    if (k == Kind::Param) out << "param " << id << "\n";
  for (const auto& [a, b] : g.moves) out << "move " << a << " " << b << "\n";
  if (!g.start.empty()) out << "start " << g.start << "\n";
  out << "end\n";
  return out.str();
}

// Digraph text format:
//   digraph <name> / node <id> / edge <a> <b> / end
inline Digraph parse_digraph(std::istream& in) {
  std::string name;
  std::vector<std::string> nodes;
  std::map<std::string, int> index;
  std::vector<std::pair<int, int>> edges;
  bool seen_head = false, seen_end = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::tokens_of(line);
    if (toks.empty()) continue;
    if (seen_end) throw ParseError(lineno, "content after 'end'");
    const std::string& rec = toks[0];
    if (rec == "digraph") {
      if (toks.size() != 2) throw ParseError(lineno, "'digraph' expects a name");
      seen_head = true;
      name = toks[1];
    } else if (!seen_head) {
      throw ParseError(lineno, "expected 'digraph <name>' first");
    } else if (rec == "node") {
      if (toks.size() != 2) throw ParseError(lineno, "'node' expects an id");
      if (index.count(toks[1])) throw ParseError(lineno, "duplicate node: " + toks[1]);
      index[toks[1]] = static_cast<int>(nodes.size());
      nodes.push_back(toks[1]);
    } else if (rec == "edge") {
      if (toks.size() != 3) throw ParseError(lineno, "'edge' expects two ids");
      for (int i : {1, 2})
        if (!index.count(toks[i]))
          throw ParseError(lineno, "unknown node: " + toks[i]);
      edges.push_back({index.at(toks[1]), index.at(toks[2])});
    } else if (rec == "end") {
      seen_end = true;
    } else {
      throw ParseError(lineno, "unknown record: " + rec);
    }
  }
  if (!seen_head) throw ParseError(lineno, "missing 'digraph' record");
  if (!seen_end) throw ParseError(lineno, "missing 'end' record");
  Digraph d = make_digraph(static_cast<int>(nodes.size()), std::move(edges), name);
  d.names = std::move(nodes);
  return d;
}

inline Digraph parse_digraph(const std::string& text) {
  std::istringstream ss(text);
  return parse_digraph(ss);
}

inline std::string serialize(const Digraph& d) {
  std::ostringstream out;
  out << "digraph " << (d.name.empty() ? "g" : d.name) << "\n";
  for (int v = 0; v < d.n; ++v) out << "node " << d.vertex_name(v) << "\n";
  for (int v = 0; v < d.n; ++v)
    for (int w : d.adj[v])
      out << "edge " << d.vertex_name(v) << " " << d.vertex_name(w) << "\n";
  out << "end\n";
  return out.str();
}

// Graphviz rendering: Eva diamonds, Adam boxes, draws ellipses, params
// dashed ellipses; the start position gets a doubled border.
inline std::string to_dot(const Game& g) {
  std::ostringstream out;
  out << "digraph \"" << g.name << "\" {\n";
  for (const auto& [id, k] : g.kind) {
    out << "  \"" << id << "\" [";
    switch (k) {
      case Kind::Eva:
        out << "shape=diamond, label=\"" << id << ":" << g.rank_of(id) << "\"";
        break;
      case Kind::Adam:
        out << "shape=box, label=\"" << id << ":" << g.rank_of(id) << "\"";
        break;
      case Kind::Draw:
        out << "shape=ellipse, label=\"" << id << ":" << g.label_of(id) << "\"";
        break;
      case Kind::Param:
        out << "shape=ellipse, style=dashed, label=\"" << id << "\"";
        break;
    }
    if (id == g.start) out << ", peripheries=2";
    out << "];\n";
  }
  for (const auto& [a, b] : g.moves)
    out << "  \"" << a << "\" -> \"" << b << "\";\n";
  out << "}\n";
  return out.str();
}

inline std::string to_dot(const Digraph& d) {
  std::ostringstream out;
  out << "digraph \"" << (d.name.empty() ? "g" : d.name) << "\" {\n";
  for (int v = 0; v < d.n; ++v)
    out << "  \"" << d.vertex_name(v) << "\";\n";
  for (int v = 0; v < d.n; ++v)
    for (int w : d.adj[v])
      out << "  \"" << d.vertex_name(v) << "\" -> \"" << d.vertex_name(w)
          << "\";\n";
  out << "}\n";
  return out.str();
}

}  // namespace gmu
