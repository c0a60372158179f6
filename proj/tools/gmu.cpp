// Command-line front end: parsing, generation, preorder and equivalence
// queries, lattice evaluation, entanglement, synchronization checks,
// simulation extraction, the hierarchy evidence sweep, and DOT export.
//
// Exit codes: 0 success / positive answer, 1 negative answer, 2 usage or
// input error.  All reports on standard output are deterministic; anything
// diagnostic goes to standard error.

#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gmu/algebra.hpp"
#include "gmu/core.hpp"
#include "gmu/digraph.hpp"
#include "gmu/entanglement.hpp"
#include "gmu/io.hpp"
#include "gmu/lattice.hpp"
#include "gmu/preorder.hpp"
#include "gmu/sync.hpp"
#include "gmu/weaksim.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_token(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    if (ls >> word && word[0] != '#') return word;
  }
  return "";
}

gmu::Game load_game(const std::string& path) {
  return gmu::parse_game(read_file(path));
}

// A file holds a game, a digraph, or a lattice; the leading record says which.
enum class FileKind { Game, Digraph, Lattice, Simulation, Unknown };

FileKind sniff(const std::string& text) {
  std::string t = first_token(text);
  if (t == "game") return FileKind::Game;
  if (t == "digraph") return FileKind::Digraph;
  if (t == "lattice") return FileKind::Lattice;
  if (t == "rel" || t == "path") return FileKind::Simulation;
  return FileKind::Unknown;
}

// For commands that accept either a game or a digraph file.
gmu::Digraph load_digraph_like(const std::string& path) {
  std::string text = read_file(path);
  switch (sniff(text)) {
    case FileKind::Game:
      return gmu::underlying_digraph(gmu::parse_game(text));
    case FileKind::Digraph:
      return gmu::parse_digraph(text);
    default:
      throw std::runtime_error(path + ": expected a game or digraph file");
  }
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

// ---- validate -------------------------------------------------------------

int run_validate(const std::string& path) {
  std::string text = read_file(path);
  switch (sniff(text)) {
    case FileKind::Game: {
      gmu::Game g = gmu::parse_game(text);
      int eva = 0, adam = 0, draw = 0, param = 0;
      for (const auto& [id, k] : g.kind) {
        (void)id;
        if (k == gmu::Kind::Eva) ++eva;
        if (k == gmu::Kind::Adam) ++adam;
        if (k == gmu::Kind::Draw) ++draw;
        if (k == gmu::Kind::Param) ++param;
      }
      std::cout << "game " << g.name << "\n";
      std::cout << "positions: " << g.kind.size() << " (eva " << eva
                << ", adam " << adam << ", draw " << draw << ", param "
                << param << ")\n";
      std::cout << "moves: " << g.moves.size() << "\n";
      std::cout << "start: " << (g.start.empty() ? "(none)" : g.start) << "\n";
      std::cout << "bipartite: " << yesno(gmu::is_bipartite(g)) << "\n";
      auto info = gmu::girth_undirected(gmu::underlying_digraph(g));
      std::cout << "girth: ";
      if (info.has_loop)
        std::cout << "1\n";
      else if (info.has_two_cycle)
        std::cout << "2\n";
      else if (info.shortest_cycle)
        std::cout << *info.shortest_cycle << "\n";
      else
        std::cout << "none\n";
      return 0;
    }
    case FileKind::Digraph: {
      gmu::Digraph d = gmu::parse_digraph(text);
      int edges = 0;
      for (const auto& row : d.adj) edges += static_cast<int>(row.size());
      std::cout << "digraph " << d.name << "\n";
      std::cout << "vertices: " << d.n << "\n";
      std::cout << "edges: " << edges << "\n";
      return 0;
    }
    case FileKind::Lattice: {
      gmu::FiniteLattice L = gmu::parse_lattice(text);
      std::cout << "lattice " << L.name << "\n";
      std::cout << "elements: " << L.size() << "\n";
      std::cout << "bottom: " << L.elems[L.bottom] << "\n";
      std::cout << "top: " << L.elems[L.top] << "\n";
      std::cout << "longest chain: " << L.chain_length << "\n";
      return 0;
    }
    case FileKind::Simulation: {
      gmu::WeakSimulation sim = gmu::parse_simulation(text);
      std::cout << "simulation\n";
      std::cout << "pairs: " << sim.rel.size() << "\n";
      std::cout << "paths: " << sim.path.size() << "\n";
      return 0;
    }
    default:
      throw std::runtime_error(path + ": unrecognized file format");
  }
}

// ---- gen-gn ---------------------------------------------------------------

int run_gen_gn(int n) {
  std::cout << gmu::serialize(gmu::generate_gn(n).game);
  return 0;
}

// ---- leq / equiv ----------------------------------------------------------

int run_leq(const std::string& a, const std::string& b) {
  gmu::Game g = load_game(a), h = load_game(b);
  bool ok = gmu::decide_leq(g, h).leq;
  std::cout << (ok ? "true" : "false") << "\n";
  return ok ? 0 : 1;
}

int run_equiv(const std::string& a, const std::string& b) {
  gmu::Game g = load_game(a), h = load_game(b);
  bool ok = gmu::equiv(g, h).equivalent;
  std::cout << (ok ? "true" : "false") << "\n";
  return ok ? 0 : 1;
}

// ---- eval -----------------------------------------------------------------

int run_eval(const std::string& game_path, const std::string& lat_path,
             const std::vector<std::string>& bindings, bool all) {
  gmu::Game g = load_game(game_path);
  gmu::FiniteLattice L = gmu::parse_lattice(read_file(lat_path));

  std::map<std::string, int> by_name;
  for (const auto& s : bindings) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == s.size())
      throw std::runtime_error("bad binding (want label=element): " + s);
    by_name[s.substr(0, eq)] = L.index_of(s.substr(eq + 1));
  }

  gmu::Valuation val = gmu::valuation_from_labels(g, by_name);
  for (const auto& p : g.param_positions()) {
    auto it = by_name.find(p);
    gmu::check(it != by_name.end(), "no value for parameter " + p);
    val[p] = it->second;
  }

  if (all) {
    gmu::Assignment asg = gmu::eval(g, L, val);
    for (const auto& [pos, v] : asg)
      std::cout << pos << " = " << L.elems[v] << "\n";
    return 0;
  }
  gmu::check(!g.start.empty(), "eval: the game has no start position");
  std::cout << L.elems[gmu::eval_at_start(g, L, val)] << "\n";
  return 0;
}

// ---- ent ------------------------------------------------------------------

int run_ent(const std::string& path, std::optional<int> k, long long budget) {
  gmu::Digraph d = load_digraph_like(path);
  if (k) {
    bool cops_win = gmu::ent_game_winner(d, *k, budget);
    std::cout << (cops_win ? "true" : "false") << "\n";
    return cops_win ? 0 : 1;
  }
  std::cout << gmu::entanglement(d, budget) << "\n";
  return 0;
}

// ---- sync-check -----------------------------------------------------------

int run_sync_check(const std::string& path, long long budget) {
  gmu::Game g = load_game(path);
  long long p = static_cast<long long>(g.kind.size());
  if (p * p > budget)
    throw std::runtime_error(
        "the pairwise sweep needs " + std::to_string(p * p) +
        " pair checks; raise --budget to allow it");
  gmu::SyncReport rep = gmu::is_strongly_synchronizing(g);
  std::cout << "bipartite: " << yesno(rep.bipartite) << "\n";
  std::cout << "girth above 4: " << yesno(rep.girth_ok) << "\n";
  std::cout << "interchangeable pairs: " << rep.condition1_violations.size()
            << "\n";
  for (const auto& [a, b] : rep.condition1_violations)
    std::cout << "  " << a << " ~ " << b << "\n";
  std::cout << "strict pairs off the move relation: "
            << rep.condition2_violations.size() << "\n";
  for (const auto& [a, b] : rep.condition2_violations)
    std::cout << "  " << a << " < " << b << "\n";
  std::cout << "strongly synchronizing: " << yesno(rep.ok()) << "\n";
  return rep.ok() ? 0 : 1;
}

// ---- simcheck -------------------------------------------------------------

int run_simcheck(const std::string& left, const std::string& right,
                 const std::string& sim_path) {
  gmu::Game g = load_game(left), h = load_game(right);
  gmu::WeakSimulation sim = gmu::parse_simulation(read_file(sim_path));
  gmu::SimReport weak = gmu::check_weak_simulation(g, h, sim);
  std::cout << "weak simulation: " << (weak.ok ? "ok" : "failed") << "\n";
  for (const auto& msg : weak.problems) std::cout << "  " << msg << "\n";
  gmu::SimReport star = gmu::check_star_property(g, h, sim);
  std::cout << "star property: " << (star.ok ? "ok" : "failed") << "\n";
  for (const auto& msg : star.problems) std::cout << "  " << msg << "\n";
  return weak.ok && star.ok ? 0 : 1;
}

// ---- extract-sim ----------------------------------------------------------

int run_extract_sim(const std::string& left, const std::string& right,
                    const std::string& right_out) {
  gmu::Game g = load_game(left), h = load_game(right);
  gmu::EquivResult e = gmu::equiv(g, h);
  if (!e.equivalent) {
    std::cerr << "the games are not equivalent; nothing to extract\n";
    return 1;
  }
  gmu::Extraction ex = gmu::extract_simulation(g, h, e.fwd, e.bwd);
  if (ex.padded)
    std::cerr << "note: a relay start was added to the right game; "
                 "use --right-out to save the padded partner\n";
  if (!right_out.empty()) {
    std::ofstream out(right_out);
    if (!out) throw std::runtime_error("cannot write: " + right_out);
    out << gmu::serialize(ex.right);
  }
  std::cout << gmu::serialize(ex.sim);
  return 0;
}

// ---- evidence -------------------------------------------------------------

void print_evidence(const gmu::EvidenceReport& rep) {
  std::cout << "family member: " << rep.n << "\n";
  std::cout << "entanglement: ";
  if (rep.gn_entanglement < 0)
    std::cout << "skipped (budget)\n";
  else
    std::cout << rep.gn_entanglement << "\n";
  for (const auto& s : rep.steps) {
    std::cout << "candidate " << s.candidate << ": ";
    if (s.ok()) {
      std::cout << "ok";
      if (s.padded) std::cout << ", padded";
      if (s.ent_skipped)
        std::cout << ", partner entanglement skipped (budget)";
      else
        std::cout << ", partner entanglement " << s.partner_entanglement;
      std::cout << "\n";
    } else {
      std::cout << "FAILED (" << (s.problem.empty() ? "see flags" : s.problem)
                << ")\n";
    }
  }
  std::cout << "all ok: " << yesno(rep.all_ok()) << "\n";
}

int run_evidence(int n, long long budget, int jobs) {
  gmu::GnGame gn = gmu::generate_gn(n);
  std::vector<gmu::Candidate> cands = gmu::make_equivalent_candidates(gn.game);

  gmu::EvidenceReport rep;
  if (jobs <= 1) {
    rep = gmu::hierarchy_evidence(n, cands, budget);
  } else {
    // Each candidate's pipeline is independent; run them on a small pool and
    // stitch the steps back together in the input order.
    std::vector<gmu::EvidenceReport> parts(cands.size());
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    int width = std::min<int>(jobs, static_cast<int>(cands.size()));
    for (int t = 0; t < width; ++t)
      pool.emplace_back([&] {
        for (size_t i = next++; i < cands.size(); i = next++)
          parts[i] = gmu::hierarchy_evidence(n, {cands[i]}, budget);
      });
    for (auto& th : pool) th.join();
    rep.n = n;
    rep.gn_entanglement = parts.empty() ? -1 : parts.front().gn_entanglement;
    for (const auto& part : parts)
      rep.steps.insert(rep.steps.end(), part.steps.begin(), part.steps.end());
  }
  print_evidence(rep);
  return rep.all_ok() ? 0 : 1;
}

// ---- export-dot -----------------------------------------------------------

int run_export_dot(const std::string& path) {
  std::string text = read_file(path);
  switch (sniff(text)) {
    case FileKind::Game:
      std::cout << gmu::to_dot(gmu::parse_game(text));
      return 0;
    case FileKind::Digraph:
      std::cout << gmu::to_dot(gmu::parse_digraph(text));
      return 0;
    default:
      throw std::runtime_error(path + ": expected a game or digraph file");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"games, preorder, entanglement, and simulation toolkit"};
  app.require_subcommand(1);
  int rc = 0;

  std::string va_path;
  auto* va = app.add_subcommand("validate", "parse a file and print a summary");
  va->add_option("file", va_path, "game, digraph, lattice, or simulation file")
      ->required();
  va->callback([&] { rc = run_validate(va_path); });

  int gn_n = 1;
  auto* gg = app.add_subcommand("gen-gn", "print the n-th hard-family game");
  gg->add_option("n", gn_n, "family index (>= 1)")
      ->required()
      ->check(CLI::PositiveNumber);
  gg->callback([&] { rc = run_gen_gn(gn_n); });

  std::string leq_a, leq_b;
  auto* lq = app.add_subcommand("leq", "decide whether the first game is below "
                                       "the second");
  lq->add_option("left", leq_a, "game file")->required();
  lq->add_option("right", leq_b, "game file")->required();
  lq->callback([&] { rc = run_leq(leq_a, leq_b); });

  std::string eq_a, eq_b;
  auto* eq = app.add_subcommand("equiv", "decide equivalence of two games");
  eq->add_option("left", eq_a, "game file")->required();
  eq->add_option("right", eq_b, "game file")->required();
  eq->callback([&] { rc = run_equiv(eq_a, eq_b); });

  std::string ev_game, ev_lat;
  std::vector<std::string> ev_bindings;
  bool ev_all = false;
  auto* ev = app.add_subcommand("eval", "evaluate a game over a finite "
                                        "lattice");
  ev->add_option("game", ev_game, "game file")->required();
  ev->add_option("lattice", ev_lat, "lattice file")->required();
  ev->add_option("--val", ev_bindings,
                 "draw-label or parameter binding label=element (repeatable)");
  ev->add_flag("--all", ev_all, "print the value of every player position");
  ev->callback([&] { rc = run_eval(ev_game, ev_lat, ev_bindings, ev_all); });

  std::string ent_path;
  std::optional<int> ent_k;
  long long ent_budget = 5000000;
  auto* en = app.add_subcommand("ent", "entanglement of a digraph or of a "
                                       "game's move graph");
  en->add_option("file", ent_path, "game or digraph file")->required();
  en->add_option("-k,--cops", ent_k, "ask instead whether k cops catch the "
                                     "thief (exit 0 yes, 1 no)");
  en->add_option("--budget", ent_budget, "state budget for the solver");
  en->callback([&] { rc = run_ent(ent_path, ent_k, ent_budget); });

  std::string sc_path;
  long long sc_budget = 200000;
  auto* sc = app.add_subcommand("sync-check", "check the strongly "
                                              "synchronizing conditions");
  sc->add_option("game", sc_path, "game file")->required();
  sc->add_option("--budget", sc_budget, "cap on pairwise comparisons");
  sc->callback([&] { rc = run_sync_check(sc_path, sc_budget); });

  std::string si_g, si_h, si_s;
  auto* si = app.add_subcommand("simcheck", "check a weak simulation file "
                                            "and its star property");
  si->add_option("left", si_g, "simulated game file")->required();
  si->add_option("right", si_h, "host game file")->required();
  si->add_option("simulation", si_s, "simulation file")->required();
  si->callback([&] { rc = run_simcheck(si_g, si_h, si_s); });

  std::string ex_g, ex_h, ex_out;
  auto* ex = app.add_subcommand("extract-sim", "extract a weak simulation "
                                               "from an equivalence");
  ex->add_option("left", ex_g, "simulated game file")->required();
  ex->add_option("right", ex_h, "host game file")->required();
  ex->add_option("--right-out", ex_out,
                 "write the (possibly padded) host game here");
  ex->callback([&] { rc = run_extract_sim(ex_g, ex_h, ex_out); });

  int evd_n = 1;
  long long evd_budget = 5000000;
  int evd_jobs = 1;
  auto* ed = app.add_subcommand("evidence", "run the full extraction "
                                            "pipeline on the n-th hard game");
  ed->add_option("n", evd_n, "family index (>= 1)")
      ->required()
      ->check(CLI::PositiveNumber);
  ed->add_option("--budget", evd_budget, "entanglement state budget");
  ed->add_option("--jobs", evd_jobs, "parallel candidate pipelines")
      ->check(CLI::PositiveNumber);
  ed->callback([&] { rc = run_evidence(evd_n, evd_budget, evd_jobs); });

  std::string dot_path;
  auto* dt = app.add_subcommand("export-dot", "print a DOT rendering");
  dt->add_option("file", dot_path, "game or digraph file")->required();
  dt->callback([&] { rc = run_export_dot(dot_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
