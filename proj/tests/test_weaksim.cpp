#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "gmu/solvers.hpp"
#include "gmu/sync.hpp"
#include "gmu/weaksim.hpp"
#include "support/corpus.hpp"

using namespace gmu;

namespace {

Game cycle_game(int n, const std::string& pre) {
  Game g;
  g.name = pre + std::to_string(n);
  for (int i = 0; i < n; ++i) {
    std::string id = pre + std::to_string(i);
    g.kind[id] = i % 2 == 0 ? Kind::Eva : Kind::Adam;
    g.rank[id] = 1;
  }
  for (int i = 0; i < n; ++i)
    g.moves.insert({pre + std::to_string(i), pre + std::to_string((i + 1) % n)});
  g.start = pre + "0";
  return g;
}

// Each step of the n-cycle answered by two steps of the 2n-cycle.
WeakSimulation doubling_simulation(int n) {
  WeakSimulation sim;
  auto v = [](int i) { return "v" + std::to_string(i); };
  auto w = [](int i) { return "w" + std::to_string(i); };
  for (int i = 0; i < n; ++i) sim.rel.insert({v(i), w(2 * i)});
  for (int i = 0; i < n; ++i)
    sim.path[{v(i), v((i + 1) % n), w(2 * i)}] = {w(2 * i), w(2 * i + 1),
                                                  w((2 * i + 2) % (2 * n))};
  return sim;
}

// Loops are stripped: a loop cannot be answered by a simple path, so games
// with loops have no weak simulation at all, identity included.
Game game_of(const Digraph& d) {
  Game g;
  g.name = d.name;
  for (int v = 0; v < d.n; ++v) {
    g.kind[d.vertex_name(v)] = Kind::Eva;
    g.rank[d.vertex_name(v)] = 1;
  }
  for (int a = 0; a < d.n; ++a)
    for (int b : d.adj[a])
      if (a != b) g.moves.insert({d.vertex_name(a), d.vertex_name(b)});
  if (d.n > 0) g.start = d.vertex_name(0);
  return g;
}

}  // namespace

TEST_CASE("the identity simulation is certified and mutations are caught") {
  Game g = generate_gn(1).game;
  WeakSimulation sim = identity_simulation(g);
  CHECK(check_weak_simulation(g, g, sim).ok);
  CHECK(check_star_property(g, g, sim).ok);

  SECTION("dropping a pair breaks surjectivity") {
    WeakSimulation bad = sim;
    bad.rel.erase({"v0.0.0", "v0.0.0"});
    auto rep = check_weak_simulation(g, g, bad);
    CHECK_FALSE(rep.ok);
    bool hit = false;
    for (const auto& p : rep.problems)
      hit = hit || p.find("not surjective") != std::string::npos;
    CHECK(hit);
  }
  SECTION("relating one right vertex to two left ones breaks functionality") {
    WeakSimulation bad = sim;
    bad.rel.insert({"v0.0.1", "v0.0.0"});
    auto rep = check_weak_simulation(g, g, bad);
    CHECK_FALSE(rep.ok);
  }
  SECTION("a move without an answering path is reported") {
    WeakSimulation bad = sim;
    bad.path.erase({"v0.0.0", "v0.0.1", "v0.0.0"});
    CHECK_FALSE(check_weak_simulation(g, g, bad).ok);
  }
  SECTION("a single-vertex answer is empty and rejected") {
    WeakSimulation bad = sim;
    bad.path[{"v0.0.0", "v0.0.1", "v0.0.0"}] = {"v0.0.0"};
    CHECK_FALSE(check_weak_simulation(g, g, bad).ok);
  }
  SECTION("a revisiting answer is rejected") {
    WeakSimulation bad = sim;
    bad.path[{"v0.0.0", "v0.0.1", "v0.0.0"}] = {"v0.0.0", "w0.0.0", "v0.0.0",
                                                "v0.0.1"};
    CHECK_FALSE(check_weak_simulation(g, g, bad).ok);
  }
  SECTION("an answer ending at an unrelated vertex is rejected") {
    WeakSimulation bad = sim;
    bad.path[{"v0.0.0", "v0.0.1", "v0.0.0"}] = {"v0.0.0", "w0.0.0"};
    CHECK_FALSE(check_weak_simulation(g, g, bad).ok);
  }
}

TEST_CASE("the doubling simulation of cycles is certified end to end") {
  Game c6 = cycle_game(6, "v"), c12 = cycle_game(12, "w");
  WeakSimulation sim = doubling_simulation(6);
  CHECK(check_weak_simulation(c6, c12, sim).ok);
  CHECK(check_star_property(c6, c12, sim).ok);

  StarData sd = star_data(c6, c12, sim);
  // Even vertices carry two answers and project to their star center; odd
  // ones carry one answer, have a predecessor, hence project to its target.
  CHECK(sd.center.size() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(sd.f.at("w" + std::to_string(2 * i)) == "v" + std::to_string(i));
    CHECK(sd.f.at("w" + std::to_string(2 * i + 1)) ==
          "v" + std::to_string((i + 1) % 6));
  }

  for (int i = 0; i < 6; ++i) {
    auto eng = make_sim_cops_engine(c6, c12, sim, "v" + std::to_string(i));
    CHECK(eng.k_tree() == 1);
    auto run = run_sim_cops(eng);
    INFO(run.problem);
    CHECK(run.ok);
  }

  auto eng = make_sim_cops_engine(c6, c12, sim, "v0");
  auto sc = cops_strategy_from_simulation(eng);
  std::string diag;
  CHECK(verify_strategy(sc.game.arena, WinCondition::reachability(Owner::P1),
                        sc.strategy, Owner::P0, &diag));
  INFO(diag);

  auto bound = verify_entanglement_bound(c6, c12, sim);
  CHECK_FALSE(bound.skipped);
  CHECK(bound.holds);
  CHECK(bound.left_ent == 1);
  CHECK(bound.right_ent == 1);
}

TEST_CASE("short undirected cycles on the left are rejected") {
  SECTION("a triangle") {
    Game c3 = cycle_game(3, "v");
    CHECK_FALSE(check_star_property(c3, c3, identity_simulation(c3)).ok);
  }
  SECTION("an opposed pair") {
    Game g;
    g.kind["a"] = Kind::Eva;
    g.rank["a"] = 1;
    g.kind["b"] = Kind::Adam;
    g.rank["b"] = 1;
    g.moves.insert({"a", "b"});
    g.moves.insert({"b", "a"});
    CHECK_FALSE(check_star_property(g, g, identity_simulation(g)).ok);
  }
  SECTION("a loop") {
    Game g;
    g.kind["a"] = Kind::Eva;
    g.rank["a"] = 1;
    g.moves.insert({"a", "a"});
    CHECK_FALSE(check_star_property(g, g, identity_simulation(g)).ok);
  }
  SECTION("a plain four-cycle is fine") {
    Game c4 = cycle_game(4, "v");
    CHECK(check_star_property(c4, c4, identity_simulation(c4)).ok);
  }
}

TEST_CASE("answers of unrelated moves through one vertex are rejected") {
  // Two disjoint left edges routed through a shared right hub.
  Game g;
  for (std::string id : {"a", "b", "c", "d"}) {
    g.kind[id] = Kind::Eva;
    g.rank[id] = 1;
  }
  g.moves.insert({"a", "b"});
  g.moves.insert({"c", "d"});
  Game h;
  for (std::string id : {"ha", "hb", "hc", "hd", "s"}) {
    h.kind[id] = Kind::Eva;
    h.rank[id] = 1;
  }
  h.moves.insert({"ha", "s"});
  h.moves.insert({"s", "hb"});
  h.moves.insert({"hc", "s"});
  h.moves.insert({"s", "hd"});
  // Keep the second source reachable from the first, so the per-start
  // machinery sees both answers.
  h.moves.insert({"hb", "hc"});
  WeakSimulation sim;
  sim.rel = {{"a", "ha"}, {"b", "hb"}, {"c", "hc"}, {"d", "hd"}};
  sim.path[{"a", "b", "ha"}] = {"ha", "s", "hb"};
  sim.path[{"c", "d", "hc"}] = {"hc", "s", "hd"};
  CHECK(check_weak_simulation(g, h, sim).ok);
  CHECK_FALSE(check_star_property(g, h, sim).ok);
  CHECK_THROWS(star_data(g, h, sim));
  CHECK_THROWS(make_sim_cops_engine(g, h, sim, "a"));
}

TEST_CASE("single-answer vertices project by the predecessor rule") {
  Game g;
  g.kind["a"] = Kind::Eva;
  g.rank["a"] = 1;
  g.kind["b"] = Kind::Adam;
  g.rank["b"] = 1;
  g.moves.insert({"a", "b"});

  SECTION("no predecessor keeps the source") {
    Game h;
    h.kind["h0"] = Kind::Eva;
    h.rank["h0"] = 1;
    h.kind["h1"] = Kind::Adam;
    h.rank["h1"] = 1;
    h.moves.insert({"h0", "h1"});
    WeakSimulation sim;
    sim.rel = {{"a", "h0"}, {"b", "h1"}};
    sim.path[{"a", "b", "h0"}] = {"h0", "h1"};
    REQUIRE(check_weak_simulation(g, h, sim).ok);
    StarData sd = star_data(g, h, sim);
    CHECK(sd.f.at("h0") == "a");
    CHECK(sd.f.at("h1") == "b");
    CHECK(sd.center.empty());
  }
  SECTION("a predecessor switches to the target") {
    Game h;
    h.kind["p"] = Kind::Adam;
    h.rank["p"] = 1;
    h.kind["h0"] = Kind::Eva;
    h.rank["h0"] = 1;
    h.kind["h1"] = Kind::Adam;
    h.rank["h1"] = 1;
    h.moves.insert({"p", "h0"});
    h.moves.insert({"h0", "h1"});
    WeakSimulation sim;
    sim.rel = {{"a", "h0"}, {"b", "h1"}};
    sim.path[{"a", "b", "h0"}] = {"h0", "h1"};
    REQUIRE(check_weak_simulation(g, h, sim).ok);
    StarData sd = star_data(g, h, sim);
    CHECK(sd.f.at("h0") == "b");
    CHECK(sd.f.at("h1") == "b");
  }
}

TEST_CASE("simulations lift through unravelling covers") {
  SECTION("the doubling simulation lifts to the unravelled cycle") {
    Game c6 = cycle_game(6, "v"), c12 = cycle_game(12, "w");
    WeakSimulation sim = doubling_simulation(6);
    Digraph d = underlying_digraph(c12);
    auto u = unravel(d, *d.index_of("w0"), {});
    GameCover cov = cover_of_unravelling(c12, u);
    std::string why;
    CHECK(is_game_cover(cov, &why));
    INFO(why);
    WeakSimulation lifted = lift_through_cover(sim, cov);
    CHECK(check_weak_simulation(c6, cov.domain, lifted).ok);
    CHECK(check_star_property(c6, cov.domain, lifted).ok);
  }
  SECTION("identity simulations lift over random reachable games") {
    std::mt19937_64 rng(20260822);
    int lifted_games = 0;
    for (int trial = 0; trial < 60; ++trial) {
      Digraph d = corpus::random_digraph(rng, 3 + trial % 5, 0.35);
      Game whole = game_of(d);
      Game h = reachable_subgame(whole, whole.start);
      Digraph hd = underlying_digraph(h);
      auto u = unravel(hd, *hd.index_of(h.start), {});
      GameCover cov = cover_of_unravelling(h, u);
      std::string why;
      REQUIRE(is_game_cover(cov, &why));
      WeakSimulation lifted =
          lift_through_cover(identity_simulation(h), cov);
      REQUIRE(check_weak_simulation(h, cov.domain, lifted).ok);
      ++lifted_games;
    }
    CHECK(lifted_games == 60);
  }
  SECTION("a non-cover is rejected") {
    Game c4 = cycle_game(4, "v");
    GameCover bad;
    bad.domain = c4;
    bad.codomain = c4;
    for (const auto& p : c4.positions()) bad.rho[p] = "v0";
    CHECK_FALSE(is_game_cover(bad));
    CHECK_THROWS(lift_through_cover(identity_simulation(c4), bad));
  }
}

TEST_CASE("the simulation text format round trips") {
  WeakSimulation sim = doubling_simulation(6);
  WeakSimulation back = parse_simulation(serialize(sim));
  CHECK(back.rel == sim.rel);
  CHECK(back.path == sim.path);

  CHECK_THROWS_AS(parse_simulation("rel a\n"), ParseError);
  CHECK_THROWS_AS(parse_simulation("path a b h a0 a1\n"), ParseError);
  CHECK_THROWS_AS(parse_simulation("path a b h :\n"), ParseError);
  CHECK_THROWS_AS(parse_simulation("frob a b\n"), ParseError);
  CHECK_THROWS_AS(
      parse_simulation("path a b h : h x\npath a b h : h y\n"), ParseError);
  WeakSimulation commented = parse_simulation("# note\nrel a h\n\n");
  CHECK(commented.rel.size() == 1);
}

TEST_CASE("the constructed cops win from every start of the hard games") {
  for (int n : {1, 2}) {
    Game g = generate_gn(n).game;
    WeakSimulation sim = identity_simulation(g);
    REQUIRE(check_weak_simulation(g, g, sim).ok);
    REQUIRE(check_star_property(g, g, sim).ok);
    for (const auto& start : g.positions()) {
      auto eng = make_sim_cops_engine(g, g, sim, start);
      auto run = run_sim_cops(eng);
      INFO("n=" << n << " start=" << start << ": " << run.problem);
      REQUIRE(run.ok);
    }
  }
}

TEST_CASE("the packaged strategy wins the explicit restricted game") {
  Game g = generate_gn(1).game;
  WeakSimulation sim = identity_simulation(g);
  for (std::string start : {"v0.0.0", "v0.0.3", "w0.0.2"}) {
    auto eng = make_sim_cops_engine(g, g, sim, start);
    auto sc = cops_strategy_from_simulation(eng);
    std::string diag;
    bool won = verify_strategy(sc.game.arena,
                               WinCondition::reachability(Owner::P1),
                               sc.strategy, Owner::P0, &diag);
    INFO(start << ": " << diag);
    CHECK(won);
    CHECK(sc.game.retire_variant);
    CHECK(sc.game.k == sc.k_tree + 2);
  }
}

TEST_CASE("the entanglement bound check reports skips honestly") {
  Game c6 = cycle_game(6, "v"), c12 = cycle_game(12, "w");
  WeakSimulation sim = doubling_simulation(6);
  auto tiny = verify_entanglement_bound(c6, c12, sim, 10);
  CHECK(tiny.skipped);
  CHECK_FALSE(tiny.holds);

  WeakSimulation broken = sim;
  broken.rel.erase({"v0", "w0"});
  CHECK_THROWS(verify_entanglement_bound(c6, c12, broken));
}
