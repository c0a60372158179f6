#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "gmu/sync.hpp"

using namespace gmu;

namespace {

// Alternating four-cycle: bipartite, but the undirected girth is four.
Game four_cycle_game() {
  Game g;
  g.name = "square";
  for (int i = 0; i < 4; ++i) {
    std::string v = "v" + std::to_string(i);
    g.kind[v] = i % 2 == 0 ? Kind::Eva : Kind::Adam;
    g.rank[v] = 1;
  }
  for (int i = 0; i < 4; ++i)
    g.moves.insert({"v" + std::to_string(i), "v" + std::to_string((i + 1) % 4)});
  g.start = "v0";
  require_valid(g);
  return g;
}

// Eva chooses between two draws carrying the same variable: the draws are
// interchangeable, and deviating from verbatim replay stays winning.
Game twin_draw_game() {
  Game g;
  g.name = "twins";
  g.kind["s"] = Kind::Eva;
  g.rank["s"] = 1;
  g.kind["w1"] = Kind::Draw;
  g.label["w1"] = "x";
  g.kind["w2"] = Kind::Draw;
  g.label["w2"] = "x";
  g.moves.insert({"s", "w1"});
  g.moves.insert({"s", "w2"});
  g.start = "s";
  require_valid(g);
  return g;
}

// The draw sits two moves below the start, so the strict comparison between
// them runs off the move graph.
Game far_comparison_game() {
  Game g;
  g.name = "far";
  g.kind["e"] = Kind::Eva;
  g.rank["e"] = 1;
  g.kind["m"] = Kind::Adam;
  g.rank["m"] = 1;
  g.kind["w"] = Kind::Draw;
  g.label["w"] = "x";
  g.kind["u"] = Kind::Draw;
  g.label["u"] = "y";
  g.moves.insert({"e", "m"});
  g.moves.insert({"m", "w"});
  g.moves.insert({"e", "u"});
  g.start = "e";
  require_valid(g);
  return g;
}

}  // namespace

TEST_CASE("hard family structure: counts, start, bipartite, girth six") {
  for (int n = 1; n <= 4; ++n) {
    GnGame gn = generate_gn(n);
    INFO("n = " << n);
    size_t expect = static_cast<size_t>(n + 5 * n * n);
    CHECK(gn.game.player_positions().size() == expect);
    CHECK(gn.game.draw_positions().size() == expect);
    CHECK(gn.game.start == "v0.0.0");
    CHECK(is_bipartite(gn.game));
    GirthInfo gi = girth_undirected(underlying_digraph(gn.game));
    CHECK_FALSE(gi.has_loop);
    CHECK_FALSE(gi.has_two_cycle);
    REQUIRE(gi.shortest_cycle.has_value());
    CHECK(*gi.shortest_cycle == 6);
  }
}

TEST_CASE("hard family members certify strongly synchronizing") {
  for (int n : {1, 2}) {
    SyncReport rep = is_strongly_synchronizing(generate_gn(n).game);
    INFO("n = " << n);
    CHECK(rep.bipartite);
    CHECK(rep.girth_ok);
    CHECK(rep.condition1_violations.empty());
    CHECK(rep.condition2_violations.empty());
    REQUIRE(rep.ok());
  }
  if (std::getenv("GMU_LONG") != nullptr) {
    REQUIRE(is_strongly_synchronizing(generate_gn(3).game).ok());
  }
}

TEST_CASE("short undirected cycles fail the girth gate") {
  SyncReport rep = is_strongly_synchronizing(four_cycle_game());
  CHECK(rep.bipartite);
  CHECK_FALSE(rep.girth_ok);
  CHECK_FALSE(rep.ok());
}

TEST_CASE("interchangeable twins and far comparisons are flagged") {
  SyncReport twins = is_strongly_synchronizing(twin_draw_game());
  CHECK(twins.bipartite);
  CHECK(twins.girth_ok);
  std::pair<std::string, std::string> pair{"w1", "w2"};
  CHECK(std::find(twins.condition1_violations.begin(),
                  twins.condition1_violations.end(),
                  pair) != twins.condition1_violations.end());

  SyncReport far = is_strongly_synchronizing(far_comparison_game());
  CHECK(far.girth_ok);
  CHECK_FALSE(far.condition2_violations.empty());
  std::pair<std::string, std::string> strict{"w", "e"};
  CHECK(std::find(far.condition2_violations.begin(),
                  far.condition2_violations.end(),
                  strict) != far.condition2_violations.end());
}

TEST_CASE("relay padding keeps the value and the interface") {
  Game g1 = generate_gn(1).game;
  Game padded = pad_initial(g1);
  CHECK(padded.start == "pad0");
  CHECK(padded.kind_of("pad0") == g1.kind_of(g1.start));
  CHECK(padded.successors("pad0") == std::vector<std::string>{g1.start});
  CHECK(equiv(g1, padded).equivalent);

  Game crossed = pad_initial(g1, Kind::Eva);
  CHECK(crossed.kind_of("pad0") == Kind::Eva);
  CHECK(equiv(g1, crossed).equivalent);

  Game twice = pad_initial(padded);
  CHECK(twice.start == "pad1");
  CHECK(equiv(g1, twice).equivalent);
}

TEST_CASE("verbatim replay is the only winning behaviour on the hard family") {
  CHECK(check_copycat_uniqueness(generate_gn(1).game));
  CHECK(check_copycat_uniqueness(generate_gn(2).game));
  // Interchangeable twin draws let the mediator answer either one.
  CHECK_FALSE(check_copycat_uniqueness(twin_draw_game()));
}

TEST_CASE("one-draw games match exactly the draw carrying their variable") {
  for (int n : {1, 2}) {
    GnGame gn = generate_gn(n);
    IntersecReport rep = check_intersec_lemma(gn.game);
    INFO("n = " << n);
    for (const auto& p : rep.problems) INFO(p);
    CHECK(rep.ok);
    long long positions = static_cast<long long>(gn.game.positions().size());
    long long vars = static_cast<long long>(gn.triples.size()) + 1;
    CHECK(rep.item1_checked == positions * vars);
  }
}

TEST_CASE("comparability sweep of the hard family matches the pattern") {
  for (int n : {1, 2}) {
    GnLemmaReport rep = check_gn_lemmas(n);
    INFO("n = " << n);
    for (const auto& p : rep.problems) INFO(p);
    CHECK(rep.draws_below_ok);
    CHECK(rep.draws_above_ok);
    CHECK(rep.players_ok);
    CHECK(rep.strict_along_moves);
    CHECK(rep.strict_pairs > 0);
    REQUIRE(rep.ok());
  }
}

TEST_CASE("extraction from the self-comparison returns the diagonal") {
  for (int n : {1, 2}) {
    Game g = generate_gn(n).game;
    Extraction ex = extract_simulation(g, g);
    INFO("n = " << n);
    CHECK_FALSE(ex.padded);
    auto ps = g.positions();
    CHECK(ex.sim.rel.size() == ps.size());
    for (const auto& p : ps)
      CHECK(ex.sim.rel.count({p, p}) == 1);
    for (const auto& [key, path] : ex.sim.path) {
      auto [from, to, at] = key;
      CHECK(from == at);
      std::vector<std::string> expect{from, to};
      CHECK(path == expect);
    }
    CHECK(ex.sim.path.size() == g.moves.size());
  }
}

TEST_CASE("relay-start partner answers through the relay") {
  Game g2 = generate_gn(2).game;
  Game h = pad_initial(g2);
  Extraction ex = extract_simulation(g2, h);
  CHECK_FALSE(ex.padded);  // the relay copies the start's kind already
  CHECK(ex.sim.rel.count({"v0.0.0", "pad0"}) == 1);
  bool two_step = false;
  for (const auto& to : g2.successors("v0.0.0")) {
    auto it = ex.sim.path.find({"v0.0.0", to, "pad0"});
    REQUIRE(it != ex.sim.path.end());
    CHECK(it->second.front() == "pad0");
    CHECK(it->second.size() >= 3);
    if (it->second.size() == 3) two_step = true;
  }
  CHECK(two_step);
  CHECK(check_weak_simulation(g2, ex.right, ex.sim).ok);
  CHECK(check_star_property(g2, ex.right, ex.sim).ok);
}

TEST_CASE("equivalent partners all extract cleanly") {
  Game g1 = generate_gn(1).game;
  auto cands = make_equivalent_candidates(g1);
  REQUIRE(cands.size() >= 5);
  std::set<std::string> names;
  for (const auto& c : cands) names.insert(c.name);
  CHECK(names.count("relay") == 1);
  CHECK(names.count("relay-crossed") == 1);
  CHECK(names.count("unrolled-start") == 1);
  CHECK(names.count("split-edge") == 1);
  for (const auto& c : cands) {
    INFO(c.name);
    Extraction ex = extract_simulation(g1, c.game);
    CHECK(check_weak_simulation(g1, ex.right, ex.sim).ok);
    CHECK(check_star_property(g1, ex.right, ex.sim).ok);
    if (c.name == "relay-crossed") {
      // The crossed relay puts the starts on different sides, so the
      // extraction adds its own relay on top.
      CHECK(ex.padded);
      CHECK(ex.right.positions().size() == c.game.positions().size() + 1);
    }
  }
}

TEST_CASE("shared answer vertices meet in exactly one position") {
  Game g2 = generate_gn(2).game;
  Game h = pad_initial(g2);
  Extraction ex = extract_simulation(g2, h);
  IntersecReport rep =
      check_intersec_lemma(g2, ex.right, ex.sim, ex.fwd, ex.bwd);
  for (const auto& p : rep.problems) INFO(p);
  CHECK(rep.ok);
  CHECK(rep.item23_vertices > 0);
  CHECK(rep.item2_instances > 0);
  CHECK(rep.item3_instances > 0);
}

TEST_CASE("the evidence pipeline certifies the lemma chain") {
  Game g2 = generate_gn(2).game;
  auto cands = make_equivalent_candidates(g2);
  EvidenceReport rep = hierarchy_evidence(2, cands);
  CHECK(rep.gn_entanglement == 2);
  REQUIRE(rep.steps.size() == cands.size());
  for (const auto& st : rep.steps) {
    INFO(st.candidate << ": " << st.problem);
    CHECK(st.equivalent);
    CHECK(st.extracted);
    CHECK(st.sim_ok);
    CHECK(st.star_ok);
    CHECK(st.intersec_ok);
    CHECK_FALSE(st.ent_skipped);
    CHECK(st.partner_entanglement >= 0);
    CHECK(st.bound_ok);
  }
  REQUIRE(rep.all_ok());
}

TEST_CASE("the hard game is its own witness at level three") {
  std::vector<Candidate> self{{"itself", generate_gn(3).game}};
  EvidenceReport rep = hierarchy_evidence(3, self);
  CHECK(rep.gn_entanglement == 3);
  REQUIRE(rep.steps.size() == 1);
  const EvidenceStep& st = rep.steps.front();
  INFO(st.problem);
  CHECK(st.equivalent);
  CHECK(st.extracted);
  CHECK(st.sim_ok);
  CHECK(st.star_ok);
  CHECK(st.intersec_ok);
  CHECK(st.partner_entanglement == 3);
  CHECK(st.bound_ok);
  REQUIRE(rep.all_ok());
}

TEST_CASE("non-equivalent candidates are rejected before extraction") {
  std::vector<Candidate> wrong{{"wrong", meet_of({"x"})}};
  EvidenceReport rep = hierarchy_evidence(1, wrong);
  REQUIRE(rep.steps.size() == 1);
  CHECK_FALSE(rep.steps.front().equivalent);
  CHECK_FALSE(rep.steps.front().extracted);
  CHECK_FALSE(rep.steps.front().problem.empty());
  CHECK_FALSE(rep.all_ok());
}
