#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gmu/algebra.hpp"
#include "gmu/lattice.hpp"
#include "gmu/preorder.hpp"
#include "support/corpus.hpp"
#include "support/lattices.hpp"

using namespace gmu;

namespace {

corpus::TermOpts small_opts() {
  corpus::TermOpts o;
  o.max_depth = 4;
  o.max_width = 3;
  o.max_binders = 2;
  o.free_vars = {"x", "y"};
  return o;
}

// Skip pathological draws from the generator: the record construction is
// factorial in the color count, so budget records x positions.
bool tractable(const MediatorArena& ma) {
  int c = distinct_colors(ma.arena);
  if (c > 6) return false;
  long records = 1;
  for (int i = 2; i <= c; ++i) records *= i;
  return records * ma.arena.size() <= 150000;
}

std::vector<std::string> labels_of(const Game& g) {
  std::set<std::string> s;
  for (const auto& d : g.draw_positions()) s.insert(g.label_of(d));
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("comparison of bare variables") {
  Game x = variable_game("x");
  Game y = variable_game("y");
  CHECK(leq(x, x));
  CHECK(!leq(x, y));
  CHECK(!leq(y, x));
}

TEST_CASE("comparisons among meets and joins of variables") {
  Game m = meet_of({"x", "y"});
  Game j = join_of({"x", "y"});
  Game x = variable_game("x");

  CHECK(leq(m, x));
  CHECK(!leq(x, m));
  CHECK(leq(x, j));
  CHECK(!leq(j, x));
  CHECK(leq(m, j));
  CHECK(!leq(j, m));
  CHECK(leq(m, m));
  CHECK(leq(j, j));

  // The empty meet is the greatest game, the empty join the least.
  CHECK(leq(x, meet_of({})));
  CHECK(leq(join_of({}), x));
  CHECK(leq(join_of({}), meet_of({})));
  CHECK(!leq(meet_of({}), join_of({})));
}

TEST_CASE("mediator arena shape on a two-sided choice") {
  // Left board at an Eva position, right board at an Adam position: the
  // opponents own the pair and may move on either side.
  Game j = join_of({"x"});
  Game m = meet_of({"x"});
  auto ma = mediator_arena(j, m);
  int p = ma.position("q0", "p0");
  CHECK(ma.arena.owner[p] == Owner::P1);
  REQUIRE(ma.arena.out[p].size() == 2);
  bool saw_left = false, saw_right = false;
  for (int e : ma.arena.out[p]) {
    (ma.side[e].on_left ? saw_left : saw_right) = true;
    CHECK(ma.arena.edges[e].color.k == Color::K::Neutral);  // into draws
  }
  CHECK(saw_left);
  CHECK(saw_right);

  // Matched draw pair strands P1; mismatched strands P0.
  CHECK(ma.arena.owner[ma.position("x", "x")] == Owner::P1);
  CHECK(ma.arena.out[ma.position("x", "x")].empty());
  auto mm = mediator_arena(join_of({"x"}), meet_of({"y"}));
  CHECK(mm.arena.owner[mm.position("x", "y")] == Owner::P0);
  CHECK(mm.arena.out[mm.position("x", "y")].empty());
}

TEST_CASE("reflexivity holds on generated boards") {
  std::mt19937_64 rng(2024);
  int done = 0, skipped = 0;
  while (done < 25) {
    Game g = corpus::random_term_game(rng, small_opts());
    auto ma = mediator_arena(g, g);
    if (!tractable(ma)) {
      ++skipped;
      REQUIRE(skipped < 200);
      continue;
    }
    auto r = decide_leq(g, g);
    INFO(serialize(g));
    REQUIRE(r.leq);
    ++done;
  }
}

TEST_CASE("mediator strategies from the solver survive verification") {
  std::mt19937_64 rng(515);
  int done = 0, skipped = 0;
  while (done < 10) {
    Game g = corpus::random_term_game(rng, small_opts());
    Game h = corpus::random_term_game(rng, small_opts());
    auto ma = mediator_arena(g, h);
    if (!tractable(ma)) {
      ++skipped;
      REQUIRE(skipped < 200);
      continue;
    }
    auto r = decide_leq(g, h);
    std::string diag;
    if (r.leq) {
      REQUIRE(verify_strategy(r.ma.arena, WinCondition::projection_disjunction(),
                              r.solved.s0, Owner::P0, &diag));
    } else {
      REQUIRE(verify_strategy(r.ma.arena, WinCondition::projection_disjunction(),
                              r.solved.s1, Owner::P1, &diag));
    }
    INFO(diag);
    ++done;
  }
}

TEST_CASE("copycat wins the self-comparison of generated boards") {
  std::mt19937_64 rng(99);
  int done = 0, skipped = 0;
  while (done < 15) {
    Game g = corpus::random_term_game(rng, small_opts());
    auto ma = mediator_arena(g, g);
    if (!tractable(ma)) {
      ++skipped;
      REQUIRE(skipped < 200);
      continue;
    }
    auto cc = copycat_strategy(ma);
    std::string diag;
    bool ok = verify_strategy(ma.arena, WinCondition::projection_disjunction(), cc,
                              Owner::P0, &diag);
    INFO(serialize(g));
    INFO(diag);
    REQUIRE(ok);
    ++done;
  }
}

TEST_CASE("comparison is invariant under swapping boards and players") {
  std::mt19937_64 rng(333);
  int done = 0, skipped = 0;
  while (done < 12) {
    Game g = corpus::random_term_game(rng, small_opts());
    Game h = corpus::random_term_game(rng, small_opts());
    auto ma = mediator_arena(g, h);
    if (!tractable(ma)) {
      ++skipped;
      REQUIRE(skipped < 200);
      continue;
    }
    bool fwd = decide_leq(g, h).leq;
    bool via_duals = decide_leq(dual(h), dual(g)).leq;
    INFO(serialize(g));
    INFO(serialize(h));
    REQUIRE(fwd == via_duals);
    ++done;
  }
}

TEST_CASE("joining extra alternatives only goes up") {
  std::mt19937_64 rng(7781);
  int done = 0, skipped = 0;
  while (done < 10) {
    Game g = corpus::random_term_game(rng, small_opts());
    Game f = corpus::random_term_game(rng, small_opts());
    Game h = join_games({g, f});
    auto ma = mediator_arena(g, h);
    if (!tractable(ma) || !tractable(mediator_arena(h, h))) {
      ++skipped;
      REQUIRE(skipped < 200);
      continue;
    }
    INFO(serialize(g));
    INFO(serialize(h));
    REQUIRE(leq(g, h));
    ++done;
  }
}

TEST_CASE("composition turns two mediator wins into a verified third") {
  std::mt19937_64 rng(40991);
  int done = 0, skipped = 0;
  while (done < 8) {
    Game g = corpus::random_term_game(rng, small_opts());
    Game f1 = corpus::random_term_game(rng, small_opts());
    Game f2 = corpus::random_term_game(rng, small_opts());
    Game h = join_games({g, f1});
    Game k = join_games({h, f2});
    auto gh = mediator_arena(g, h);
    auto hk = mediator_arena(h, k);
    auto gk = mediator_arena(g, k);
    if (!tractable(gh) || !tractable(hk) || !tractable(gk)) {
      ++skipped;
      REQUIRE(skipped < 400);
      continue;
    }
    auto r1 = decide_leq(g, h);
    auto r2 = decide_leq(h, k);
    REQUIRE(r1.leq);
    REQUIRE(r2.leq);

    auto composed = compose_strategies(r1.ma, r1.solved.s0, r2.ma, r2.solved.s0, gk);
    std::string diag;
    bool ok = verify_strategy(gk.arena, WinCondition::projection_disjunction(),
                              composed, Owner::P0, &diag);
    INFO(diag);
    REQUIRE(ok);
    REQUIRE(decide_leq(g, k).leq);
    ++done;
  }
}

TEST_CASE("winning the comparison implies the values are ordered") {
  std::mt19937_64 rng(60601);
  auto c2 = chain_lattice(2);
  auto m3 = diamond_m3();
  int certified = 0, skipped = 0;
  while (certified < 12) {
    Game g = corpus::random_term_game(rng, small_opts());
    Game h = (certified % 2 == 0) ? join_games({g, corpus::random_term_game(rng, small_opts())})
                                  : corpus::random_term_game(rng, small_opts());
    auto ma = mediator_arena(g, h);
    if (!tractable(ma)) {
      ++skipped;
      REQUIRE(skipped < 400);
      continue;
    }
    if (!decide_leq(g, h).leq) continue;
    ++certified;

    std::set<std::string> lbls;
    for (const auto& x : labels_of(g)) lbls.insert(x);
    for (const auto& x : labels_of(h)) lbls.insert(x);
    std::vector<std::string> labels(lbls.begin(), lbls.end());
    if (labels.size() > 6) continue;

    // Exhaustive over the two-element chain, sampled over the diamond.
    std::vector<std::map<std::string, int>> probes;
    for (int mask = 0; mask < (1 << labels.size()); ++mask) {
      std::map<std::string, int> v;
      for (size_t i = 0; i < labels.size(); ++i) v[labels[i]] = (mask >> i) & 1;
      probes.push_back(v);
    }
    for (const auto& v : probes) {
      int a = eval_at_start(g, c2, valuation_from_labels(g, v));
      int b = eval_at_start(h, c2, valuation_from_labels(h, v));
      INFO(serialize(g));
      INFO(serialize(h));
      REQUIRE(c2.le(a, b));
    }
    for (int probe = 0; probe < 10; ++probe) {
      std::map<std::string, int> v;
      for (const auto& x : labels)
        v[x] = std::uniform_int_distribution<int>(0, m3.size() - 1)(rng);
      int a = eval_at_start(g, m3, valuation_from_labels(g, v));
      int b = eval_at_start(h, m3, valuation_from_labels(h, v));
      REQUIRE(m3.le(a, b));
    }
  }
}

TEST_CASE("pairwise winners match restarted comparisons") {
  std::mt19937_64 rng(1213);
  int done = 0, skipped = 0;
  while (done < 3) {
    Game g = corpus::random_term_game(rng, small_opts());
    Game h = corpus::random_term_game(rng, small_opts());
    auto ma = mediator_arena(g, h);
    if (!tractable(ma)) {
      ++skipped;
      REQUIRE(skipped < 200);
      continue;
    }
    auto r = decide_leq(g, h);
    auto gp = g.positions();
    auto hp = h.positions();
    std::uniform_int_distribution<size_t> pg(0, gp.size() - 1);
    std::uniform_int_distribution<size_t> ph(0, hp.size() - 1);
    for (int probe = 0; probe < 4; ++probe) {
      std::string a = gp[pg(rng)], b = hp[ph(rng)];
      bool direct = decide_leq(repoint(g, a), repoint(h, b)).leq;
      INFO("pair (" << a << ", " << b << ")");
      REQUIRE(pair_wins(r, a, b) == direct);
    }
    ++done;
  }
}

TEST_CASE("equivalence is two-way comparison") {
  Game m = meet_of({"x", "y"});
  Game m2 = meet_of({"y", "x"});
  auto e = equiv(m, m2);
  CHECK(e.equivalent);
  CHECK(!equiv(m, join_of({"x", "y"})).equivalent);
}
