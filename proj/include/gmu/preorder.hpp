#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gmu/arena.hpp"
#include "gmu/core.hpp"
#include "gmu/solvers.hpp"

namespace gmu {

// Refereed comparison of two boards.  P0 (the mediator) plays Adam's moves on
// the left board and Eva's moves on the right one; P1 (the opponents) drives
// Eva on the left and Adam on the right.  A play is good for the mediator
// when the left trace turns out badly for Eva or the right trace turns out
// well for her; draws reached on both boards must carry the same label.
struct MediatorArena {
  Game left, right;
  Arena arena;  // P0 = mediator
  std::vector<std::pair<std::string, std::string>> pair_of;  // position -> (g, h)
  std::map<std::pair<std::string, std::string>, int> index;
  struct Side {
    bool on_left;
    std::string to;
  };
  std::vector<Side> side;  // parallel to arena.edges

  int position(const std::string& g, const std::string& h) const {
    auto it = index.find({g, h});
    check(it != index.end(), "mediator arena has no position (" + g + ", " + h + ")");
    return it->second;
  }

  int edge_at(const std::string& g, const std::string& h, bool on_left,
              const std::string& to) const {
    for (int e : arena.out[static_cast<size_t>(position(g, h))])
      if (side[static_cast<size_t>(e)].on_left == on_left &&
          side[static_cast<size_t>(e)].to == to)
        return e;
    check(false, "mediator arena has no move (" + g + ", " + h + ") -> " + to);
    return -1;
  }
};

inline MediatorArena mediator_arena(const Game& g, const Game& h) {
  require_valid(g);
  require_valid(h);
  check(g.param_positions().empty() && h.param_positions().empty(),
        "mediator_arena: boards with parameter positions are not comparable");

  MediatorArena ma;
  ma.left = g;
  ma.right = h;
  ma.arena.name = "<" + g.name + ":" + h.name + ">";

  auto gp = g.positions();
  auto hp = h.positions();
  for (const auto& a : gp) {
    for (const auto& b : hp) {
      Kind ka = g.kind_of(a), kb = h.kind_of(b);
      Owner o;
      if (ka == Kind::Draw && kb == Kind::Draw) {
        // Both boards rest on a draw: the owner of the dead position decides
        // the play, so a label match strands P1 and a mismatch strands P0.
        o = (g.label_of(a) == h.label_of(b)) ? Owner::P1 : Owner::P0;
      } else {
        o = (ka == Kind::Eva || kb == Kind::Adam) ? Owner::P1 : Owner::P0;
      }
      int id = ma.arena.add_position(o, "(" + a + " , " + b + ")");
      ma.pair_of.emplace_back(a, b);
      ma.index[{a, b}] = id;
    }
  }

  auto move_color = [](const Game& board, const std::string& to, bool on_left) {
    // A draw never moves again, so entering one cannot matter infinitely
    // often; such moves stay neutral.
    if (board.kind_of(to) == Kind::Draw) return neutral();
    return on_left ? left_rank(board.rank_of(to)) : right_rank(board.rank_of(to));
  };

  for (const auto& a : gp) {
    for (const auto& b : hp) {
      int id = ma.index.at({a, b});
      Kind ka = g.kind_of(a), kb = h.kind_of(b);
      bool p1 = ma.arena.owner[static_cast<size_t>(id)] == Owner::P1;
      // The position's owner moves on the boards it controls: P1 as Eva-left
      // and Adam-right, P0 as Adam-left and Eva-right.
      bool left_live = p1 ? ka == Kind::Eva : ka == Kind::Adam;
      bool right_live = p1 ? kb == Kind::Adam : kb == Kind::Eva;
      if (left_live)
        for (const auto& a2 : g.successors(a)) {
          ma.arena.add_edge(id, ma.index.at({a2, b}), move_color(g, a2, true));
          ma.side.push_back({true, a2});
        }
      if (right_live)
        for (const auto& b2 : h.successors(b)) {
          ma.arena.add_edge(id, ma.index.at({a, b2}), move_color(h, b2, false));
          ma.side.push_back({false, b2});
        }
    }
  }

  ma.arena.start = ma.index.at({g.start, h.start});
  return ma;
}

struct LeqResult {
  bool leq = false;
  MediatorArena ma;
  SolveResult solved;
};

inline LeqResult decide_leq(const Game& g, const Game& h) {
  LeqResult r;
  r.ma = mediator_arena(g, h);
  r.solved = solve_projection_disjunction(r.ma.arena);
  r.leq = r.solved.winner[static_cast<size_t>(r.ma.arena.start)] == Owner::P0;
  return r;
}

inline bool leq(const Game& g, const Game& h) { return decide_leq(g, h).leq; }

// Winner of the comparison started from an arbitrary pair of positions; the
// product is built over all pairs, so every entry is meaningful.
inline bool pair_wins(const LeqResult& r, const std::string& g, const std::string& h) {
  return r.solved.winner[static_cast<size_t>(r.ma.position(g, h))] == Owner::P0;
}

struct EquivResult {
  bool equivalent = false;
  LeqResult fwd, bwd;
};

inline EquivResult equiv(const Game& g, const Game& h) {
  EquivResult e;
  e.fwd = decide_leq(g, h);
  e.bwd = decide_leq(h, g);
  e.equivalent = e.fwd.leq && e.bwd.leq;
  return e;
}

namespace detail {

inline std::string encode_fields(const std::vector<std::string>& fs) {
  std::string out;
  for (const auto& f : fs) out += std::to_string(f.size()) + ":" + f;
  return out;
}

inline std::vector<std::string> decode_fields(const std::string& s) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    size_t colon = s.find(':', i);
    check(colon != std::string::npos, "malformed strategy memory");
    size_t len = std::stoul(s.substr(i, colon - i));
    check(colon + 1 + len <= s.size(), "malformed strategy memory");
    out.push_back(s.substr(colon + 1, len));
    i = colon + 1 + len;
  }
  return out;
}

}  // namespace detail

// Mirror strategy on the self-comparison of one board: whenever the
// opponents pull one side ahead, the mediator replays the recorded moves on
// the lagging side.  Memory is the lead marker plus the pending targets.
inline Strategy copycat_strategy(const MediatorArena& gg) {
  check(gg.left.kind == gg.right.kind && gg.left.rank == gg.right.rank &&
            gg.left.label == gg.right.label && gg.left.moves == gg.right.moves &&
            gg.left.start == gg.right.start,
        "copycat_strategy needs the same board on both sides");
  // Shared immutable tables for the two closures.
  auto ma = std::make_shared<const MediatorArena>(gg);
  Strategy s;
  s.initial = "=";
  s.choice = [ma](int pos, const std::string& mem) -> std::optional<int> {
    check(mem[0] == 'L' || mem[0] == 'R',
          "copycat asked to move at a synced position");
    auto fields = detail::decode_fields(mem.substr(1));
    check(!fields.empty(), "copycat has an empty replay queue");
    const auto& pr = ma->pair_of[static_cast<size_t>(pos)];
    // Lead on the left: replay on the right, and vice versa.
    bool replay_left = mem[0] == 'R';
    return ma->edge_at(pr.first, pr.second, replay_left, fields.front());
  };
  s.update = [ma](const std::string& mem, int e) {
    const auto& sd = ma->side[static_cast<size_t>(e)];
    const auto& dst = ma->pair_of[static_cast<size_t>(ma->arena.edges[static_cast<size_t>(e)].dst)];
    char lead = mem[0];
    auto q = detail::decode_fields(mem.substr(1));
    // Replaying a loop would not change which ranks recur, so the queue only
    // keeps the loop-free part of the lead's path.  This also bounds the
    // memory the strategy needs.
    auto cut = [&] {
      const std::string& behind = (lead == 'L') ? dst.second : dst.first;
      if (q.back() == behind) {
        q.clear();
        lead = '=';
        return;
      }
      for (size_t i = 0; i + 1 < q.size(); ++i)
        if (q[i] == q.back()) {
          q.resize(i + 1);
          return;
        }
    };
    if (lead == '=') {
      lead = sd.on_left ? 'L' : 'R';
      q.assign(1, sd.to);
      cut();
    } else if ((lead == 'L') == sd.on_left) {
      q.push_back(sd.to);  // opponents extend the lead
      cut();
    } else {
      check(!q.empty() && q.front() == sd.to, "copycat replay out of order");
      q.erase(q.begin());
      if (q.empty()) lead = '=';
    }
    return std::string(1, lead) + detail::encode_fields(q);
  };
  return s;
}

// Plays two mediator strategies against each other across a shared middle
// board.  Left-board opponent moves are fed to the first strategy, right-board
// opponent moves to the second; middle-board proposals of either strategy are
// forwarded to the other as opponent moves until a proposal lands on an outer
// board.  The outer trace is then a play of the direct comparison of the
// outer boards.
class ComposedMediator {
 public:
  struct State {
    std::string g, h, k;
    std::string mem_left, mem_right;
  };
  struct Outer {
    bool on_left;
    std::string to;
  };

  ComposedMediator(MediatorArena gh, Strategy s_gh, MediatorArena hk, Strategy s_hk,
                   MediatorArena gk)
      : gh_(std::move(gh)),
        s_gh_(std::move(s_gh)),
        hk_(std::move(hk)),
        s_hk_(std::move(s_hk)),
        gk_(std::move(gk)) {
    check(gh_.right.kind == hk_.left.kind && gh_.right.moves == hk_.left.moves,
          "composition needs one middle board shared by both comparisons");
  }

  const MediatorArena& target() const { return gk_; }

  State initial() const {
    return {gk_.left.start, gh_.right.start, gk_.right.start, s_gh_.initial,
            s_hk_.initial};
  }

  std::string encode(const State& st) const {
    return detail::encode_fields({st.g, st.h, st.k, st.mem_left, st.mem_right});
  }

  State decode(const std::string& mem) const {
    auto f = detail::decode_fields(mem);
    check(f.size() == 5, "composed strategy memory has the wrong shape");
    return {f[0], f[1], f[2], f[3], f[4]};
  }

  // Advance the mediator at an outer position it owns: drain middle-board
  // exchanges between the two strategies, then apply and report the outer
  // move that emerges.  The middle positions visited are appended to
  // `central_log` when given.
  Outer mediator_step(State& st, std::vector<std::string>* central_log = nullptr) const {
    for (int guard = 0; guard < kDrainCap; ++guard) {
      auto [use_first, proposal] = consult(st);
      bool central = use_first ? !proposal.on_left : proposal.on_left;
      if (!central) {
        if (use_first)
          st.g = proposal.to;
        else
          st.k = proposal.to;
        return {use_first, proposal.to};
      }
      // Middle move: hand it to the other strategy as an opponent move.
      if (use_first)
        feed(hk_, s_hk_, st.mem_right, st.h, st.k, true, proposal.to);
      else
        feed(gh_, s_gh_, st.mem_left, st.g, st.h, false, proposal.to);
      st.h = proposal.to;
      if (central_log) central_log->push_back(st.h);
    }
    check(false, "middle-board exchange did not terminate");
    return {};
  }

  // Drain the middle board at a position where both outer boards rest on
  // draws; afterwards the middle board rests on a matching draw as well.
  void finish_central(State& st, std::vector<std::string>* central_log = nullptr) const {
    for (int guard = 0; guard < kDrainCap; ++guard) {
      Kind mid = gh_.right.kind_of(st.h);
      if (mid == Kind::Draw) {
        check(gh_.left.label_of(st.g) == gh_.right.label_of(st.h) &&
                  hk_.right.label_of(st.k) == gh_.right.label_of(st.h),
              "winning strategies ended on mismatched draws");
        return;
      }
      auto [use_first, proposal] = consult(st);
      bool central = use_first ? !proposal.on_left : proposal.on_left;
      check(central, "outer proposal while both outer boards rest on draws");
      if (use_first)
        feed(hk_, s_hk_, st.mem_right, st.h, st.k, true, proposal.to);
      else
        feed(gh_, s_gh_, st.mem_left, st.g, st.h, false, proposal.to);
      st.h = proposal.to;
      if (central_log) central_log->push_back(st.h);
    }
    check(false, "middle-board exchange did not terminate");
  }

  // Apply an opponent's outer move and keep the matching inner strategy
  // informed.
  void opponent_step(State& st, bool on_left, const std::string& to) const {
    if (on_left) {
      feed(gh_, s_gh_, st.mem_left, st.g, st.h, true, to);
      st.g = to;
    } else {
      feed(hk_, s_hk_, st.mem_right, st.h, st.k, false, to);
      st.k = to;
    }
  }

 private:
  static constexpr int kDrainCap = 100000;

  // Which strategy drives at (g, h, k): the middle board's turn decides, and
  // a resting middle defers to whichever outer board the mediator controls.
  std::pair<bool, Outer> consult(State& st) const {
    Kind mid = gh_.right.kind_of(st.h);
    bool use_first =
        mid == Kind::Eva ||
        (mid == Kind::Draw && gh_.left.kind_of(st.g) == Kind::Adam);
    const MediatorArena& ma = use_first ? gh_ : hk_;
    const Strategy& s = use_first ? s_gh_ : s_hk_;
    std::string& mem = use_first ? st.mem_left : st.mem_right;
    int pos = use_first ? ma.position(st.g, st.h) : ma.position(st.h, st.k);
    auto e = s.choice(pos, mem);
    check(e.has_value(), "inner mediator strategy has no move");
    const auto& sd = ma.side[static_cast<size_t>(*e)];
    // Record the mover's own step in its memory before reporting it.
    mem = s.update(mem, *e);
    return {use_first, {sd.on_left, sd.to}};
  }

  static void feed(const MediatorArena& ma, const Strategy& s, std::string& mem,
                   const std::string& a, const std::string& b, bool on_left,
                   const std::string& to) {
    mem = s.update(mem, ma.edge_at(a, b, on_left, to));
  }

  MediatorArena gh_;
  Strategy s_gh_;
  MediatorArena hk_;
  Strategy s_hk_;
  MediatorArena gk_;
};

inline Strategy compose_strategies(const MediatorArena& gh, const Strategy& s_gh,
                                   const MediatorArena& hk, const Strategy& s_hk,
                                   const MediatorArena& gk) {
  auto drv = std::make_shared<const ComposedMediator>(gh, s_gh, hk, s_hk, gk);
  Strategy s;
  s.initial = drv->encode(drv->initial());
  s.choice = [drv](int pos, const std::string& mem) -> std::optional<int> {
    auto st = drv->decode(mem);
    check(pos == drv->target().position(st.g, st.k),
          "composed strategy went out of sync with the play");
    auto probe = st;
    auto mv = drv->mediator_step(probe);
    return drv->target().edge_at(st.g, st.k, mv.on_left, mv.to);
  };
  s.update = [drv](const std::string& mem, int e) {
    auto st = drv->decode(mem);
    const auto& arena = drv->target().arena;
    const auto& sd = drv->target().side[static_cast<size_t>(e)];
    if (arena.owner[static_cast<size_t>(arena.edges[static_cast<size_t>(e)].src)] ==
        Owner::P0) {
      auto mv = drv->mediator_step(st);
      check(mv.on_left == sd.on_left && mv.to == sd.to,
            "composed strategy replay diverged");
    } else {
      drv->opponent_step(st, sd.on_left, sd.to);
    }
    return drv->encode(st);
  };
  return s;
}

}  // namespace gmu
