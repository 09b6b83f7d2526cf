#include "tfel/lemma.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "tfel/layer_file.hpp"  // mix64

namespace tfel {

namespace {

constexpr Direction kOrder[4] = {Direction::Right, Direction::Left, Direction::Up,
                                 Direction::Down};

// Which rule of the case analysis picked the move; the checker keys its
// loop-iteration bookkeeping on this.
enum class Rule { Win, Forcing, Opening, Restore, UpFill, UpMerge, Oscillate, Forced };

struct Decision {
  Direction dir;
  Rule rule;
};

bool goal_made(const Board& b, int goal_exp) { return max_exp(b) >= goal_exp; }

int count_at_least(const Board& b, int exp) {
  int n = 0;
  for (int i = 0; i < b.cells(); ++i)
    if (b.cell[i] >= exp) ++n;
  return n;
}

int row_tiles(const Board& b, int r) {
  int n = 0;
  for (int c = 0; c < b.cols; ++c)
    if (b.at(r, c)) ++n;
  return n;
}

// Two equal tiles side by side in the first two rows (the unmerged 256
// pair of the starting configuration, relative to the goal).
bool has_pair_row01(const Board& b, int exp) {
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c + 1 < b.cols; ++c)
      if (b.at(r, c) == exp && b.at(r, c + 1) == exp) return true;
  return false;
}

bool rows01_left_packed(const Board& b) {
  for (int r = 0; r < 2; ++r) {
    bool gap = false;
    for (int c = 0; c < b.cols; ++c) {
      if (!b.at(r, c))
        gap = true;
      else if (gap)
        return false;
    }
  }
  return true;
}

// An adjacent equal pair of big tiles somewhere on the board; the cheap
// gate in front of the forced-win search.
bool big_pair_adjacent(const Board& b, int goal_exp) {
  for (int r = 0; r < b.rows; ++r)
    for (int c = 0; c < b.cols; ++c) {
      int v = b.at(r, c);
      if (v < goal_exp - 2) continue;
      if (c + 1 < b.cols && b.at(r, c + 1) == v) return true;
      if (r + 1 < b.rows && b.at(r + 1, c) == v) return true;
    }
  return false;
}

bool forced_win(const Board& b, int goal_exp, int moves);

// After the player's move: true when every spawn still leaves a forced
// win. No empty cell means the next move comes with no spawn at all.
bool spawn_proof(const Board& b, int goal_exp, int moves) {
  bool any_empty = false;
  for (int i = 0; i < b.cells(); ++i) {
    if (b.cell[i]) continue;
    any_empty = true;
    for (int exp = 1; exp <= 2; ++exp) {
      Board sb = b;
      sb.cell[i] = uint8_t(exp);
      if (!forced_win(sb, goal_exp, moves)) return false;
    }
  }
  if (!any_empty) return forced_win(b, goal_exp, moves);
  return true;
}

// Guaranteed goal within `moves` player moves against any spawner. The
// endgame of the proof lives here: merging the stacked goal/4 pair next
// to the goal/2 tile and then the final merge are spawn-proof because a
// spawn cannot land between adjacent tiles.
bool forced_win(const Board& b, int goal_exp, int moves) {
  std::optional<Board> next[4];
  for (int i = 0; i < 4; ++i) {
    next[i] = swipe(b, kOrder[i]);
    if (next[i] && goal_made(*next[i], goal_exp)) return true;
  }
  if (moves < 2) return false;
  for (int i = 0; i < 4; ++i)
    if (next[i] && big_pair_adjacent(*next[i], goal_exp) &&
        spawn_proof(*next[i], goal_exp, moves - 1))
      return true;
  return false;
}

// Row of the topmost goal/2 tile; 0 unless the big block got pushed down.
int anchor_row(const Board& b, int goal_exp) {
  for (int r = 0; r < b.rows; ++r)
    for (int c = 0; c < b.cols; ++c)
      if (b.at(r, c) == goal_exp - 1) return r;
  return 0;
}

// The two goal/4 tiles must stay horizontally or vertically mergeable;
// once they sit in the anchor row on opposite sides of the goal/2 tile,
// no move can ever bring them together again.
bool splits_big_pair(const Board& b, int goal_exp) {
  const int g1 = goal_exp - 1, g2 = goal_exp - 2;
  const int r = anchor_row(b, goal_exp);
  int c1 = -1, cmid = -1, c2 = -1;
  for (int c = 0; c < b.cols; ++c) {
    if (b.at(r, c) == g2) (c1 < 0 ? c1 : c2) = c;
    if (b.at(r, c) == g1) cmid = c;
  }
  return c1 >= 0 && c2 >= 0 && cmid > c1 && cmid < c2;
}

// Swipes needed, ignoring spawns, before the goal/4 pair stands stacked;
// the forcing rule takes over from distance-one positions.
int align_steps(const Board& b, int goal_exp) {
  if (big_pair_adjacent(b, goal_exp)) return 0;
  std::array<std::optional<Board>, 4> layer1;
  for (int i = 0; i < 4; ++i) {
    layer1[i] = swipe(b, kOrder[i]);
    if (layer1[i] && big_pair_adjacent(*layer1[i], goal_exp)) return 1;
  }
  for (const auto& nb : layer1) {
    if (!nb) continue;
    for (Direction d : kOrder) {
      auto r = swipe(*nb, d);
      if (r && big_pair_adjacent(*r, goal_exp)) return 2;
    }
  }
  return 3;
}

// Manhattan distance of the closest goal/4 pair from orthogonal
// adjacency; 0 when a merge is already only one swipe away.
int align_distance(const Board& b, int goal_exp) {
  const int g2 = goal_exp - 2;
  std::vector<std::pair<int, int>> at;
  for (int r = 0; r < b.rows; ++r)
    for (int c = 0; c < b.cols; ++c)
      if (b.at(r, c) == g2) at.emplace_back(r, c);
  if (at.size() < 2) return 0;
  int best = 99;
  for (size_t i = 0; i < at.size(); ++i)
    for (size_t j = i + 1; j < at.size(); ++j) {
      int dr = std::abs(at[i].first - at[j].first);
      int dc = std::abs(at[i].second - at[j].second);
      best = std::min({best, dc + std::abs(dr - 1), std::abs(dc - 1) + dr});
    }
  return best;
}

// Column of the goal/2 tile in its row. Anything to its left can never
// get past it again, so the tile belongs in the corner.
int anchor_exposure(const Board& b, int goal_exp) {
  for (int r = 0; r < b.rows; ++r)
    for (int c = 0; c < b.cols; ++c)
      if (b.at(r, c) == goal_exp - 1) return c;
  return 0;
}

// Summed row indices of the big tiles; junk piling on top of a sunk
// goal/4 tile is how the losing boards died.
int big_depth(const Board& b, int goal_exp) {
  int s = 0;
  for (int r = 0; r < b.rows; ++r)
    for (int c = 0; c < b.cols; ++c)
      if (b.at(r, c) >= goal_exp - 2) s += r;
  return s;
}

// Adjacent equal junk pairs are future merges; rows silt up into a dead
// grid exactly when the junk runs out of them.
int match_pairs(const Board& b, int goal_exp) {
  int n = 0;
  for (int r = 0; r < b.rows; ++r)
    for (int c = 0; c < b.cols; ++c) {
      int v = b.at(r, c);
      if (!v || v >= goal_exp - 2) continue;
      if (c + 1 < b.cols && b.at(r, c + 1) == v) ++n;
      if (r + 1 < b.rows && b.at(r + 1, c) == v) ++n;
    }
  return n;
}

// Junk sitting in the anchor's row on its left side can never get back
// past it; letting a move add such a tile poisons the corner.
int locked_junk(const Board& b, int goal_exp) {
  for (int r = 0; r < b.rows; ++r)
    for (int c = 0; c < b.cols; ++c)
      if (b.at(r, c) == goal_exp - 1) {
        int n = 0;
        for (int c2 = 0; c2 < c; ++c2)
          if (b.at(r, c2) && b.at(r, c2) < goal_exp - 2) ++n;
        return n;
      }
  return 0;
}

int count_row0_big(const Board& b, int goal_exp) {
  int n = 0;
  for (int c = 0; c < b.cols; ++c)
    if (b.at(0, c) >= goal_exp - 2) ++n;
  return n;
}

// Death search on a post-move board: true when the player can stay alive
// for `plies` more moves whatever spawns arrive. Boards with breathing
// room are alive by fiat, which keeps the recursion cheap.
bool survives(const Board& b, int plies) {
  if (plies == 0 || count_empty(b) >= 4) return true;
  bool any_empty = false;
  for (int i = 0; i < b.cells(); ++i) {
    if (b.cell[i]) continue;
    any_empty = true;
    for (int exp = 1; exp <= 2; ++exp) {
      Board sb = b;
      sb.cell[i] = uint8_t(exp);
      bool alive = false;
      for (Direction d : kOrder) {
        auto r = swipe(sb, d);
        if (r && survives(*r, plies - 1)) {
          alive = true;
          break;
        }
      }
      if (!alive) return false;
    }
  }
  if (!any_empty) {
    for (Direction d : kOrder) {
      auto r = swipe(b, d);
      if (r && survives(*r, plies - 1)) return true;
    }
    return false;
  }
  return true;
}

// A Down nothing else can answer turns the block upside down along the
// bottom edge, which is close to fatal; flag positions where one spawn
// forces that.
int forced_down_risk(const Board& b) {
  for (int i = 0; i < b.cells(); ++i) {
    if (b.cell[i]) continue;
    for (int exp = 1; exp <= 2; ++exp) {
      Board sb = b;
      sb.cell[i] = uint8_t(exp);
      if (!swipe(sb, Direction::Left) && !swipe(sb, Direction::Right) &&
          !swipe(sb, Direction::Up) && swipe(sb, Direction::Down))
        return 1;
    }
  }
  return 0;
}

// Worst spawn the adversary has against this position: the best reply's
// empty-cell count, or -1 when some spawn leaves no legal reply at all.
int worst_spawn_mobility(const Board& b) {
  int worst = INT32_MAX;
  for (int i = 0; i < b.cells(); ++i) {
    if (b.cell[i]) continue;
    for (int exp = 1; exp <= 2; ++exp) {
      Board sb = b;
      sb.cell[i] = uint8_t(exp);
      int best = -1;
      for (Direction d : kOrder) {
        auto r = swipe(sb, d);
        if (r) best = std::max(best, count_empty(*r));
      }
      worst = std::min(worst, best);
      if (worst < 0) return -1;
    }
  }
  return worst == INT32_MAX ? count_empty(b) : worst;
}

struct PolicyInput {
  const Board& b;
  LemmaOptions opts;
  PolicyMutation mutation;
  int goal_exp;
};

Board flip_vertical(const Board& b) {
  Board f(b.rows, b.cols);
  for (int r = 0; r < b.rows; ++r)
    for (int c = 0; c < b.cols; ++c) f.at(r, c) = b.at(b.rows - 1 - r, c);
  return f;
}

bool bottom_anchored(const Board& b, int goal_exp) {
  return anchor_row(b, goal_exp) >= (b.rows + 1) / 2;
}

Decision decide_top(const PolicyInput& in) {
  const Board& b = in.b;
  const bool avoid_goal = in.mutation == PolicyMutation::AvoidGoal;

  std::optional<Board> next[4];
  for (int i = 0; i < 4; ++i) next[i] = swipe(b, kOrder[i]);
  auto allowed = [&](int i) {
    return next[i] && !(avoid_goal && goal_made(*next[i], in.goal_exp));
  };

  if (!avoid_goal) {
    for (int i = 0; i < 4; ++i)
      if (next[i] && goal_made(*next[i], in.goal_exp)) return {kOrder[i], Rule::Win};
    // A short forced finish against every spawn choice, if one exists.
    for (int i = 0; i < 4; ++i)
      if (next[i] && big_pair_adjacent(*next[i], in.goal_exp) &&
          spawn_proof(*next[i], in.goal_exp, 2))
        return {kOrder[i], Rule::Forcing};
  }

  // Opening: merge the two goal/8 tiles leftward.
  if (in.mutation != PolicyMutation::SkipOpeningLeft && has_pair_row01(b, in.goal_exp - 3) &&
      allowed(1) && survives(*next[1], 6))
    return {Direction::Left, Rule::Opening};

  // The big block sank (a forced Down); pull it back up before anything
  // else.
  if (anchor_row(b, in.goal_exp) > 0 && allowed(2) &&
      !splits_big_pair(*next[2], in.goal_exp) && survives(*next[2], 6))
    return {Direction::Up, Rule::Restore};

  // Up repetitions, as long as they keep feeding the first two rows and
  // leave the big-tile geometry intact.
  if (allowed(2) && !splits_big_pair(*next[2], in.goal_exp) &&
      count_row0_big(*next[2], in.goal_exp) <= count_row0_big(b, in.goal_exp) &&
      locked_junk(*next[2], in.goal_exp) <= locked_junk(b, in.goal_exp) &&
      row_tiles(*next[2], 0) + row_tiles(*next[2], 1) >
          row_tiles(b, 0) + row_tiles(b, 1) &&
      survives(*next[2], 6))
    return {Direction::Up, Rule::UpFill};

  // Oscillation: Right from a left-packed front, Left on the way back.
  // Candidates are ranked by safety so the junk rows never silt up into a
  // dead board: survive the worst spawn first, avoid hoisting big tiles
  // into the first row, then maximal merging.
  Direction first = Direction::Right, second = Direction::Left;
  if (!rows01_left_packed(b)) std::swap(first, second);
  if (in.mutation == PolicyMutation::InvertOscillation) std::swap(first, second);
  int pref[4] = {};
  pref[static_cast<int>(first)] = 0;
  pref[static_cast<int>(second)] = 1;
  pref[static_cast<int>(Direction::Up)] = 2;
  // A small tile shoved left of the goal/2 tile is stuck there for good,
  // so moves that push the tile off its column are a last resort; a
  // survivable Down, which the Restore rule undoes, ranks above them.
  int best = -1;
  std::array<int, 12> best_score{};
  for (int pass = 0; pass < 2 && best < 0; ++pass) {
    for (int i = 0; i < 3; ++i) {
      if (!allowed(i) || splits_big_pair(*next[i], in.goal_exp)) continue;
      if (pass == 0 &&
          anchor_exposure(*next[i], in.goal_exp) > anchor_exposure(b, in.goal_exp))
        continue;
      int danger = worst_spawn_mobility(*next[i]);
      std::array<int, 12> score = {
          survives(*next[i], 6) ? 1 : 0,
          count_row0_big(*next[i], in.goal_exp) <= count_row0_big(b, in.goal_exp) ? 1 : 0,
          -locked_junk(*next[i], in.goal_exp), -forced_down_risk(*next[i]),
          count_empty(*next[i]), -big_depth(*next[i], in.goal_exp),
          -anchor_exposure(*next[i], in.goal_exp),
          -align_steps(*next[i], in.goal_exp),
          -align_distance(*next[i], in.goal_exp),
          match_pairs(*next[i], in.goal_exp), danger,
          -pref[static_cast<int>(kOrder[i])]};
      if (best < 0 || score > best_score) {
        best = i;
        best_score = score;
      }
    }
  }
  if (best >= 0)
    return {kOrder[best],
            kOrder[best] == Direction::Up ? Rule::UpMerge : Rule::Oscillate};
  if (allowed(3)) return {Direction::Down, Rule::Forced};
  // Everything allowed was filtered out; fall back to any legal move.
  for (int i = 0; i < 4; ++i)
    if (next[i]) return {kOrder[i], Rule::Forced};
  throw std::runtime_error("no legal move");
}

// The case analysis assumes the block hugs the top edge, but a forced
// Down can leave it parked along the bottom one. The game is symmetric
// under a vertical flip, so rather than hauling the block back up through
// fresh junk, play the reflected strategy until it gets home.
Decision decide(const PolicyInput& in) {
  if (!bottom_anchored(in.b, in.goal_exp)) return decide_top(in);
  Board f = flip_vertical(in.b);
  Decision d = decide_top({f, in.opts, in.mutation, in.goal_exp});
  if (d.dir == Direction::Up) d.dir = Direction::Down;
  else if (d.dir == Direction::Down) d.dir = Direction::Up;
  return d;
}

uint64_t pack_board(const Board& b) {
  uint64_t k = 0;
  for (int i = 0; i < 16; ++i) k |= uint64_t(b.cell[i] & 0xF) << (i * 4);
  return k;
}

// --- check harness --------------------------------------------------------

struct Trace {
  std::deque<std::string> steps;
  void push(const Board& b, const char* note) {
    steps.push_back(std::string(note) + " " + render_board(b));
    if (steps.size() > 12) steps.pop_front();
  }
  std::string render(const std::string& why) const {
    std::string out = why;
    for (const auto& s : steps) out += " | " + s;
    return out;
  }
};

struct GameOutcome {
  bool win = false;
  long length = 0;
  long iterations = 0;
  long violations = 0;
  std::optional<std::string> counterexample;
};

struct ProgressTracker {
  int goal_exp = 11;
  bool baseline = false;
  int last_metric = 0;
  long iterations = 0;
  long violations = 0;

  void on_decision(const Board& b, const Decision& d) {
    if (bottom_anchored(b, goal_exp)) {
      baseline = false;  // reflected play, the metric rows hold the block
      return;
    }
    if (d.rule == Rule::Oscillate && d.dir == Direction::Right &&
        classify_phase(b) == LemmaPhase::CaseThreeLoop) {
      int metric = rows34_sum(b);
      if (baseline) {
        ++iterations;
        if (metric <= last_metric) ++violations;
      }
      baseline = true;
      last_metric = metric;
    } else if (d.rule != Rule::Oscillate && d.rule != Rule::UpFill &&
               d.rule != Rule::UpMerge) {
      baseline = false;  // the loop was left; restart comparisons
    }
  }
};

GameOutcome run_playout(Board b, std::mt19937_64& rng, const LemmaCheckConfig& cfg) {
  GameOutcome out;
  ProgressTracker progress{cfg.goal_exp};
  Trace trace;
  trace.push(b, "start");
  while (true) {
    if (goal_made(b, cfg.goal_exp)) {
      out.win = true;
      break;
    }
    if (out.length >= cfg.move_cap) {
      out.counterexample = trace.render("move cap exceeded without reaching the goal");
      break;
    }
    Decision d;
    try {
      d = decide({b, cfg.options, cfg.mutation, cfg.goal_exp});
    } catch (const std::exception& e) {
      out.counterexample = trace.render(std::string("policy failed: ") + e.what());
      break;
    }
    progress.on_decision(b, d);
    auto nb = swipe(b, d.dir);
    if (!nb) {
      out.counterexample = trace.render("policy chose an illegal move");
      break;
    }
    b = *nb;
    ++out.length;
    trace.push(b, to_string(d.dir));
    if (goal_made(b, cfg.goal_exp)) {
      out.win = true;
      break;
    }
    // Random spawner: uniform empty cell, 2 with probability 0.9.
    std::vector<int> empties;
    for (int i = 0; i < b.cells(); ++i)
      if (!b.cell[i]) empties.push_back(i);
    if (!empties.empty()) {
      int cell = empties[std::uniform_int_distribution<size_t>(0, empties.size() - 1)(rng)];
      int exp = std::uniform_int_distribution<int>(0, 9)(rng) == 0 ? 2 : 1;
      b.cell[cell] = uint8_t(exp);
      trace.push(b, "spawn");
    }
  }
  out.iterations = progress.iterations;
  out.violations = progress.violations;
  return out;
}

// Random spawn-realistic filling of the non-principal cells: the junk on
// a live board arrived as 2s and 4s.
Board sample_start(uint64_t seed) {
  std::mt19937_64 rng(mix64(seed));
  Board b = lemma_base_board();
  for (int i = 0; i < 16; ++i) {
    if (b.cell[i]) continue;
    if (std::uniform_int_distribution<int>(0, 2)(rng)) continue;  // stays empty
    b.cell[i] = std::uniform_int_distribution<int>(0, 9)(rng) == 0 ? 2 : 1;
  }
  return b;
}

struct ExhaustContext {
  const LemmaCheckConfig& cfg;
  std::unordered_map<uint64_t, int> memo;  // board -> deepest remaining depth done
  long leaves = 0;
  std::vector<std::string> counterexamples;
};

// One forced player reply; true when the branch is settled (win or failure).
bool player_step(Board& b, const LemmaCheckConfig& cfg, Trace& trace,
                 std::vector<std::string>& ces) {
  Decision d;
  try {
    d = decide({b, cfg.options, cfg.mutation, cfg.goal_exp});
  } catch (const std::exception& e) {
    ces.push_back(trace.render(std::string("policy failed: ") + e.what()));
    return true;
  }
  auto nb = swipe(b, d.dir);
  if (!nb) {
    ces.push_back(trace.render("policy chose an illegal move"));
    return true;
  }
  b = *nb;
  trace.push(b, to_string(d.dir));
  return false;
}

// Enumerates every adversary spawn choice to the given depth; a leaf must
// have won or still hold two big tiles with the game alive.
void exhaust(ExhaustContext& ctx, const Board& b, int depth_left, Trace& trace) {
  if (!ctx.counterexamples.empty() && ctx.counterexamples.size() > 4) return;
  if (goal_made(b, ctx.cfg.goal_exp)) {
    ++ctx.leaves;
    return;
  }
  if (depth_left == 0) {
    if (count_at_least(b, ctx.cfg.goal_exp - 2) < 2)
      ctx.counterexamples.push_back(trace.render("big tiles lost within the horizon"));
    ++ctx.leaves;
    return;
  }
  auto [it, fresh] = ctx.memo.try_emplace(pack_board(b), depth_left);
  if (!fresh) {
    if (it->second >= depth_left) return;
    it->second = depth_left;
  }
  for (int i = 0; i < b.cells(); ++i) {
    if (b.cell[i]) continue;
    for (int exp = 1; exp <= 2; ++exp) {
      Board sb = b;
      sb.cell[i] = uint8_t(exp);
      Trace t2 = trace;
      t2.push(sb, "spawn");
      Board pb = sb;
      if (player_step(pb, ctx.cfg, t2, ctx.counterexamples)) {
        ++ctx.leaves;
        continue;
      }
      exhaust(ctx, pb, depth_left - 1, t2);
    }
  }
}

}  // namespace

const char* to_string(LemmaPhase p) {
  switch (p) {
    case LemmaPhase::Opening: return "opening";
    case LemmaPhase::CaseOne: return "case1";
    case LemmaPhase::CaseTwo: return "case2";
    default: return "case3-loop";
  }
}

Board lemma_base_board() {
  Board b(4, 4);
  b.at(0, 0) = 10;  // 1024
  b.at(0, 1) = 9;   // 512
  b.at(1, 0) = 8;   // 256
  b.at(1, 1) = 8;   // 256
  b.at(1, 2) = 7;   // 128
  return b;
}

Caps lemma_caps() {
  Caps caps(4, 4);
  const uint8_t exps[16] = {10, 9, 6, 4, 8, 8, 7, 4, 4, 4, 5, 4, 4, 4, 4, 4};
  std::copy(exps, exps + 16, caps.cap.begin());
  return caps;
}

bool lemma_tiles_present(const Board& b, const LemmaOptions& opts) {
  int n10 = 0, n9 = 0, n8 = 0, n7 = 0, n11 = 0;
  for (int i = 0; i < b.cells(); ++i) {
    switch (b.cell[i]) {
      case 11: ++n11; break;
      case 10: ++n10; break;
      case 9: ++n9; break;
      case 8: ++n8; break;
      case 7: ++n7; break;
      default: break;
    }
  }
  if (n11) return true;               // goal already on the board
  if (n10 >= 2) return true;          // final merge pending
  if (n10 >= 1 && n9 >= 2) return true;  // after the opening merge
  if (n10 >= 1 && n9 >= 1 && n8 >= 2)
    return !opts.count_128_as_principal || n7 >= 1;
  return false;
}

LemmaPhase classify_phase(const Board& b) {
  int n9 = 0;
  for (int i = 0; i < b.cells(); ++i)
    if (b.cell[i] == 9) ++n9;
  if (n9 < 2 && has_pair_row01(b, 8)) return LemmaPhase::Opening;
  int k0 = row_tiles(b, 0), k1 = row_tiles(b, 1);
  if (k0 == 4) return LemmaPhase::CaseOne;
  if (k0 == 3 && k1 == 3) return LemmaPhase::CaseTwo;
  return LemmaPhase::CaseThreeLoop;
}

int rows34_sum(const Board& b) {
  int s = 0;
  for (int r = 2; r < b.rows; ++r)
    for (int c = 0; c < b.cols; ++c)
      if (b.at(r, c)) s += 1 << b.at(r, c);
  return s;
}

Direction policy_move(const LemmaState& state, const LemmaOptions& opts,
                      PolicyMutation mutation, int goal_exp) {
  if (state.board.rows != 4 || state.board.cols != 4)
    throw std::domain_error("the strategy is defined on 4x4 boards");
  if (!lemma_tiles_present(state.board, opts))
    throw std::domain_error("big tiles absent from the board");
  return decide({state.board, opts, mutation, goal_exp}).dir;
}

Direction policy_move(const Board& b) {
  return policy_move(LemmaState{b, classify_phase(b), rows34_sum(b)});
}

std::string LemmaReport::text() const {
  std::ostringstream os;
  os << "playouts " << playouts << "\nwins " << wins << "\nmax_game_length "
     << max_game_length << "\nexhaustive_depth " << exhaustive_depth
     << "\nexhaustive_leaves " << exhaustive_leaves << "\ncase3_iterations "
     << case3_iterations << "\nprogress_violations " << progress_violations
     << "\ncounterexamples " << counterexamples.size() << "\n";
  for (const auto& c : counterexamples) os << "counterexample: " << c << "\n";
  os << "verdict " << (passed() ? "pass" : "FAIL") << "\n";
  return os.str();
}

std::string LemmaReport::csv() const {
  std::ostringstream os;
  os << "playouts,wins,max_game_length,exhaustive_depth,exhaustive_leaves,"
        "case3_iterations,progress_violations,counterexamples,verdict\n"
     << playouts << ',' << wins << ',' << max_game_length << ',' << exhaustive_depth
     << ',' << exhaustive_leaves << ',' << case3_iterations << ','
     << progress_violations << ',' << counterexamples.size() << ','
     << (passed() ? "pass" : "fail") << "\n";
  return os.str();
}

LemmaReport check_lemma(const LemmaCheckConfig& config) {
  LemmaReport report;
  report.exhaustive_depth = config.exhaustive_depth;

  // Part (a): bounded-exhaustive adversary from the bare configuration and
  // a handful of sampled fillings.
  std::vector<Board> starts{lemma_base_board()};
  for (int j = 0; j < config.exhaustive_starts; ++j)
    starts.push_back(sample_start(config.seed ^ 0x5eedULL ^ uint64_t(j)));
  for (const Board& s : starts) {
    ExhaustContext ctx{config, {}, 0, {}};
    Trace trace;
    trace.push(s, "start");
    Board pb = s;
    if (!player_step(pb, config, trace, ctx.counterexamples))
      exhaust(ctx, pb, config.exhaustive_depth, trace);
    report.exhaustive_leaves += ctx.leaves;
    for (auto& c : ctx.counterexamples) report.counterexamples.push_back(std::move(c));
  }

  // Part (b): seeded random playouts, independent and merged associatively.
  const int workers = std::max(1, config.workers);
  std::vector<LemmaReport> partial(workers);
  auto work = [&](int w) {
    LemmaReport& r = partial[w];
    for (long i = 0; i < config.random_playouts; ++i) {
      if (mix64(uint64_t(i)) % uint64_t(workers) != uint64_t(w)) continue;
      std::mt19937_64 rng(mix64(config.seed) ^ mix64(uint64_t(i) + 1));
      GameOutcome out = run_playout(lemma_base_board(), rng, config);
      ++r.playouts;
      if (out.win) ++r.wins;
      r.max_game_length = std::max(r.max_game_length, out.length);
      r.case3_iterations += out.iterations;
      r.progress_violations += out.violations;
      if (out.counterexample && r.counterexamples.size() < 4)
        r.counterexamples.push_back(*out.counterexample);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  for (const auto& r : partial) {
    report.playouts += r.playouts;
    report.wins += r.wins;
    report.max_game_length = std::max(report.max_game_length, r.max_game_length);
    report.case3_iterations += r.case3_iterations;
    report.progress_violations += r.progress_violations;
    for (const auto& c : r.counterexamples)
      if (report.counterexamples.size() < 8) report.counterexamples.push_back(c);
  }
  return report;
}

}  // namespace tfel
