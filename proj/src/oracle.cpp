#include "tfel/oracle.hpp"

namespace tfel {

namespace detail {

PositionKey make_key(const Board& b, Turn t) {
  // 4 bits per cell (exponent <= 15) plus dims and turn in the spare bits.
  PositionKey k;
  for (int i = 0; i < b.cells(); ++i) k.w[i >> 4] |= uint64_t(b.cell[i]) << ((i & 15) * 4);
  k.w[2] |= uint64_t(b.rows) << 48 | uint64_t(b.cols) << 54 | uint64_t(t) << 60;
  return k;
}

}  // namespace detail

namespace {

inline int merge_goal_exp(const GoalPredicate& goal) {
  const auto* m = std::get_if<MergeGoal>(&goal);
  return m ? m->goal_exp : 0;
}

}  // namespace

bool ReachOracle::value(const Board& b, Turn turn) {
  auto key = detail::make_key(b, turn);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  if (memo_.size() >= budget_) throw oracle_budget_exceeded("reach oracle memo budget exceeded");

  const int goal_exp = merge_goal_exp(goal_);
  bool result;
  if (turn == Turn::Player) {
    result = goal_reached(b, goal_);
    if (!result) {
      for (Direction d : {Direction::Left, Direction::Right, Direction::Up, Direction::Down}) {
        auto next = swipe(b, d);
        if (!next || !within_caps(*next, caps_)) continue;
        if (value(*next, Turn::Computer)) {
          result = true;
          break;
        }
      }
    }
  } else {
    // Adversary picks cell and value; a win must survive every choice.
    // A full board gives a vacuous all-spawns win.
    result = true;
    for (int i = 0; i < b.cells() && result; ++i) {
      if (b.cell[i]) continue;
      for (int exp = 1; exp <= 2 && result; ++exp) {
        if (goal_exp && exp >= goal_exp) continue;  // spawned tile reaches the goal
        if (exp > caps_.cap[i]) {
          result = false;  // spawn leaves the capped set: counted as a loss
          break;
        }
        Board next = b;
        next.cell[i] = static_cast<uint8_t>(exp);
        if (!value(next, Turn::Player)) result = false;
      }
    }
  }
  memo_.emplace(key, result);
  return result;
}

Rational ExpectimaxOracle::value(const Board& b, Turn turn) {
  auto key = detail::make_key(b, turn);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  if (memo_.size() >= budget_)
    throw oracle_budget_exceeded("expectimax oracle memo budget exceeded");

  const int goal_exp = merge_goal_exp(goal_);
  Rational result = 0;
  if (turn == Turn::Player) {
    if (goal_reached(b, goal_)) {
      result = 1;
    } else {
      for (Direction d : {Direction::Left, Direction::Right, Direction::Up, Direction::Down}) {
        auto next = swipe(b, d);
        if (!next || !within_caps(*next, caps_)) continue;
        Rational v = value(*next, Turn::Computer);
        if (v > result) result = v;
      }
    }
  } else {
    int k = count_empty(b);
    if (k == 0) {
      result = 1;  // vacuous, matches the solver's convention
    } else {
      Rational acc = 0;
      for (int i = 0; i < b.cells(); ++i) {
        if (b.cell[i]) continue;
        for (int exp = 1; exp <= 2; ++exp) {
          Rational weight(exp == 1 ? 9 : 1, 10);
          if (goal_exp && exp >= goal_exp) {
            acc += weight;  // spawned tile reaches the goal
          } else if (exp > caps_.cap[i]) {
            // leaves the capped set: contributes 0
          } else {
            Board next = b;
            next.cell[i] = static_cast<uint8_t>(exp);
            acc += weight * value(next, Turn::Player);
          }
        }
      }
      result = acc / k;
    }
  }
  memo_.emplace(key, result);
  return result;
}

}  // namespace tfel
