#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

#include "tfel/board.hpp"

namespace tfel {

using Rational = boost::multiprecision::cpp_rational;

namespace detail {

struct PositionKey {
  std::array<uint64_t, 3> w{};
  bool operator==(const PositionKey&) const = default;
};

struct PositionKeyHash {
  size_t operator()(const PositionKey& k) const {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (uint64_t v : k.w) h = (h ^ v) * 0x100000001b3ULL;
    return static_cast<size_t>(h);
  }
};

PositionKey make_key(const Board& b, Turn t);

}  // namespace detail

struct oracle_budget_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Direct memoized min-max over the raw capped game graph; independent of
// the layered solver path it cross-checks.
class ReachOracle {
 public:
  ReachOracle(Caps caps, GoalPredicate goal, size_t memo_budget = 10'000'000)
      : caps_(std::move(caps)), goal_(std::move(goal)), budget_(memo_budget) {}

  bool value(const Board& b, Turn turn);
  size_t memo_size() const { return memo_.size(); }

 private:
  Caps caps_;
  GoalPredicate goal_;
  size_t budget_;
  std::unordered_map<detail::PositionKey, bool, detail::PositionKeyHash> memo_;
};

// Exact-rational expectimax over the same recurrence with no rounding;
// the reference for fixed-point soundness checks.
class ExpectimaxOracle {
 public:
  ExpectimaxOracle(Caps caps, GoalPredicate goal, size_t memo_budget = 10'000'000)
      : caps_(std::move(caps)), goal_(std::move(goal)), budget_(memo_budget) {}

  Rational value(const Board& b, Turn turn);
  size_t memo_size() const { return memo_.size(); }

 private:
  Caps caps_;
  GoalPredicate goal_;
  size_t budget_;
  std::unordered_map<detail::PositionKey, Rational, detail::PositionKeyHash> memo_;
};

}  // namespace tfel
