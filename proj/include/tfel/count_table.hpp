#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tfel/board.hpp"

namespace tfel {

struct count_overflow_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LayerIndex {
  int sum = 0;
  uint64_t index = 0;
};

// Dynamic-programming table of cap-respecting suffix fillings per sum.
// count(i, s) = number of ways to fill cells i..mn-1 with empty cells or
// tiles 2^1..2^cap so that the tile values add up to s. Powers rank,
// unrank and the layer census.
class CountTable {
 public:
  // Throws count_overflow_error if a count exceeds 64 bits (use
  // wide_census for census-only questions at that scale).
  static CountTable build(const Caps& caps, int max_sum);
  static CountTable build(const Caps& caps) { return build(caps, caps.max_sum()); }

  uint64_t count(int cell, int sum) const {
    if (sum < 0 || sum > max_sum_ || (sum & 1)) return 0;
    return c_[static_cast<size_t>(cell) * stride_ + (sum >> 1)];
  }
  uint64_t layer_size(int sum) const { return count(0, sum); }
  uint64_t total_positions() const;  // one turn; sum over all layers

  int max_sum() const { return max_sum_; }
  const Caps& caps() const { return caps_; }
  int rows() const { return caps_.rows; }
  int cols() const { return caps_.cols; }

  // Dense index of a board inside its fixed-sum layer (lexicographic over
  // row-major cells under value order 0 < 2 < 4 < ...). Contract
  // violations (cap or sum) throw std::domain_error.
  LayerIndex rank(const Board& b) const;

  // Inverse of rank. index must be < layer_size(sum).
  Board unrank(int sum, uint64_t index) const;

  // (sum, layer size) for every even sum 0..max_sum.
  std::vector<std::pair<int, uint64_t>> census() const;

 private:
  Caps caps_;
  int max_sum_ = 0;
  int mn_ = 0;
  size_t stride_ = 0;
  std::vector<uint64_t> c_;  // (mn+1) x (max_sum/2+1)
};

// Census with 128-bit counts, for board/cap combinations whose total
// position count does not fit in 64 bits. Counts rendered as decimal
// strings.
std::vector<std::pair<int, std::string>> wide_census(const Caps& caps, int max_sum);

}  // namespace tfel
