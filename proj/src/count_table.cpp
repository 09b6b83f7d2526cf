#include "tfel/count_table.hpp"

namespace tfel {

CountTable CountTable::build(const Caps& caps, int max_sum) {
  if (max_sum < 0 || (max_sum & 1)) throw std::domain_error("max_sum must be even and >= 0");
  CountTable t;
  t.caps_ = caps;
  t.max_sum_ = max_sum;
  t.mn_ = caps.cells();
  t.stride_ = static_cast<size_t>(max_sum / 2 + 1);
  t.c_.assign(static_cast<size_t>(t.mn_ + 1) * t.stride_, 0);

  // base row: the empty suffix fills only sum 0
  t.c_[static_cast<size_t>(t.mn_) * t.stride_] = 1;
  for (int i = t.mn_ - 1; i >= 0; --i) {
    const int cap = caps.cap[i];
    for (int s = 0; s <= max_sum; s += 2) {
      uint64_t v = t.c_[static_cast<size_t>(i + 1) * t.stride_ + (s >> 1)];  // cell i empty
      for (int k = 1; k <= cap && (1 << k) <= s; ++k) {
        uint64_t add = t.c_[static_cast<size_t>(i + 1) * t.stride_ + ((s - (1 << k)) >> 1)];
        if (__builtin_add_overflow(v, add, &v))
          throw count_overflow_error(
              "count table entry exceeds 64 bits; use the wide census mode");
      }
      t.c_[static_cast<size_t>(i) * t.stride_ + (s >> 1)] = v;
    }
  }
  return t;
}

uint64_t CountTable::total_positions() const {
  uint64_t total = 0;
  for (int s = 0; s <= max_sum_; s += 2)
    if (__builtin_add_overflow(total, count(0, s), &total))
      throw count_overflow_error("total position count exceeds 64 bits");
  return total;
}

LayerIndex CountTable::rank(const Board& b) const {
  if (b.rows != caps_.rows || b.cols != caps_.cols)
    throw std::domain_error("rank: board shape does not match caps");
  if (!within_caps(b, caps_)) throw std::domain_error("rank: board violates caps");
  const int total = board_sum(b);
  if (total > max_sum_) throw std::domain_error("rank: board sum exceeds max_sum");

  uint64_t index = 0;
  int s = total;  // remaining sum including the current cell
  for (int i = 0; i < mn_; ++i) {
    const int e = b.cell[i];
    if (e == 0) continue;
    index += count(i + 1, s);
    for (int k = 1; k < e; ++k) index += count(i + 1, s - (1 << k));
    s -= 1 << e;
  }
  return {total, index};
}

Board CountTable::unrank(int sum, uint64_t index) const {
  if (index >= layer_size(sum)) throw std::domain_error("unrank: index out of range");
  Board b(caps_.rows, caps_.cols);
  uint64_t r = index;
  int s = sum;
  for (int i = 0; i < mn_; ++i) {
    uint64_t empties = count(i + 1, s);
    if (r < empties) {
      b.cell[i] = 0;
      continue;
    }
    r -= empties;
    int k = 1;
    for (;; ++k) {
      if (k > caps_.cap[i]) throw std::logic_error("unrank: scan ran past the cell cap");
      uint64_t n = count(i + 1, s - (1 << k));
      if (r < n) break;
      r -= n;
    }
    b.cell[i] = static_cast<uint8_t>(k);
    s -= 1 << k;
  }
  // Algorithm invariant: all of the index and sum must be consumed.
  if (r != 0 || s != 0) throw std::logic_error("unrank: residual index or sum");
  return b;
}

std::vector<std::pair<int, uint64_t>> CountTable::census() const {
  std::vector<std::pair<int, uint64_t>> out;
  out.reserve(max_sum_ / 2 + 1);
  for (int s = 0; s <= max_sum_; s += 2) out.emplace_back(s, count(0, s));
  return out;
}

namespace {

std::string u128_to_string(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

}  // namespace

std::vector<std::pair<int, std::string>> wide_census(const Caps& caps, int max_sum) {
  const int mn = caps.cells();
  const size_t stride = static_cast<size_t>(max_sum / 2 + 1);
  std::vector<unsigned __int128> prev(stride, 0), cur(stride, 0);
  prev[0] = 1;
  for (int i = mn - 1; i >= 0; --i) {
    const int cap = caps.cap[i];
    for (int s = 0; s <= max_sum; s += 2) {
      unsigned __int128 v = prev[s >> 1];
      for (int k = 1; k <= cap && (1 << k) <= s; ++k) v += prev[(s - (1 << k)) >> 1];
      cur[s >> 1] = v;
    }
    std::swap(prev, cur);
  }
  std::vector<std::pair<int, std::string>> out;
  for (int s = 0; s <= max_sum; s += 2) out.emplace_back(s, u128_to_string(prev[s >> 1]));
  return out;
}

}  // namespace tfel
