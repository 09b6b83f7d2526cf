#include "tfel/fixed_prob.hpp"

#include <stdexcept>

namespace tfel {

std::string FixedProb::decimal(int digits) const {
  if (digits < 1 || digits > 18) throw std::domain_error("digits out of range");
  unsigned __int128 scaled = raw;
  for (int i = 0; i < digits; ++i) scaled *= 10;
  scaled >>= 32;  // floor(raw * 10^digits / 2^32)
  std::string frac(digits, '0');
  for (int i = digits - 1; i >= 0; --i) {
    frac[i] = static_cast<char>('0' + static_cast<int>(scaled % 10));
    scaled /= 10;
  }
  return "0." + frac;
}

FixedProb fp_combine_spawn(std::span<const std::pair<uint32_t, uint32_t>> pair_sums, int k) {
  if (k < 1 || pair_sums.size() != static_cast<size_t>(k))
    throw std::domain_error("fp_combine_spawn: k must be >= 1 and match the list length");
  uint64_t acc = 0;
  for (const auto& [raw2, raw4] : pair_sums) acc += 9ull * raw2 + raw4;
  uint64_t v = acc / (10ull * static_cast<uint64_t>(k));
  return {v > FixedProb::kFull ? FixedProb::kFull : static_cast<uint32_t>(v)};
}

}  // namespace tfel
