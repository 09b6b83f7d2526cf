#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>

namespace tfel {

// Unsigned 32-bit probability lower bound with denominator 2^32. A full
// win saturates at 2^32 - 1, so every stored word is a valid lower bound
// with no special cases. Ordering on raw equals ordering on semantics.
struct FixedProb {
  static constexpr uint32_t kFull = 0xFFFFFFFFu;

  uint32_t raw = 0;

  // Decimal rendering truncated (never rounded up) to keep the
  // lower-bound reading, e.g. raw 2^31-1 -> "0.49999999".
  std::string decimal(int digits = 8) const;

  auto operator<=>(const FixedProb&) const = default;
};

// One computer node: floor(sum(9*raw2 + raw4) / (10k)) over the per-cell
// (spawn-2, spawn-4) value pairs, in 64-bit intermediates. Single downward
// division, so the result never exceeds the true expectation.
FixedProb fp_combine_spawn(std::span<const std::pair<uint32_t, uint32_t>> pair_sums, int k);

}  // namespace tfel
