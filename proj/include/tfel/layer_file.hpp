#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "tfel/board.hpp"
#include "tfel/count_table.hpp"

namespace tfel {

enum class PayloadKind : uint8_t { Bit = 0, Fixed32 = 1 };

// Fixed storage batch granularity: checksums cover spans of this many
// positions, independently of how a solve buffers its processing batches,
// so layer files come out byte-identical for any RAM budget.
inline constexpr uint64_t kStorageBatchPositions = uint64_t(1) << 20;

inline uint64_t fnv1a64(const uint8_t* data, size_t n, uint64_t h = 0xcbf29ce484222325ULL) {
  for (size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

// splitmix64 finalizer; used to spread chunks across workers.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct LayerMeta {
  uint8_t rows = 0, cols = 0;
  uint8_t goal_exp = 0;  // 0 when the run's goal is a configuration goal
  Caps caps;
  int sum = 0;
  Turn turn = Turn::Player;
  PayloadKind payload = PayloadKind::Bit;
  uint64_t position_count = 0;
  uint64_t batch_size = kStorageBatchPositions;  // positions per storage batch

  uint64_t batch_count() const {
    if (position_count == 0) return 0;
    return (position_count + batch_size - 1) / batch_size;
  }
  uint64_t payload_bytes() const {
    return payload == PayloadKind::Bit ? (position_count + 7) / 8 : position_count * 4;
  }
  // Byte range [begin, end) of storage batch b within the payload.
  uint64_t batch_byte_begin(uint64_t b) const;
  uint64_t batch_byte_end(uint64_t b) const;
};

// One on-disk fixed-sum layer: TFEL header, dense payload (1 bit or one
// little-endian 32-bit word per position), per-batch checksum trailer.
class LayerFile {
 public:
  LayerFile() = default;

  static LayerFile create(const std::filesystem::path& path, const LayerMeta& meta);
  static LayerFile open(const std::filesystem::path& path, bool writable = false);

  const LayerMeta& meta() const { return meta_; }
  const std::filesystem::path& path() const { return path_; }

  // Byte-addressed payload access; offsets/lengths in payload bytes.
  void write_bytes(uint64_t offset, std::span<const uint8_t> data);
  void read_bytes(uint64_t offset, std::span<uint8_t> out);

  // Whole storage batches, with checksum verification on read.
  void write_batch(uint64_t batch_index, std::span<const uint8_t> payload);
  std::vector<uint8_t> read_batch(uint64_t batch_index);

  // Positions [first, first+count); for Bit payloads first and count must
  // be byte-aligned (multiples of 8) except at the end of the layer.
  void write_positions(uint64_t first, uint64_t count, std::span<const uint8_t> data);
  std::vector<uint8_t> read_positions(uint64_t first, uint64_t count);

  // Recompute per-batch checksums from the payload and write the trailer.
  void finalize();
  // Verify every batch checksum; throws on mismatch.
  void verify();

  static uint64_t position_bytes(PayloadKind kind, uint64_t positions) {
    return kind == PayloadKind::Bit ? (positions + 7) / 8 : positions * 4;
  }

 private:
  uint64_t header_bytes() const;
  void check_open() const;

  LayerMeta meta_;
  std::filesystem::path path_;
  mutable std::fstream file_;
  bool writable_ = false;
};

// Validates the on-disk meta against a freshly built count table (catches
// a layer opened with the wrong caps or dims).
LayerFile open_layer_checked(const std::filesystem::path& path, const CountTable& table,
                             bool writable = false);

std::string layer_file_name(int sum, Turn turn);

// Getting/setting single bits in an LSB-first bit payload.
inline bool get_bit(std::span<const uint8_t> bytes, uint64_t pos) {
  return (bytes[pos >> 3] >> (pos & 7)) & 1;
}
inline void set_bit(std::span<uint8_t> bytes, uint64_t pos, bool v) {
  if (v)
    bytes[pos >> 3] |= uint8_t(1u << (pos & 7));
  else
    bytes[pos >> 3] &= uint8_t(~(1u << (pos & 7)));
}

}  // namespace tfel
