#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tfel/board.hpp"

namespace tfel {

// Text record of one solve run: config echo, per-layer completion, final
// verdict/bound. A completed manifest implies all layer files exist and
// validate.
struct RunManifest {
  int format_version = 1;
  std::string mode;  // "reach" or "prob"
  int rows = 0, cols = 0;
  GoalPredicate goal = MergeGoal{2};
  Caps caps;
  uint64_t batch_positions = 0;  // processing batch; 0 = whole layer
  int workers = 1;
  int max_sum = 0;

  struct LayerStatus {
    int sum = 0;
    Turn turn = Turn::Player;
    uint64_t positions = 0;
    bool done = false;
    double seconds = 0;
  };
  std::vector<LayerStatus> layers;

  bool has_verdict = false;
  bool win = false;            // reach headline
  bool has_bound = false;
  uint32_t bound_raw = 0;      // prob headline

  int peak_resident_layers = 0;
  double elapsed_seconds = 0;
  bool complete = false;

  LayerStatus* find_layer(int sum, Turn turn);

  void save(const std::filesystem::path& run_dir) const;
  static RunManifest load(const std::filesystem::path& run_dir);
  static bool exists(const std::filesystem::path& run_dir);
};

}  // namespace tfel
