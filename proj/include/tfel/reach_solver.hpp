#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "tfel/board.hpp"
#include "tfel/count_table.hpp"
#include "tfel/manifest.hpp"

namespace tfel {

// Guaranteed reachability against a spawner that adversarially picks both
// the cell and the value.
struct ReachConfig {
  int rows = 0, cols = 0;
  GoalPredicate goal = MergeGoal{2};
  Caps caps;
  std::filesystem::path dir;
  uint64_t batch_positions = 0;  // 0 = whole layer per batch
  int workers = 1;
  bool keep_all = true;  // keep every layer for queries (the out-of-core
                         // schedule otherwise prunes consumed layers)
};

struct ReachDB {
  std::filesystem::path dir;
  RunManifest manifest;
  CountTable table;

  bool start_wins() const { return manifest.win; }
};

ReachDB solve_reach(const ReachConfig& config);
ReachDB open_reach(const std::filesystem::path& dir);

bool query_reach(const ReachDB& db, const Board& board, Turn turn);

struct StartReport {
  struct Entry {
    Board board;
    bool win = false;
  };
  std::vector<Entry> entries;
  int wins = 0;
  int total() const { return static_cast<int>(entries.size()); }
};

// All player-turn positions with exactly two tiles, each 2 or 4, on
// distinct cells.
StartReport evaluate_two_tile_starts(const ReachDB& db);

struct MaxTileResult {
  long tile = 0;          // largest goal tile with a guaranteed win
  long first_loss = 0;    // the next goal tile, shown to lose (0 if budget hit)
  bool exact = true;      // false when the ladder stopped on the state budget
};

// Doubling ladder with uniform caps T/2; state_budget caps the per-turn
// position count of a single solve (0 = unlimited).
MaxTileResult max_guaranteed_tile(int rows, int cols, const std::filesystem::path& work_dir,
                                  uint64_t batch_positions = 0, int workers = 1,
                                  uint64_t state_budget = 0);

}  // namespace tfel
