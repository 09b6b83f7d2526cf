#pragma once

#include <cstdint>
#include <filesystem>

#include "tfel/board.hpp"
#include "tfel/count_table.hpp"
#include "tfel/fixed_prob.hpp"
#include "tfel/manifest.hpp"

namespace tfel {

// Proved lower bounds on winning probability against the uniform random
// spawner (2 with probability 0.9, 4 with probability 0.1), computed in
// downward-rounded 32-bit fixed point.
struct ProbConfig {
  int rows = 0, cols = 0;
  GoalPredicate goal = MergeGoal{2};
  Caps caps;
  std::filesystem::path dir;
  uint64_t batch_positions = 0;
  int workers = 1;
  bool keep_all = true;
};

struct ProbDB {
  std::filesystem::path dir;
  RunManifest manifest;
  CountTable table;

  FixedProb start_bound() const { return {manifest.bound_raw}; }
};

ProbDB solve_prob(const ProbConfig& config);
ProbDB open_prob(const std::filesystem::path& dir);

FixedProb query_prob(const ProbDB& db, const Board& board, Turn turn);

}  // namespace tfel
