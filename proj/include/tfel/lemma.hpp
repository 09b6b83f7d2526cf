#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tfel/board.hpp"

namespace tfel {

// The five-big-tile winning configuration and the explicit strategy that
// forces 2048 from it, checked empirically against adversarial and random
// spawners.

enum class LemmaPhase : uint8_t { Opening, CaseOne, CaseTwo, CaseThreeLoop };

const char* to_string(LemmaPhase p);

// The source prose alternates between "five big tiles" and "our four";
// the switch selects whether the 128 counts as a principal tile in the
// precondition and phase reading. Both readings are exercised by tests.
struct LemmaOptions {
  bool count_128_as_principal = true;
};

// Deliberate policy corruptions for harness sanity checks.
enum class PolicyMutation : uint8_t {
  None,
  SkipOpeningLeft,   // drop the opening merge rule
  AvoidGoal,         // never choose a move that completes the goal tile
  InvertOscillation  // oscillate starting Left instead of Right
};

struct LemmaState {
  Board board;  // 4x4
  LemmaPhase phase = LemmaPhase::Opening;
  int rows34_sum = 0;  // loop-progress metric: tile sum of rows 3-4
};

// The five big tiles 1024,512,256,256,128 on their documented cells and
// nothing else.
Board lemma_base_board();

// Per-cell caps the small-tile fillings must respect.
Caps lemma_caps();

bool lemma_tiles_present(const Board& b, const LemmaOptions& opts = {});

LemmaPhase classify_phase(const Board& b);

int rows34_sum(const Board& b);

// The direction dictated by the case analysis. Throws std::domain_error
// when the big tiles are absent, std::runtime_error when no move is legal.
Direction policy_move(const LemmaState& state, const LemmaOptions& opts = {},
                      PolicyMutation mutation = PolicyMutation::None, int goal_exp = 11);
Direction policy_move(const Board& b);

struct LemmaReport {
  long playouts = 0;
  long wins = 0;
  long max_game_length = 0;
  int exhaustive_depth = 0;  // certificate: all spawn choices enumerated to here
  long exhaustive_leaves = 0;
  long case3_iterations = 0;
  long progress_violations = 0;  // Case-3 restarts without a rows-3-4 sum increase
  std::vector<std::string> counterexamples;

  bool passed() const {
    return wins == playouts && progress_violations == 0 && counterexamples.empty();
  }
  std::string text() const;
  std::string csv() const;
};

struct LemmaCheckConfig {
  int goal_exp = 11;  // 2048
  long random_playouts = 10000;
  int exhaustive_depth = 6;
  uint64_t seed = 1;
  int workers = 1;
  long move_cap = 20000;
  int exhaustive_starts = 4;  // sampled fillings joining the bare board
  PolicyMutation mutation = PolicyMutation::None;
  LemmaOptions options;
};

LemmaReport check_lemma(const LemmaCheckConfig& config);

}  // namespace tfel
