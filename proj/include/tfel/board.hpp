#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tfel {

inline constexpr int kMaxDim = 6;
inline constexpr int kMaxCells = kMaxDim * kMaxDim;
inline constexpr int kMaxExp = 15;  // tile 32768

enum class Direction : uint8_t { Left, Right, Up, Down };
enum class Turn : uint8_t { Player, Computer };

const char* to_string(Direction d);
const char* to_string(Turn t);

// Grid of cell exponents: 0 = empty, e >= 1 means tile 2^e. Row-major,
// rows/cols in 1..6.
struct Board {
  uint8_t rows = 0;
  uint8_t cols = 0;
  std::array<uint8_t, kMaxCells> cell{};

  Board() = default;
  Board(int r, int c) : rows(static_cast<uint8_t>(r)), cols(static_cast<uint8_t>(c)) {}

  int cells() const { return rows * cols; }
  uint8_t at(int r, int c) const { return cell[r * cols + c]; }
  uint8_t& at(int r, int c) { return cell[r * cols + c]; }

  bool operator==(const Board&) const = default;
};

// Per-cell maximum exponent, same shape as the boards it constrains.
struct Caps {
  uint8_t rows = 0;
  uint8_t cols = 0;
  std::array<uint8_t, kMaxCells> cap{};

  Caps() = default;
  Caps(int r, int c) : rows(static_cast<uint8_t>(r)), cols(static_cast<uint8_t>(c)) {}

  static Caps uniform(int rows, int cols, int cap_exp);

  int cells() const { return rows * cols; }
  uint8_t at(int r, int c) const { return cap[r * cols + c]; }
  uint8_t& at(int r, int c) { return cap[r * cols + c]; }
  // Sum of tile values when every cell sits at its cap.
  int max_sum() const;

  bool operator==(const Caps&) const = default;
};

struct MergeGoal {
  uint8_t goal_exp;  // win when a swipe can produce a tile >= 2^goal_exp
  bool operator==(const MergeGoal&) const = default;
};

struct ConfigGoal {
  struct Tile {
    uint8_t r, c, exp;
    bool operator==(const Tile&) const = default;
  };
  std::vector<Tile> tiles;
  bool operator==(const ConfigGoal&) const = default;
};

using GoalPredicate = std::variant<MergeGoal, ConfigGoal>;

// --- move semantics ------------------------------------------------------

// Slide all tiles toward dir, merging equal adjacent pairs once each
// (merges resolved from the destination edge). Absent result = the swipe
// changes nothing, i.e. the move is illegal.
std::optional<Board> swipe(const Board& b, Direction d);

std::vector<Direction> legal_moves(const Board& b);

// Place tile `value` (2 or 4) on an empty cell. Contract violation throws.
Board spawn(const Board& b, int r, int c, int value);

// Sum of tile values, 0 for empty cells.
int board_sum(const Board& b);

int count_empty(const Board& b);
int max_exp(const Board& b);

// True iff some legal swipe's result contains a tile >= 2^goal_exp.
bool goal_merge_reached(const Board& b, int goal_exp);

bool goal_config_reached(const Board& b, const ConfigGoal& goal);

bool goal_reached(const Board& b, const GoalPredicate& goal);

bool within_caps(const Board& b, const Caps& caps);

// --- text formats --------------------------------------------------------

// Rows separated by ';', cells by ',', decimal tile values, 0 for empty.
// Throws std::invalid_argument naming the bad cell.
Board parse_board(const std::string& text);
std::string render_board(const Board& b);

// Caps file: one line per row, space-separated tile values.
Caps parse_caps_text(const std::string& text);
Caps parse_caps_file(const std::string& path);
std::string render_caps(const Caps& caps);

// Goal-config file: lines "r c value", 1-based cells.
ConfigGoal parse_goal_config_text(const std::string& text);
ConfigGoal parse_goal_config_file(const std::string& path);

// 0 for value 0, log2 otherwise; throws for non-power-of-two or oversized.
int tile_to_exp(long value);

}  // namespace tfel
