#include "tfel/board.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tfel {

const char* to_string(Direction d) {
  switch (d) {
    case Direction::Left: return "left";
    case Direction::Right: return "right";
    case Direction::Up: return "up";
    case Direction::Down: return "down";
  }
  return "?";
}

const char* to_string(Turn t) {
  return t == Turn::Player ? "player" : "computer";
}

Caps Caps::uniform(int rows, int cols, int cap_exp) {
  Caps c(rows, cols);
  for (int i = 0; i < rows * cols; ++i) c.cap[i] = static_cast<uint8_t>(cap_exp);
  return c;
}

int Caps::max_sum() const {
  int s = 0;
  for (int i = 0; i < cells(); ++i)
    if (cap[i]) s += 1 << cap[i];
  return s;
}

namespace {

// Cell index of the i-th cell of line l, counting from the edge tiles
// move toward.
inline int line_cell(const Board& b, Direction d, int l, int i) {
  switch (d) {
    case Direction::Left: return l * b.cols + i;
    case Direction::Right: return l * b.cols + (b.cols - 1 - i);
    case Direction::Up: return i * b.cols + l;
    case Direction::Down: return (b.rows - 1 - i) * b.cols + l;
  }
  return 0;
}

}  // namespace

std::optional<Board> swipe(const Board& b, Direction d) {
  const bool horizontal = (d == Direction::Left || d == Direction::Right);
  const int lines = horizontal ? b.rows : b.cols;
  const int len = horizontal ? b.cols : b.rows;

  Board out = b;
  bool changed = false;
  for (int l = 0; l < lines; ++l) {
    uint8_t res[kMaxDim] = {0};
    bool merged[kMaxDim] = {false};
    int w = 0;
    for (int i = 0; i < len; ++i) {
      uint8_t e = b.cell[line_cell(b, d, l, i)];
      if (!e) continue;
      if (w > 0 && res[w - 1] == e && !merged[w - 1]) {
        res[w - 1]++;
        merged[w - 1] = true;  // merge once per swipe
      } else {
        res[w] = e;
        w++;
      }
    }
    for (int i = 0; i < len; ++i) {
      int idx = line_cell(b, d, l, i);
      uint8_t e = i < w ? res[i] : 0;
      if (out.cell[idx] != e) {
        out.cell[idx] = e;
        changed = true;
      }
    }
  }
  if (!changed) return std::nullopt;
  return out;
}

std::vector<Direction> legal_moves(const Board& b) {
  std::vector<Direction> out;
  for (Direction d : {Direction::Left, Direction::Right, Direction::Up, Direction::Down})
    if (swipe(b, d)) out.push_back(d);
  return out;
}

Board spawn(const Board& b, int r, int c, int value) {
  if (value != 2 && value != 4) throw std::invalid_argument("spawn value must be 2 or 4");
  if (r < 0 || r >= b.rows || c < 0 || c >= b.cols)
    throw std::invalid_argument("spawn cell out of range");
  if (b.at(r, c) != 0) throw std::invalid_argument("spawn cell is occupied");
  Board out = b;
  out.at(r, c) = value == 2 ? 1 : 2;
  return out;
}

int board_sum(const Board& b) {
  int s = 0;
  for (int i = 0; i < b.cells(); ++i)
    if (b.cell[i]) s += 1 << b.cell[i];
  return s;
}

int count_empty(const Board& b) {
  int n = 0;
  for (int i = 0; i < b.cells(); ++i)
    if (!b.cell[i]) ++n;
  return n;
}

int max_exp(const Board& b) {
  int m = 0;
  for (int i = 0; i < b.cells(); ++i)
    if (b.cell[i] > m) m = b.cell[i];
  return m;
}

bool goal_merge_reached(const Board& b, int goal_exp) {
  for (Direction d : {Direction::Left, Direction::Right, Direction::Up, Direction::Down}) {
    auto r = swipe(b, d);
    if (r && max_exp(*r) >= goal_exp) return true;
  }
  return false;
}

bool goal_config_reached(const Board& b, const ConfigGoal& goal) {
  for (const auto& t : goal.tiles)
    if (b.at(t.r, t.c) != t.exp) return false;
  return true;
}

bool goal_reached(const Board& b, const GoalPredicate& goal) {
  if (const auto* m = std::get_if<MergeGoal>(&goal)) return goal_merge_reached(b, m->goal_exp);
  return goal_config_reached(b, std::get<ConfigGoal>(goal));
}

bool within_caps(const Board& b, const Caps& caps) {
  for (int i = 0; i < b.cells(); ++i)
    if (b.cell[i] > caps.cap[i]) return false;
  return true;
}

int tile_to_exp(long value) {
  if (value == 0) return 0;
  if (value < 2 || (value & (value - 1)) != 0)
    throw std::invalid_argument(std::to_string(value) + " is not a tile value");
  int e = 0;
  while ((1L << e) < value) ++e;
  if (e > kMaxExp) throw std::invalid_argument("tile value too large: " + std::to_string(value));
  return e;
}

namespace {

std::vector<std::vector<long>> parse_number_grid(const std::string& text, char cell_sep) {
  std::vector<std::vector<long>> grid;
  std::istringstream rows_in(text);
  std::string row;
  char row_sep = cell_sep == ',' ? ';' : '\n';
  while (std::getline(rows_in, row, row_sep)) {
    if (row.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<long> vals;
    std::istringstream cells_in(row);
    std::string tok;
    if (cell_sep == ',') {
      while (std::getline(cells_in, tok, ',')) vals.push_back(std::stol(tok));
    } else {
      long v;
      while (cells_in >> v) vals.push_back(v);
    }
    grid.push_back(std::move(vals));
  }
  return grid;
}

}  // namespace

Board parse_board(const std::string& text) {
  auto grid = parse_number_grid(text, ',');
  if (grid.empty()) throw std::invalid_argument("empty board text");
  size_t cols = grid[0].size();
  if ((int)grid.size() > kMaxDim || (int)cols > kMaxDim || cols == 0)
    throw std::invalid_argument("board dimensions out of range");
  Board b((int)grid.size(), (int)cols);
  for (size_t r = 0; r < grid.size(); ++r) {
    if (grid[r].size() != cols)
      throw std::invalid_argument("ragged row " + std::to_string(r + 1));
    for (size_t c = 0; c < cols; ++c) {
      try {
        b.at((int)r, (int)c) = static_cast<uint8_t>(tile_to_exp(grid[r][c]));
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("cell (" + std::to_string(r + 1) + "," +
                                    std::to_string(c + 1) + "): " + e.what());
      }
    }
  }
  return b;
}

std::string render_board(const Board& b) {
  std::string out;
  for (int r = 0; r < b.rows; ++r) {
    if (r) out += ';';
    for (int c = 0; c < b.cols; ++c) {
      if (c) out += ',';
      out += std::to_string(b.at(r, c) ? (1L << b.at(r, c)) : 0L);
    }
  }
  return out;
}

Caps parse_caps_text(const std::string& text) {
  auto grid = parse_number_grid(text, ' ');
  if (grid.empty()) throw std::invalid_argument("empty caps text");
  size_t cols = grid[0].size();
  if ((int)grid.size() > kMaxDim || (int)cols > kMaxDim || cols == 0)
    throw std::invalid_argument("caps dimensions out of range");
  Caps caps((int)grid.size(), (int)cols);
  for (size_t r = 0; r < grid.size(); ++r) {
    if (grid[r].size() != cols)
      throw std::invalid_argument("ragged caps row " + std::to_string(r + 1));
    for (size_t c = 0; c < cols; ++c)
      caps.at((int)r, (int)c) = static_cast<uint8_t>(tile_to_exp(grid[r][c]));
  }
  return caps;
}

Caps parse_caps_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open caps file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_caps_text(ss.str());
}

std::string render_caps(const Caps& caps) {
  std::string out;
  for (int r = 0; r < caps.rows; ++r) {
    for (int c = 0; c < caps.cols; ++c) {
      if (c) out += ' ';
      out += std::to_string(caps.at(r, c) ? (1L << caps.at(r, c)) : 0L);
    }
    out += '\n';
  }
  return out;
}

ConfigGoal parse_goal_config_text(const std::string& text) {
  ConfigGoal goal;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    int r, c;
    long v;
    if (!(ls >> r >> c >> v)) throw std::invalid_argument("bad goal-config line: " + line);
    if (r < 1 || c < 1 || r > kMaxDim || c > kMaxDim)
      throw std::invalid_argument("goal-config cell out of range: " + line);
    goal.tiles.push_back({static_cast<uint8_t>(r - 1), static_cast<uint8_t>(c - 1),
                          static_cast<uint8_t>(tile_to_exp(v))});
  }
  for (size_t i = 0; i < goal.tiles.size(); ++i)
    for (size_t j = i + 1; j < goal.tiles.size(); ++j)
      if (goal.tiles[i].r == goal.tiles[j].r && goal.tiles[i].c == goal.tiles[j].c)
        throw std::invalid_argument("goal-config cells must be distinct");
  return goal;
}

ConfigGoal parse_goal_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open goal-config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_goal_config_text(ss.str());
}

}  // namespace tfel
