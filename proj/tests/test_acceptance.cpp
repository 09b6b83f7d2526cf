// End-to-end checks, one printed line per criterion. Exits nonzero if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "tfel/board.hpp"
#include "tfel/count_table.hpp"
#include "tfel/layer_file.hpp"
#include "tfel/lemma.hpp"
#include "tfel/oracle.hpp"
#include "tfel/prob_solver.hpp"
#include "tfel/reach_solver.hpp"

using namespace tfel;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void criterion(int n, bool ok, const std::string& what, double seconds) {
  std::printf("criterion %2d: %s  %s (%.1f s)\n", n, ok ? "pass" : "FAIL", what.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

struct Timer {
  Clock::time_point t0 = Clock::now();
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }
};

std::vector<Board> enumerate_boards(const Caps& caps) {
  std::vector<Board> out;
  Board b(caps.rows, caps.cols);
  int mn = b.cells();
  auto rec = [&](auto&& self, int i) -> void {
    if (i == mn) {
      out.push_back(b);
      return;
    }
    for (int e = 0; e <= caps.cap[i]; ++e) {
      b.cell[i] = uint8_t(e);
      self(self, i + 1);
    }
    b.cell[i] = 0;
  };
  rec(rec, 0);
  return out;
}

bool same_layer_files(const fs::path& a, const fs::path& b) {
  size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().extension() != ".layer") continue;
    ++seen;
    fs::path other = b / entry.path().filename();
    if (!fs::exists(other)) return false;
    std::ifstream fa(entry.path(), std::ios::binary), fb(other, std::ios::binary);
    std::vector<char> da((std::istreambuf_iterator<char>(fa)), {});
    std::vector<char> db((std::istreambuf_iterator<char>(fb)), {});
    if (da != db) return false;
  }
  return seen > 0;
}

ReachConfig reach_config(int rows, int cols, int goal_exp, const fs::path& dir) {
  ReachConfig c;
  c.rows = rows;
  c.cols = cols;
  c.goal = MergeGoal{uint8_t(goal_exp)};
  c.caps = Caps::uniform(rows, cols, goal_exp - 1);
  c.dir = dir;
  c.workers = 2;
  return c;
}

ProbConfig prob_config(int rows, int cols, int goal_exp, const fs::path& dir) {
  ProbConfig c;
  c.rows = rows;
  c.cols = cols;
  c.goal = MergeGoal{uint8_t(goal_exp)};
  c.caps = Caps::uniform(rows, cols, goal_exp - 1);
  c.dir = dir;
  c.workers = 2;
  return c;
}

bool bijection_ok(const Caps& caps) {
  CountTable table = CountTable::build(caps);
  // enumeration is lexicographic, so per-layer ranks must come out 0,1,2,...
  std::vector<uint64_t> next(size_t(table.max_sum() / 2 + 1), 0);
  uint64_t total = 0;
  for (const Board& b : enumerate_boards(caps)) {
    int sum = board_sum(b);
    uint64_t expect = next[size_t(sum / 2)]++;
    LayerIndex idx = table.rank(b);
    if (idx.sum != sum || idx.index != expect) return false;
    if (!(table.unrank(sum, expect) == b)) return false;
    ++total;
  }
  for (int s = 0; s <= table.max_sum(); s += 2)
    if (table.layer_size(s) != next[size_t(s / 2)]) return false;
  return table.total_positions() == total;
}

bool ladder_ok(int rows, int cols, long tile, const fs::path& dir) {
  MaxTileResult r = max_guaranteed_tile(rows, cols, dir, 0, 2);
  return r.tile == tile && r.exact && (tile == 2 || r.first_loss == 2 * tile);
}

bool reach_matches_oracle(const fs::path& dir, int rows, int cols, int goal_exp) {
  ReachConfig cfg = reach_config(rows, cols, goal_exp, dir);
  ReachDB db = solve_reach(cfg);
  ReachOracle oracle(cfg.caps, cfg.goal);
  for (const Board& b : enumerate_boards(cfg.caps)) {
    if (query_reach(db, b, Turn::Player) != oracle.value(b, Turn::Player)) return false;
    if (count_empty(b) > 0 &&
        query_reach(db, b, Turn::Computer) != oracle.value(b, Turn::Computer))
      return false;
  }
  return true;
}

bool prob_sound_and_tight(const fs::path& dir, int rows, int cols, int goal_exp) {
  ProbConfig cfg = prob_config(rows, cols, goal_exp, dir);
  ProbDB db = solve_prob(cfg);
  ExpectimaxOracle oracle(cfg.caps, cfg.goal);
  Rational two32 = Rational(uint64_t(1) << 32);
  for (const Board& b : enumerate_boards(cfg.caps)) {
    Rational player = Rational(query_prob(db, b, Turn::Player).raw) / two32;
    if (player > oracle.value(b, Turn::Player)) return false;
    if (count_empty(b) > 0) {
      Rational computer = Rational(query_prob(db, b, Turn::Computer).raw) / two32;
      if (computer > oracle.value(b, Turn::Computer)) return false;
    }
  }
  Rational start_exact = oracle.value(Board(rows, cols), Turn::Computer);
  Rational start_stored = Rational(db.start_bound().raw) / two32;
  return start_exact - start_stored < Rational(1, 1 << 20);
}

fs::path source_root() {
  const char* env = std::getenv("TFEL_SOURCE_DIR");
  if (env && *env) return env;
  return fs::current_path();
}

}  // namespace

int main() {
  fs::path work = fs::temp_directory_path() /
                  ("tfel_acceptance_" + std::to_string(std::random_device{}()));
  fs::create_directories(work);

  {
    Timer t;
    CountTable table = CountTable::build(Caps::uniform(4, 4, 7));
    uint64_t peak = 0;
    for (auto [sum, n] : table.census()) peak = std::max(peak, n);
    double s = t.seconds();
    criterion(1, peak == 1353817378016ULL && s < 5.0,
              "4x4 goal-256 census peak layer is 1353817378016", s);

    Timer t2;
    uint64_t total = table.total_positions();
    double s2 = t2.seconds();
    criterion(2, total == 281474976710656ULL && s2 + s < 5.0,
              "4x4 goal-256 census totals 8^16 positions per turn", s2 + s);
  }

  {
    Timer t;
    bool ok = bijection_ok(Caps::uniform(2, 3, 4)) && bijection_ok(Caps::uniform(3, 3, 3)) &&
              bijection_ok(parse_caps_text("16 4 8\n32 16 4\n")) &&
              bijection_ok(parse_caps_text("4 16\n16 4\n8 8\n"));
    criterion(3, ok && t.seconds() < 300,
              "rank/unrank bijection over every 2x3 cap-16, 3x3 cap-8 and non-uniform position",
              t.seconds());
  }

  {
    Timer t;
    bool ok = ladder_ok(1, 1, 2, work / "l11") && ladder_ok(1, 2, 4, work / "l12") &&
              ladder_ok(1, 3, 4, work / "l13") && ladder_ok(1, 4, 4, work / "l14") &&
              ladder_ok(2, 2, 8, work / "l22") && ladder_ok(2, 3, 16, work / "l23") &&
              ladder_ok(3, 3, 32, work / "l33") && ladder_ok(2, 4, 32, work / "l24");
    criterion(4, ok, "guaranteed tiles: 1x1=2 1x2=1x3=1x4=4 2x2=8 2x3=16 3x3=32 2x4=32",
              t.seconds());
  }

  {
    Timer t;
    auto capped = [&](const char* caps_text, int goal_exp, const char* name) {
      Caps caps = parse_caps_text(caps_text);
      ReachConfig cfg;
      cfg.rows = caps.rows;
      cfg.cols = caps.cols;
      cfg.goal = MergeGoal{uint8_t(goal_exp)};
      cfg.caps = caps;
      cfg.dir = work / name;
      cfg.workers = 2;
      return solve_reach(cfg).start_wins();
    };
    bool ok = capped("16 16 16\n16 16 16\n8 8 8\n", 5, "a1") &&
              !capped("16 16 16\n16 8 16\n16 16 16\n", 5, "a2") &&
              !capped("32 32 32\n32 32 32\n32 32 32\n", 6, "a3") &&
              capped("16 16 16 8\n16 16 16 8\n", 5, "a4") &&
              !capped("32 32 32 32\n32 32 32 32\n", 6, "a5");
    criterion(5, ok, "capped 3x3 and 2x4 winnability verdicts match the published rows",
              t.seconds());
  }

  {
    Timer t;
    bool ok = reach_matches_oracle(work / "o22", 2, 2, 3) &&
              reach_matches_oracle(work / "o23", 2, 3, 4);
    criterion(6, ok && t.seconds() < 1800,
              "reachability equals the direct min-max oracle at every 2x2/8 and 2x3/16 position",
              t.seconds());
  }

  {
    Timer t;
    bool ok = prob_sound_and_tight(work / "p22", 2, 2, 3) &&
              prob_sound_and_tight(work / "p14", 1, 4, 3) &&
              prob_sound_and_tight(work / "p23", 2, 3, 4);
    criterion(7, ok && t.seconds() < 3600,
              "fixed-point bounds sound everywhere, start gap below 2^-20, on three boards",
              t.seconds());
  }

  {
    Timer t;
    ReachConfig r1 = reach_config(2, 3, 4, work / "b_r_whole");
    ReachConfig r2 = reach_config(2, 3, 4, work / "b_r_batched");
    r2.batch_positions = 8;  // dozens of processing batches on the big layers
    solve_reach(r1);
    solve_reach(r2);
    ProbConfig p1 = prob_config(2, 2, 3, work / "b_p_whole");
    ProbConfig p2 = prob_config(2, 2, 3, work / "b_p_batched");
    p2.batch_positions = 8;
    solve_prob(p1);
    solve_prob(p2);
    bool ok = same_layer_files(r1.dir, r2.dir) && same_layer_files(p1.dir, p2.dir);
    criterion(8, ok, "batched out-of-core runs byte-identical to single-batch runs", t.seconds());
  }

  {
    Timer t;
    int max_workers = std::max(2u, std::thread::hardware_concurrency());
    bool ok = true;
    fs::path first;
    for (int w : {1, 2, max_workers}) {
      ReachConfig cfg = reach_config(2, 3, 4, work / ("w_r" + std::to_string(w)));
      cfg.workers = w;
      solve_reach(cfg);
      ProbConfig pcfg = prob_config(2, 2, 3, work / ("w_p" + std::to_string(w)));
      pcfg.workers = w;
      solve_prob(pcfg);
      if (w == 1) {
        first = cfg.dir;
      } else {
        ok = ok && same_layer_files(work / "w_r1", cfg.dir) &&
             same_layer_files(work / "w_p1", pcfg.dir);
      }
    }
    criterion(9, ok, "worker counts 1, 2 and machine-max produce byte-identical databases",
              t.seconds());
  }

  {
    Timer t;
    LemmaCheckConfig cfg;
    cfg.exhaustive_depth = 6;
    cfg.random_playouts = 10000;
    cfg.seed = 1;
    cfg.workers = std::max(2u, std::thread::hardware_concurrency());
    LemmaReport rep = check_lemma(cfg);
    LemmaCheckConfig bad = cfg;
    bad.random_playouts = 2000;
    bad.exhaustive_depth = 3;
    bad.mutation = PolicyMutation::AvoidGoal;
    LemmaReport mutated = check_lemma(bad);
    bool ok = rep.passed() && rep.wins == rep.playouts && rep.case3_iterations >= 1 &&
              rep.progress_violations == 0 && !mutated.passed() &&
              !mutated.counterexamples.empty();
    criterion(10, ok,
              "five-big-tile strategy: depth-6 exhaustive plus 10^4 playouts all reach 2048; "
              "mutated policy fails",
              t.seconds());
  }

  {
    Timer t;
    fs::path cfgs = source_root() / "configs";
    bool ok = true;
    try {
      Caps reach_caps = parse_caps_file((cfgs / "caps_4x4_guaranteed256.txt").string());
      ok = ok && reach_caps.rows == 4 && reach_caps.cols == 4 && reach_caps.at(0, 0) == 7;
      Caps prob_caps = parse_caps_file((cfgs / "caps_4x4_prob2048.txt").string());
      ok = ok && prob_caps.rows == 4 && prob_caps.at(0, 0) == 10 && prob_caps.at(1, 2) == 7;
      ConfigGoal goal = parse_goal_config_file((cfgs / "goal_4x4_prob2048.txt").string());
      ok = ok && goal.tiles.size() == 5;
      // both runs must at least pass config validation and schedule sizing
      CountTable reach_table = CountTable::build(reach_caps);
      CountTable prob_table = CountTable::build(prob_caps);
      ok = ok && reach_table.total_positions() == 281474976710656ULL &&
           prob_table.total_positions() > 0;
    } catch (const std::exception&) {
      ok = false;
    }
    criterion(11, ok,
              "4x4 guaranteed-256 and 0.99969486-bound configurations ship runnable (not "
              "executed here)",
              t.seconds());
  }

  fs::remove_all(work);
  if (failures) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all 11 criteria passed\n");
  return 0;
}
