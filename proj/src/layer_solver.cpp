#include <atomic>
#include <chrono>
#include <cstring>
#include <functional>
#include <mutex>
#include <thread>

#include "tfel/layer_file.hpp"
#include "tfel/prob_solver.hpp"
#include "tfel/reach_solver.hpp"

namespace tfel {

namespace {

constexpr uint64_t kChunkPositions = uint64_t(1) << 14;

// Counts layers with live in-RAM buffers; the schedule must never hold
// more than three at once.
struct Residency {
  std::mutex mu;
  int current = 0;
  int peak = 0;

  void acquire() {
    std::lock_guard lock(mu);
    if (++current > peak) peak = current;
  }
  void release() {
    std::lock_guard lock(mu);
    --current;
  }
};

struct ResidentLayer {
  Residency& r;
  explicit ResidentLayer(Residency& rr) : r(rr) { r.acquire(); }
  ~ResidentLayer() { r.release(); }
  ResidentLayer(const ResidentLayer&) = delete;
};

// Chunk-parallel fill: the batch is split into chunks of 2^14 positions
// and each chunk goes to a worker by hash of its index, so the output is
// the same for any worker count.
void parallel_chunks(uint64_t count, int workers,
                     const std::function<void(uint64_t, uint64_t)>& fn) {
  if (count == 0) return;
  const uint64_t nchunks = (count + kChunkPositions - 1) / kChunkPositions;
  auto run_chunk = [&](uint64_t c) {
    uint64_t lo = c * kChunkPositions;
    fn(lo, std::min(count, lo + kChunkPositions));
  };
  if (workers <= 1 || nchunks == 1) {
    for (uint64_t c = 0; c < nchunks; ++c) run_chunk(c);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (uint64_t c = 0; c < nchunks; ++c)
        if (mix64(c) % uint64_t(workers) == uint64_t(w)) run_chunk(c);
    });
  }
  for (auto& t : threads) t.join();
}

struct SolveCommon {
  std::string mode;
  int rows = 0, cols = 0;
  GoalPredicate goal;
  Caps caps;
  std::filesystem::path dir;
  uint64_t batch_positions = 0;
  int workers = 1;
  bool keep_all = true;
  PayloadKind payload = PayloadKind::Bit;
  int goal_exp = 0;  // merge-goal exponent, 0 for config goals
};

void validate_common(SolveCommon& c) {
  if (c.rows < 1 || c.rows > kMaxDim || c.cols < 1 || c.cols > kMaxDim)
    throw std::domain_error("board dimensions out of range");
  if (c.caps.rows != c.rows || c.caps.cols != c.cols)
    throw std::domain_error("caps shape does not match board dimensions");
  if (c.workers < 1) c.workers = 1;
  if (c.batch_positions % 8) c.batch_positions += 8 - c.batch_positions % 8;

  if (const auto* m = std::get_if<MergeGoal>(&c.goal)) {
    c.goal_exp = m->goal_exp;
    if (c.goal_exp < 2) throw std::domain_error("merge goal tile must be at least 4");
    for (int i = 0; i < c.caps.cells(); ++i) {
      if (c.caps.cap[i] < 1 || c.caps.cap[i] > c.goal_exp - 1)
        throw std::domain_error("caps must be between 2 and T/2 for a merge goal");
      // A spawned 4 must fit unless it is itself the goal tile.
      if (c.caps.cap[i] < 2 && c.goal_exp > 2)
        throw std::domain_error("caps below 4 cannot absorb a spawned 4");
    }
  } else {
    const auto& cg = std::get<ConfigGoal>(c.goal);
    if (cg.tiles.empty()) throw std::domain_error("config goal has no tiles");
    for (const auto& t : cg.tiles) {
      if (t.r >= c.rows || t.c >= c.cols)
        throw std::domain_error("config goal cell outside the board");
      if (c.caps.at(t.r, t.c) < t.exp)
        throw std::domain_error("caps do not admit a required config tile");
    }
    for (int i = 0; i < c.caps.cells(); ++i)
      if (c.caps.cap[i] < 2)
        throw std::domain_error("caps must admit a spawned 4 (cap >= 4)");
  }
}

struct LayerRef {
  int sum;
  Turn turn;
};

// Spawn branch classification shared by both payloads.
enum class SpawnKind { Lookup, InstantWin, CapLoss };

inline SpawnKind classify_spawn(const SolveCommon& c, int cell, int exp) {
  if (c.goal_exp && exp >= c.goal_exp) return SpawnKind::InstantWin;
  if (exp > c.caps.cap[cell]) return SpawnKind::CapLoss;
  return SpawnKind::Lookup;
}

class LayerSolver {
 public:
  LayerSolver(SolveCommon cfg, const CountTable& table)
      : cfg_(std::move(cfg)), table_(table) {}

  RunManifest run() {
    const int max_sum = table_.max_sum();
    bool resumed = false;
    if (RunManifest::exists(cfg_.dir)) {
      RunManifest prev = RunManifest::load(cfg_.dir);
      if (prev.mode != cfg_.mode || prev.caps != cfg_.caps || !(prev.goal == cfg_.goal))
        throw std::runtime_error("run directory holds a different run: " + cfg_.dir.string());
      man_ = prev;
      resumed = true;
    }
    if (!resumed) {
      man_.mode = cfg_.mode;
      man_.rows = cfg_.rows;
      man_.cols = cfg_.cols;
      man_.goal = cfg_.goal;
      man_.caps = cfg_.caps;
      man_.max_sum = max_sum;
      for (int s = max_sum; s >= 0; s -= 2) {
        man_.layers.push_back({s, Turn::Computer, table_.layer_size(s), false, 0});
        man_.layers.push_back({s, Turn::Player, table_.layer_size(s), false, 0});
      }
    }
    man_.batch_positions = cfg_.batch_positions;
    man_.workers = cfg_.workers;
    man_.save(cfg_.dir);

    auto t0 = std::chrono::steady_clock::now();
    for (int s = max_sum; s >= 0; s -= 2) {
      solve_layer(s, Turn::Computer);
      solve_layer(s, Turn::Player);
      if (!cfg_.keep_all && s + 4 <= max_sum) prune_layer(s + 4, Turn::Player);
    }
    read_verdict();
    man_.peak_resident_layers = std::max(man_.peak_resident_layers, residency_.peak);
    man_.elapsed_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    man_.complete = true;
    man_.save(cfg_.dir);
    return man_;
  }

  int peak_resident() const { return residency_.peak; }

 private:
  std::filesystem::path layer_path(int sum, Turn turn) const {
    return cfg_.dir / layer_file_name(sum, turn);
  }

  void prune_layer(int sum, Turn turn) {
    // Schedule sanity: a pruned player layer must not feed any remaining
    // computer layer (computer layer s needs player s+2 and s+4).
    std::filesystem::remove(layer_path(sum, turn));
  }

  void solve_layer(int sum, Turn turn) {
    auto* status = man_.find_layer(sum, turn);
    if (status->done) {
      try {
        open_layer_checked(layer_path(sum, turn), table_).verify();
        return;  // resumable: already computed and intact
      } catch (const std::exception&) {
        status->done = false;
      }
    }
    auto t0 = std::chrono::steady_clock::now();
    const uint64_t n = table_.layer_size(sum);
    LayerMeta meta;
    meta.rows = uint8_t(cfg_.rows);
    meta.cols = uint8_t(cfg_.cols);
    meta.goal_exp = uint8_t(cfg_.goal_exp);
    meta.caps = cfg_.caps;
    meta.sum = sum;
    meta.turn = turn;
    meta.payload = cfg_.payload;
    meta.position_count = n;
    LayerFile out = LayerFile::create(layer_path(sum, turn), meta);
    {
      ResidentLayer r0(residency_);
      const uint64_t pb = cfg_.batch_positions ? cfg_.batch_positions : std::max<uint64_t>(n, 8);
      for (uint64_t lo = 0; lo < n; lo += pb) {
        const uint64_t hi = std::min(n, lo + pb);
        if (turn == Turn::Computer)
          computer_batch(sum, lo, hi, out);
        else
          player_batch(sum, lo, hi, out);
      }
    }
    out.finalize();
    status->done = true;
    status->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    man_.save(cfg_.dir);
  }

  // --- computer layers: combine spawn successors from player s+2 / s+4 ---

  void computer_batch(int sum, uint64_t lo, uint64_t hi, LayerFile& out) {
    const uint64_t cnt = hi - lo;
    const bool prob = cfg_.payload == PayloadKind::Fixed32;

    std::vector<uint8_t> bits;
    std::vector<uint64_t> acc;
    std::vector<uint8_t> empties;
    if (prob) {
      acc.assign(cnt, 0);
      empties.assign(cnt, 0);
    } else {
      bits.assign((cnt + 7) / 8, 0xFF);  // win unless some spawn refutes it
    }

    // Local pass: spawn branches that need no layer lookup.
    parallel_chunks(cnt, cfg_.workers, [&](uint64_t clo, uint64_t chi) {
      for (uint64_t p = clo; p < chi; ++p) {
        Board b = table_.unrank(sum, lo + p);
        int k = 0;
        for (int i = 0; i < b.cells(); ++i) {
          if (b.cell[i]) continue;
          ++k;
          for (int exp = 1; exp <= 2; ++exp) {
            switch (classify_spawn(cfg_, i, exp)) {
              case SpawnKind::InstantWin:
                if (prob) acc[p] += (exp == 1 ? 9ull : 1ull) * FixedProb::kFull;
                break;
              case SpawnKind::CapLoss:
                if (!prob) set_bit(bits, p, false);
                break;
              case SpawnKind::Lookup:
                break;
            }
          }
        }
        if (prob) empties[p] = uint8_t(k);
      }
    });

    // Streamed passes over the two player source layers.
    for (int dv : {2, 4}) {
      const int ss = sum + dv;
      if (ss > table_.max_sum() || table_.layer_size(ss) == 0) continue;
      LayerFile src = open_layer_checked(layer_path(ss, Turn::Player), table_);
      ResidentLayer r1(residency_);
      const uint64_t m = src.meta().position_count;
      const uint64_t spb = cfg_.batch_positions ? cfg_.batch_positions : m;
      for (uint64_t slo = 0; slo < m; slo += spb) {
        const uint64_t shi = std::min(m, slo + spb);
        auto sdata = src.read_positions(slo, shi - slo);
        parallel_chunks(cnt, cfg_.workers, [&](uint64_t clo, uint64_t chi) {
          for (uint64_t p = clo; p < chi; ++p) {
            if (!prob && !get_bit(bits, p)) continue;  // already refuted
            Board b = table_.unrank(sum, lo + p);
            for (int i = 0; i < b.cells(); ++i) {
              if (b.cell[i]) continue;
              for (int exp = 1; exp <= 2; ++exp) {
                if ((1 << exp) != dv) continue;
                if (classify_spawn(cfg_, i, exp) != SpawnKind::Lookup) continue;
                Board nb = b;
                nb.cell[i] = uint8_t(exp);
                uint64_t r = table_.rank(nb).index;
                if (r < slo || r >= shi) continue;
                if (prob) {
                  uint32_t v;
                  std::memcpy(&v, &sdata[(r - slo) * 4], 4);
                  acc[p] += (exp == 1 ? 9ull : 1ull) * v;
                } else if (!get_bit(sdata, r - slo)) {
                  set_bit(bits, p, false);
                }
              }
            }
          }
        });
      }
    }

    if (prob) {
      // One downward division per node: floor(sum(9a+b) / (10k)).
      std::vector<uint8_t> words(cnt * 4);
      for (uint64_t p = 0; p < cnt; ++p) {
        uint32_t v;
        if (empties[p] == 0) {
          v = FixedProb::kFull;  // full board: vacuous all-spawns win
        } else {
          uint64_t q = acc[p] / (10ull * empties[p]);
          v = q > FixedProb::kFull ? FixedProb::kFull : uint32_t(q);
        }
        std::memcpy(&words[p * 4], &v, 4);  // little-endian hosts only
      }
      out.write_positions(lo, cnt, words);
    } else {
      clear_padding(bits, cnt);
      out.write_positions(lo, cnt, bits);
    }
  }

  // --- player layers: terminal goals, then max/OR over swipes in C(s) ---

  void player_batch(int sum, uint64_t lo, uint64_t hi, LayerFile& out) {
    const uint64_t cnt = hi - lo;
    const bool prob = cfg_.payload == PayloadKind::Fixed32;

    std::vector<uint8_t> bits;
    std::vector<uint32_t> val;
    if (prob)
      val.assign(cnt, 0);
    else
      bits.assign((cnt + 7) / 8, 0x00);

    parallel_chunks(cnt, cfg_.workers, [&](uint64_t clo, uint64_t chi) {
      for (uint64_t p = clo; p < chi; ++p) {
        Board b = table_.unrank(sum, lo + p);
        if (goal_reached(b, cfg_.goal)) {
          if (prob)
            val[p] = FixedProb::kFull;
          else
            set_bit(bits, p, true);
        }
      }
    });

    const uint64_t m = table_.layer_size(sum);
    LayerFile src = open_layer_checked(layer_path(sum, Turn::Computer), table_);
    ResidentLayer r1(residency_);
    const uint64_t spb = cfg_.batch_positions ? cfg_.batch_positions : m;
    for (uint64_t slo = 0; slo < m; slo += spb) {
      const uint64_t shi = std::min(m, slo + spb);
      auto sdata = src.read_positions(slo, shi - slo);
      parallel_chunks(cnt, cfg_.workers, [&](uint64_t clo, uint64_t chi) {
        for (uint64_t p = clo; p < chi; ++p) {
          if (!prob && get_bit(bits, p)) continue;
          if (prob && val[p] == FixedProb::kFull) continue;
          Board b = table_.unrank(sum, lo + p);
          for (Direction d :
               {Direction::Left, Direction::Right, Direction::Up, Direction::Down}) {
            auto nb = swipe(b, d);
            if (!nb || !within_caps(*nb, cfg_.caps)) continue;  // unavailable move
            uint64_t r = table_.rank(*nb).index;
            if (r < slo || r >= shi) continue;
            if (prob) {
              uint32_t v;
              std::memcpy(&v, &sdata[(r - slo) * 4], 4);
              if (v > val[p]) val[p] = v;
            } else if (get_bit(sdata, r - slo)) {
              set_bit(bits, p, true);
              break;
            }
          }
        }
      });
    }

    if (prob) {
      std::vector<uint8_t> words(cnt * 4);
      std::memcpy(words.data(), val.data(), cnt * 4);
      out.write_positions(lo, cnt, words);
    } else {
      clear_padding(bits, cnt);
      out.write_positions(lo, cnt, bits);
    }
  }

  static void clear_padding(std::vector<uint8_t>& bits, uint64_t cnt) {
    if (cnt % 8) bits.back() &= uint8_t((1u << (cnt % 8)) - 1);
  }

  void read_verdict() {
    // The headline value: the single empty-board position, computer turn.
    LayerFile f = open_layer_checked(layer_path(0, Turn::Computer), table_);
    if (cfg_.payload == PayloadKind::Bit) {
      auto data = f.read_positions(0, 1);
      man_.has_verdict = true;
      man_.win = get_bit(data, 0);
    } else {
      auto data = f.read_positions(0, 1);
      uint32_t v;
      std::memcpy(&v, data.data(), 4);
      man_.has_bound = true;
      man_.bound_raw = v;
    }
  }

  SolveCommon cfg_;
  const CountTable& table_;
  RunManifest man_;
  Residency residency_;
};

SolveCommon make_common(std::string mode, int rows, int cols, const GoalPredicate& goal,
                        const Caps& caps, const std::filesystem::path& dir, uint64_t batch,
                        int workers, bool keep_all, PayloadKind payload) {
  SolveCommon c;
  c.mode = std::move(mode);
  c.rows = rows;
  c.cols = cols;
  c.goal = goal;
  c.caps = caps;
  c.dir = dir;
  c.batch_positions = batch;
  c.workers = workers;
  c.keep_all = keep_all;
  c.payload = payload;
  validate_common(c);
  return c;
}

uint64_t read_value_at(const CountTable& table, const std::filesystem::path& dir,
                       const Board& board, Turn turn, PayloadKind kind) {
  auto li = table.rank(board);
  LayerFile f = open_layer_checked(dir / layer_file_name(li.sum, turn), table);
  if (f.meta().payload != kind) throw std::runtime_error("layer payload kind mismatch");
  if (kind == PayloadKind::Bit) {
    uint64_t first = li.index & ~uint64_t(7);
    auto data = f.read_positions(first, std::min<uint64_t>(8, f.meta().position_count - first));
    return get_bit(data, li.index - first) ? 1 : 0;
  }
  auto data = f.read_positions(li.index, 1);
  uint32_t v;
  std::memcpy(&v, data.data(), 4);
  return v;
}

}  // namespace

// --- reach ----------------------------------------------------------------

ReachDB solve_reach(const ReachConfig& config) {
  auto common = make_common("reach", config.rows, config.cols, config.goal, config.caps,
                            config.dir, config.batch_positions, config.workers,
                            config.keep_all, PayloadKind::Bit);
  std::filesystem::create_directories(config.dir);
  CountTable table = CountTable::build(common.caps);
  LayerSolver solver(common, table);
  RunManifest man = solver.run();
  return ReachDB{config.dir, std::move(man), std::move(table)};
}

ReachDB open_reach(const std::filesystem::path& dir) {
  RunManifest man = RunManifest::load(dir);
  if (man.mode != "reach") throw std::runtime_error("not a reach run: " + dir.string());
  CountTable table = CountTable::build(man.caps);
  return ReachDB{dir, std::move(man), std::move(table)};
}

bool query_reach(const ReachDB& db, const Board& board, Turn turn) {
  return read_value_at(db.table, db.dir, board, turn, PayloadKind::Bit) != 0;
}

StartReport evaluate_two_tile_starts(const ReachDB& db) {
  StartReport report;
  const int n = db.manifest.rows * db.manifest.cols;
  const auto* mg = std::get_if<MergeGoal>(&db.manifest.goal);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int ei = 1; ei <= 2; ++ei) {
        for (int ej = 1; ej <= 2; ++ej) {
          Board b(db.manifest.rows, db.manifest.cols);
          b.cell[i] = uint8_t(ei);
          b.cell[j] = uint8_t(ej);
          bool win;
          if (mg && max_exp(b) >= mg->goal_exp)
            win = true;  // the start already holds the goal tile
          else
            win = query_reach(db, b, Turn::Player);
          report.entries.push_back({b, win});
          if (win) ++report.wins;
        }
      }
    }
  }
  return report;
}

MaxTileResult max_guaranteed_tile(int rows, int cols, const std::filesystem::path& work_dir,
                                  uint64_t batch_positions, int workers,
                                  uint64_t state_budget) {
  MaxTileResult result;
  result.tile = 2;  // the very first spawn already places a 2 or better
  for (int goal_exp = 2; goal_exp <= kMaxExp; ++goal_exp) {
    Caps caps = Caps::uniform(rows, cols, goal_exp - 1);
    if (state_budget) {
      unsigned __int128 states = 1;
      for (int i = 0; i < caps.cells(); ++i) states *= unsigned(caps.cap[i] + 1);
      if (states > state_budget) {
        result.exact = false;
        return result;
      }
    }
    ReachConfig rc;
    rc.rows = rows;
    rc.cols = cols;
    rc.goal = MergeGoal{uint8_t(goal_exp)};
    rc.caps = caps;
    rc.dir = work_dir / ("T" + std::to_string(1L << goal_exp));
    rc.batch_positions = batch_positions;
    rc.workers = workers;
    ReachDB db = solve_reach(rc);
    if (db.start_wins()) {
      result.tile = 1L << goal_exp;
    } else {
      result.first_loss = 1L << goal_exp;
      return result;
    }
  }
  result.exact = false;  // ran past the representable tiles
  return result;
}

// --- prob -------------------------------------------------------------------

ProbDB solve_prob(const ProbConfig& config) {
  auto common = make_common("prob", config.rows, config.cols, config.goal, config.caps,
                            config.dir, config.batch_positions, config.workers,
                            config.keep_all, PayloadKind::Fixed32);
  // Intermediate sums stay in 64 bits: 10 * mn * 2^32 < 2^64 for mn <= 36.
  static_assert(10ull * kMaxCells * 0xFFFFFFFFull < ~0ull);
  std::filesystem::create_directories(config.dir);
  CountTable table = CountTable::build(common.caps);
  LayerSolver solver(common, table);
  RunManifest man = solver.run();
  return ProbDB{config.dir, std::move(man), std::move(table)};
}

ProbDB open_prob(const std::filesystem::path& dir) {
  RunManifest man = RunManifest::load(dir);
  if (man.mode != "prob") throw std::runtime_error("not a prob run: " + dir.string());
  CountTable table = CountTable::build(man.caps);
  return ProbDB{dir, std::move(man), std::move(table)};
}

FixedProb query_prob(const ProbDB& db, const Board& board, Turn turn) {
  return {uint32_t(read_value_at(db.table, db.dir, board, turn, PayloadKind::Fixed32))};
}

}  // namespace tfel
