#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tfel/count_table.hpp"
#include "tfel/lemma.hpp"
#include "tfel/prob_solver.hpp"
#include "tfel/reach_solver.hpp"

namespace fs = std::filesystem;
using namespace tfel;

namespace {

char sep_for(const std::string& format) { return format == "tsv" ? '\t' : ','; }

struct GoalFlags {
  long goal_tile = 0;
  std::string goal_config_file;

  GoalPredicate resolve() const {
    if (!goal_config_file.empty()) return parse_goal_config_file(goal_config_file);
    if (goal_tile <= 0) throw std::runtime_error("one of --goal or --goal-config is required");
    return MergeGoal{static_cast<uint8_t>(tile_to_exp(goal_tile))};
  }
};

Caps resolve_caps(const std::string& caps_file, int rows, int cols, const GoalPredicate& goal) {
  if (!caps_file.empty()) return parse_caps_file(caps_file);
  const auto* m = std::get_if<MergeGoal>(&goal);
  if (!m) throw std::runtime_error("--caps is required with --goal-config");
  return Caps::uniform(rows, cols, std::max(1, m->goal_exp - 1));
}

uint64_t batch_from_budget(uint64_t ram_budget, uint64_t batch_size, bool prob) {
  if (batch_size) return batch_size;
  if (!ram_budget) return 0;  // whole-layer batches
  // Three layers stay resident, so each gets a third of the budget.
  uint64_t per_layer = ram_budget / 3;
  uint64_t positions = prob ? per_layer / 4 : per_layer * 8;
  return std::max<uint64_t>(positions, 8);
}

void write_or_print(const std::string& out_file, const std::string& content) {
  if (out_file.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out_file, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + out_file);
  f << content;
}

int cmd_census(int rows, int cols, const GoalFlags& goal, const std::string& caps_file,
               const std::string& out_file, const std::string& format) {
  GoalPredicate g = goal.resolve();
  Caps caps = resolve_caps(caps_file, rows, cols, g);
  const char sep = sep_for(format);
  std::ostringstream os;
  os << "sum" << sep << "count\n";
  try {
    CountTable table = CountTable::build(caps);
    for (auto [sum, count] : table.census()) os << sum << sep << count << "\n";
  } catch (const count_overflow_error&) {
    for (auto& [sum, count] : wide_census(caps, caps.max_sum())) os << sum << sep << count << "\n";
  }
  write_or_print(out_file, os.str());
  return 0;
}

int cmd_solve_reach(int rows, int cols, const GoalFlags& goal, const std::string& caps_file,
                    const std::string& out_dir, int threads, uint64_t batch_size,
                    uint64_t ram_budget, bool prune) {
  ReachConfig config;
  config.rows = rows;
  config.cols = cols;
  config.goal = goal.resolve();
  config.caps = resolve_caps(caps_file, rows, cols, config.goal);
  config.dir = out_dir;
  config.workers = threads;
  config.batch_positions = batch_from_budget(ram_budget, batch_size, false);
  config.keep_all = !prune;
  ReachDB db = solve_reach(config);
  std::cout << "layers " << db.manifest.layers.size() << ", max sum " << db.manifest.max_sum
            << ", elapsed " << db.manifest.elapsed_seconds << "s\n";
  std::cout << "the empty start is " << (db.start_wins() ? "winnable" : "NOT winnable")
            << " against the adversarial spawner\n";
  std::cout << "RESULT " << (db.start_wins() ? "win" : "loss") << "\n";
  return 0;
}

int cmd_solve_prob(int rows, int cols, const GoalFlags& goal, const std::string& caps_file,
                   const std::string& out_dir, int threads, uint64_t batch_size,
                   uint64_t ram_budget, bool prune) {
  ProbConfig config;
  config.rows = rows;
  config.cols = cols;
  config.goal = goal.resolve();
  config.caps = resolve_caps(caps_file, rows, cols, config.goal);
  config.dir = out_dir;
  config.workers = threads;
  config.batch_positions = batch_from_budget(ram_budget, batch_size, true);
  config.keep_all = !prune;
  ProbDB db = solve_prob(config);
  FixedProb bound = db.start_bound();
  std::cout << "layers " << db.manifest.layers.size() << ", max sum " << db.manifest.max_sum
            << ", elapsed " << db.manifest.elapsed_seconds << "s\n";
  std::cout << "proved lower bound on the win probability: " << bound.decimal() << " (raw "
            << bound.raw << " / 2^32)\n";
  std::cout << "RESULT bound=" << bound.decimal() << "\n";
  return 0;
}

int cmd_query(const std::string& db_dir, const std::string& board_text,
              const std::string& turn_name) {
  Board board = parse_board(board_text);
  Turn turn = turn_name == "computer" ? Turn::Computer : Turn::Player;
  RunManifest man = RunManifest::load(db_dir);
  if (!man.complete) throw std::runtime_error("run in " + db_dir + " is not complete");
  if (man.mode == "reach") {
    ReachDB db = open_reach(db_dir);
    bool win = query_reach(db, board, turn);
    std::cout << (win ? "WIN" : "LOSS") << "\n";
    std::cout << "RESULT " << (win ? "win" : "loss") << "\n";
  } else {
    ProbDB db = open_prob(db_dir);
    FixedProb bound = query_prob(db, board, turn);
    std::cout << "lower bound " << bound.decimal() << " (raw " << bound.raw << ")\n";
    std::cout << "RESULT bound=" << bound.decimal() << "\n";
  }
  return 0;
}

int cmd_starts(const std::string& db_dir, const std::string& out_file,
               const std::string& format) {
  ReachDB db = open_reach(db_dir);
  StartReport report = evaluate_two_tile_starts(db);
  const char sep = sep_for(format);
  std::ostringstream os;
  os << "board" << sep << "result\n";
  for (const auto& e : report.entries)
    os << render_board(e.board) << sep << (e.win ? "win" : "loss") << "\n";
  if (!out_file.empty()) write_or_print(out_file, os.str());
  else std::cout << os.str();
  std::cout << report.wins << " of " << report.total() << " two-tile starts are winnable\n";
  std::cout << "RESULT wins=" << report.wins << "/" << report.total() << "\n";
  return 0;
}

int cmd_max_tile(int rows, int cols, std::string work_dir, int threads, uint64_t batch_size,
                 uint64_t state_budget) {
  if (work_dir.empty())
    work_dir = (fs::temp_directory_path() /
                ("maxtile_" + std::to_string(rows) + "x" + std::to_string(cols)))
                   .string();
  MaxTileResult r = max_guaranteed_tile(rows, cols, work_dir, batch_size, threads, state_budget);
  std::cout << r.tile << "\n";
  if (r.exact)
    std::cout << "guaranteed: " << r.tile << "; " << r.first_loss << " is not guaranteed\n";
  else
    std::cout << "guaranteed at least " << r.tile << " (ladder stopped on the state budget)\n";
  std::cout << "RESULT tile=" << r.tile << "\n";
  return 0;
}

int cmd_verify_lemma(long playouts, int depth, uint64_t seed, long goal, int threads,
                     const std::string& mutation, bool four_tile_reading,
                     const std::string& out_file, const std::string& format) {
  LemmaCheckConfig config;
  config.goal_exp = tile_to_exp(goal);
  config.random_playouts = playouts;
  config.exhaustive_depth = depth;
  config.seed = seed;
  config.workers = threads;
  config.options.count_128_as_principal = !four_tile_reading;
  if (mutation == "skip-opening") config.mutation = PolicyMutation::SkipOpeningLeft;
  else if (mutation == "avoid-goal") config.mutation = PolicyMutation::AvoidGoal;
  else if (mutation == "invert-oscillation") config.mutation = PolicyMutation::InvertOscillation;
  else if (mutation != "none") throw std::runtime_error("unknown mutation " + mutation);

  LemmaReport report = check_lemma(config);
  std::cout << report.text();
  if (!out_file.empty()) {
    std::string csv = report.csv();
    if (format == "tsv")
      for (auto& c : csv)
        if (c == ',') c = '\t';
    write_or_print(out_file, csv);
  }
  std::cout << "RESULT " << (report.passed() ? "pass" : "fail") << "\n";
  return 0;
}

int cmd_emit_tables(const std::string& db_dir, const std::string& out_dir,
                    const std::string& format) {
  const char sep = sep_for(format);
  const char* ext = format == "tsv" ? ".tsv" : ".csv";
  std::ostringstream reach_rows, prob_rows, layer_rows;
  int found = 0;
  for (const auto& entry : fs::recursive_directory_iterator(db_dir)) {
    if (entry.path().filename() != "manifest.json") continue;
    RunManifest man = RunManifest::load(entry.path().parent_path());
    if (!man.complete) continue;
    ++found;
    std::string run = fs::relative(entry.path().parent_path(), db_dir).string();
    if (man.mode == "reach") {
      const auto* m = std::get_if<MergeGoal>(&man.goal);
      reach_rows << man.rows << sep << man.cols << sep
                 << (m ? std::to_string(1L << m->goal_exp) : std::string("config")) << sep
                 << (man.win ? "win" : "loss") << "\n";
    } else {
      const auto* m = std::get_if<MergeGoal>(&man.goal);
      FixedProb bound{man.bound_raw};
      prob_rows << man.rows << sep << man.cols << sep
                << (m ? std::to_string(1L << m->goal_exp) : std::string("config")) << sep
                << man.bound_raw << sep << bound.decimal() << "\n";
    }
    for (const auto& l : man.layers)
      if (l.turn == Turn::Player)
        layer_rows << run << sep << l.sum << sep << l.positions << "\n";
  }
  if (!found)
    throw std::runtime_error("no completed runs under " + db_dir +
                             "; expected subdirectories with manifest.json and layer files");
  fs::create_directories(out_dir);
  auto emit = [&](const char* name, const std::string& header, const std::string& body) {
    if (body.empty()) return;
    std::ofstream f(fs::path(out_dir) / (name + std::string(ext)), std::ios::trunc);
    std::string h = header;
    for (auto& c : h)
      if (c == ',') c = sep;
    f << h << "\n" << body;
  };
  emit("guaranteed", "rows,cols,T,result", reach_rows.str());
  emit("bounds", "rows,cols,goal,bound_raw,bound_decimal_truncated", prob_rows.str());
  emit("layers", "run,sum,count", layer_rows.str());
  std::cout << "emitted tables for " << found << " runs into " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exhaustive solver and prover for generalized 2048 boards"};
  app.require_subcommand(1);

  int rows = 0, cols = 0, threads = 1, depth = 6;
  GoalFlags goal;
  std::string caps_file, goal_config_file, out, db, board, turn = "player", format = "csv";
  std::string mutation = "none";
  uint64_t batch_size = 0, ram_budget = 0, seed = 1, state_budget = 0;
  long playouts = 10000, goal_tile_lemma = 2048;
  bool prune = false, four_tile = false;

  auto add_dims = [&](CLI::App* c) {
    c->add_option("--rows", rows)->required();
    c->add_option("--cols", cols)->required();
  };
  auto add_goal = [&](CLI::App* c, bool required) {
    auto* g = c->add_option("--goal", goal.goal_tile, "goal tile value");
    auto* gc = c->add_option("--goal-config", goal.goal_config_file,
                             "file with required-tile lines: r c value");
    g->excludes(gc);
    if (required) {
      // enforced at resolve time so the pair stays mutually optional
    }
  };
  auto add_solve_flags = [&](CLI::App* c) {
    c->add_option("--caps", caps_file, "per-cell cap file");
    c->add_option("--out", out)->required();
    c->add_option("--threads", threads);
    c->add_option("--batch-size", batch_size, "positions per processing batch");
    c->add_option("--ram-budget", ram_budget, "bytes; picks the batch size for three resident layers");
    c->add_flag("--prune", prune, "delete consumed layers instead of keeping them for queries");
  };

  auto* census = app.add_subcommand("census", "layer sizes for a board and cap set");
  add_dims(census);
  add_goal(census, true);
  census->add_option("--caps", caps_file);
  census->add_option("--out", out);
  census->add_option("--format", format)->check(CLI::IsMember({"csv", "tsv"}));

  auto* solve = app.add_subcommand("solve", "run the layered solver");
  solve->require_subcommand(1);
  auto* reach = solve->add_subcommand("reach", "guaranteed reachability vs adversarial spawner");
  add_dims(reach);
  add_goal(reach, true);
  add_solve_flags(reach);
  auto* prob = solve->add_subcommand("prob", "proved win-probability lower bound vs random spawner");
  add_dims(prob);
  add_goal(prob, true);
  add_solve_flags(prob);

  auto* query = app.add_subcommand("query", "look up one position in a solved run");
  query->add_option("--db", db)->required();
  query->add_option("--board", board)->required();
  query->add_option("--turn", turn)->check(CLI::IsMember({"player", "computer"}));

  auto* starts = app.add_subcommand("starts", "evaluate all two-tile starting positions");
  starts->add_option("--db", db)->required();
  starts->add_option("--out", out);
  starts->add_option("--format", format)->check(CLI::IsMember({"csv", "tsv"}));

  auto* maxtile = app.add_subcommand("max-tile", "largest guaranteed tile for a board size");
  add_dims(maxtile);
  maxtile->add_option("--out", out, "working directory for the ladder runs");
  maxtile->add_option("--threads", threads);
  maxtile->add_option("--batch-size", batch_size);
  maxtile->add_option("--state-budget", state_budget, "per-turn position cap for a ladder step");

  auto* lemma = app.add_subcommand("verify-lemma", "check the five-big-tile strategy");
  lemma->add_option("--playouts", playouts);
  lemma->add_option("--depth", depth, "exhaustive adversary depth in spawn plies");
  lemma->add_option("--seed", seed);
  lemma->add_option("--goal", goal_tile_lemma);
  lemma->add_option("--threads", threads);
  lemma->add_option("--mutation", mutation)
      ->check(CLI::IsMember({"none", "skip-opening", "avoid-goal", "invert-oscillation"}));
  lemma->add_flag("--four-tile-reading", four_tile,
                  "treat only the 1024/512/256/256 as principal tiles");
  lemma->add_option("--out", out, "write the report as CSV");
  lemma->add_option("--format", format)->check(CLI::IsMember({"csv", "tsv"}));

  auto* emit = app.add_subcommand("emit-tables", "collect run results into paper-style tables");
  emit->add_option("--db", db)->required();
  emit->add_option("--out", out)->required();
  emit->add_option("--format", format)->check(CLI::IsMember({"csv", "tsv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (census->parsed()) return cmd_census(rows, cols, goal, caps_file, out, format);
    if (reach->parsed())
      return cmd_solve_reach(rows, cols, goal, caps_file, out, threads, batch_size, ram_budget,
                             prune);
    if (prob->parsed())
      return cmd_solve_prob(rows, cols, goal, caps_file, out, threads, batch_size, ram_budget,
                            prune);
    if (query->parsed()) return cmd_query(db, board, turn);
    if (starts->parsed()) return cmd_starts(db, out, format);
    if (maxtile->parsed())
      return cmd_max_tile(rows, cols, out, threads, batch_size, state_budget);
    if (lemma->parsed())
      return cmd_verify_lemma(playouts, depth, seed, goal_tile_lemma, threads, mutation,
                              four_tile, out, format);
    if (emit->parsed()) return cmd_emit_tables(db, out, format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
