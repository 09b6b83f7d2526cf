#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "tfel/board.hpp"
#include "tfel/count_table.hpp"
#include "tfel/fixed_prob.hpp"
#include "tfel/lemma.hpp"
#include "tfel/prob_solver.hpp"
#include "tfel/reach_solver.hpp"

namespace py = pybind11;
using namespace tfel;

namespace {

Turn parse_turn(const std::string& s) {
  if (s == "player") return Turn::Player;
  if (s == "computer") return Turn::Computer;
  throw std::invalid_argument("turn must be 'player' or 'computer'");
}

GoalPredicate make_goal(long goal_tile, const std::string& goal_config_text) {
  if (!goal_config_text.empty()) return parse_goal_config_text(goal_config_text);
  return MergeGoal{uint8_t(tile_to_exp(goal_tile))};
}

Caps make_caps(int rows, int cols, long goal_tile, const std::string& caps_text) {
  if (!caps_text.empty()) return parse_caps_text(caps_text);
  return Caps::uniform(rows, cols, std::max(1, tile_to_exp(goal_tile) - 1));
}

}  // namespace

PYBIND11_MODULE(_tfel, m) {
  m.doc() = "Exhaustive solver for generalized 2048: guaranteed reachability "
            "against an adversarial spawner and proved win-probability lower "
            "bounds against the random spawner.";

  py::enum_<Direction>(m, "Direction")
      .value("LEFT", Direction::Left)
      .value("RIGHT", Direction::Right)
      .value("UP", Direction::Up)
      .value("DOWN", Direction::Down);

  py::class_<Board>(m, "Board")
      .def(py::init<int, int>(), py::arg("rows"), py::arg("cols"))
      .def_static("parse", &parse_board, py::arg("text"))
      .def_readonly("rows", &Board::rows)
      .def_readonly("cols", &Board::cols)
      .def("render", &render_board)
      .def("__repr__", [](const Board& b) { return "Board('" + render_board(b) + "')"; })
      .def("__eq__", [](const Board& a, const Board& b) { return a == b; })
      .def("sum", &board_sum)
      .def("count_empty", &count_empty)
      .def("tile", [](const Board& b, int r, int c) {
        uint8_t e = b.at(r, c);
        return e ? (1L << e) : 0L;
      }, py::arg("r"), py::arg("c"));

  m.def("swipe", [](const Board& b, Direction d) -> std::optional<Board> {
    return swipe(b, d);
  }, py::arg("board"), py::arg("direction"),
     "Board after the move, or None when the swipe changes nothing.");
  m.def("legal_moves", &legal_moves, py::arg("board"));
  m.def("spawn", &spawn, py::arg("board"), py::arg("r"), py::arg("c"), py::arg("value"));
  m.def("goal_merge_reached", &goal_merge_reached, py::arg("board"), py::arg("goal_exp"));

  py::class_<CountTable>(m, "CountTable")
      .def_static("build", [](int rows, int cols, long cap_tile, const std::string& caps_text) {
        Caps caps = caps_text.empty() ? Caps::uniform(rows, cols, tile_to_exp(cap_tile))
                                      : parse_caps_text(caps_text);
        return CountTable::build(caps);
      }, py::arg("rows") = 0, py::arg("cols") = 0, py::arg("cap_tile") = 0,
         py::arg("caps_text") = std::string())
      .def("layer_size", &CountTable::layer_size, py::arg("sum"))
      .def("total_positions", &CountTable::total_positions)
      .def("max_sum", &CountTable::max_sum)
      .def("rank", [](const CountTable& t, const Board& b) {
        LayerIndex i = t.rank(b);
        return py::make_tuple(i.sum, i.index);
      }, py::arg("board"))
      .def("unrank", &CountTable::unrank, py::arg("sum"), py::arg("index"))
      .def("census", &CountTable::census);

  m.def("solve_reach",
        [](int rows, int cols, long goal, const std::string& dir, const std::string& caps_text,
           const std::string& goal_config_text, int workers, uint64_t batch_positions) {
          ReachConfig cfg;
          cfg.rows = rows;
          cfg.cols = cols;
          cfg.goal = make_goal(goal, goal_config_text);
          cfg.caps = make_caps(rows, cols, goal, caps_text);
          cfg.dir = dir;
          cfg.workers = workers;
          cfg.batch_positions = batch_positions;
          return solve_reach(cfg).start_wins();
        },
        py::arg("rows"), py::arg("cols"), py::arg("goal"), py::arg("dir"),
        py::arg("caps_text") = std::string(), py::arg("goal_config_text") = std::string(),
        py::arg("workers") = 1, py::arg("batch_positions") = 0,
        "Solve guaranteed reachability; returns whether the empty start wins.");

  m.def("query_reach",
        [](const std::string& dir, const Board& b, const std::string& turn) {
          ReachDB db = open_reach(dir);
          return query_reach(db, b, parse_turn(turn));
        },
        py::arg("dir"), py::arg("board"), py::arg("turn") = "player");

  m.def("solve_prob",
        [](int rows, int cols, long goal, const std::string& dir, const std::string& caps_text,
           const std::string& goal_config_text, int workers, uint64_t batch_positions) {
          ProbConfig cfg;
          cfg.rows = rows;
          cfg.cols = cols;
          cfg.goal = make_goal(goal, goal_config_text);
          cfg.caps = make_caps(rows, cols, goal, caps_text);
          cfg.dir = dir;
          cfg.workers = workers;
          cfg.batch_positions = batch_positions;
          FixedProb bound = solve_prob(cfg).start_bound();
          return py::make_tuple(bound.raw, bound.decimal());
        },
        py::arg("rows"), py::arg("cols"), py::arg("goal"), py::arg("dir"),
        py::arg("caps_text") = std::string(), py::arg("goal_config_text") = std::string(),
        py::arg("workers") = 1, py::arg("batch_positions") = 0,
        "Solve the win-probability lower bound; returns (raw, truncated decimal) "
        "with denominator 2^32.");

  m.def("query_prob",
        [](const std::string& dir, const Board& b, const std::string& turn) {
          ProbDB db = open_prob(dir);
          FixedProb p = query_prob(db, b, parse_turn(turn));
          return py::make_tuple(p.raw, p.decimal());
        },
        py::arg("dir"), py::arg("board"), py::arg("turn") = "player");

  m.def("check_lemma",
        [](long playouts, int depth, uint64_t seed, int workers, const std::string& mutation) {
          LemmaCheckConfig cfg;
          cfg.random_playouts = playouts;
          cfg.exhaustive_depth = depth;
          cfg.seed = seed;
          cfg.workers = workers;
          if (mutation == "skip-opening") cfg.mutation = PolicyMutation::SkipOpeningLeft;
          else if (mutation == "avoid-goal") cfg.mutation = PolicyMutation::AvoidGoal;
          else if (mutation == "invert-oscillation") cfg.mutation = PolicyMutation::InvertOscillation;
          else if (!mutation.empty() && mutation != "none")
            throw std::invalid_argument("unknown mutation: " + mutation);
          LemmaReport rep = check_lemma(cfg);
          py::dict out;
          out["playouts"] = rep.playouts;
          out["wins"] = rep.wins;
          out["max_game_length"] = rep.max_game_length;
          out["exhaustive_depth"] = rep.exhaustive_depth;
          out["exhaustive_leaves"] = rep.exhaustive_leaves;
          out["case3_iterations"] = rep.case3_iterations;
          out["progress_violations"] = rep.progress_violations;
          out["counterexamples"] = rep.counterexamples;
          out["passed"] = rep.passed();
          return out;
        },
        py::arg("playouts") = 10000, py::arg("depth") = 6, py::arg("seed") = 1,
        py::arg("workers") = 1, py::arg("mutation") = std::string(),
        "Check the five-big-tile strategy empirically.");
}
