#include "tfel/manifest.hpp"

#include <fstream>

#include "json.hpp"

namespace tfel {

using nlohmann::json;

namespace {

json goal_to_json(const GoalPredicate& goal) {
  if (const auto* m = std::get_if<MergeGoal>(&goal))
    return json{{"kind", "merge"}, {"tile", 1L << m->goal_exp}};
  const auto& cg = std::get<ConfigGoal>(goal);
  json tiles = json::array();
  for (const auto& t : cg.tiles)
    tiles.push_back(json::array({t.r + 1, t.c + 1, 1L << t.exp}));
  return json{{"kind", "config"}, {"tiles", tiles}};
}

GoalPredicate goal_from_json(const json& j) {
  if (j.at("kind") == "merge")
    return MergeGoal{static_cast<uint8_t>(tile_to_exp(j.at("tile").get<long>()))};
  ConfigGoal cg;
  for (const auto& t : j.at("tiles"))
    cg.tiles.push_back({static_cast<uint8_t>(t[0].get<int>() - 1),
                        static_cast<uint8_t>(t[1].get<int>() - 1),
                        static_cast<uint8_t>(tile_to_exp(t[2].get<long>()))});
  return cg;
}

json caps_to_json(const Caps& caps) {
  json rows = json::array();
  for (int r = 0; r < caps.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < caps.cols; ++c) row.push_back(1L << caps.at(r, c));
    rows.push_back(row);
  }
  return rows;
}

Caps caps_from_json(const json& j) {
  Caps caps(static_cast<int>(j.size()), static_cast<int>(j.at(0).size()));
  for (int r = 0; r < caps.rows; ++r)
    for (int c = 0; c < caps.cols; ++c)
      caps.at(r, c) = static_cast<uint8_t>(tile_to_exp(j[r][c].get<long>()));
  return caps;
}

}  // namespace

RunManifest::LayerStatus* RunManifest::find_layer(int sum, Turn turn) {
  for (auto& l : layers)
    if (l.sum == sum && l.turn == turn) return &l;
  return nullptr;
}

void RunManifest::save(const std::filesystem::path& run_dir) const {
  json j;
  j["format_version"] = format_version;
  j["mode"] = mode;
  j["rows"] = rows;
  j["cols"] = cols;
  j["goal"] = goal_to_json(goal);
  j["caps"] = caps_to_json(caps);
  j["batch_positions"] = batch_positions;
  j["workers"] = workers;
  j["max_sum"] = max_sum;
  json ls = json::array();
  for (const auto& l : layers)
    ls.push_back(json{{"sum", l.sum},
                      {"turn", l.turn == Turn::Player ? "P" : "C"},
                      {"positions", l.positions},
                      {"done", l.done},
                      {"seconds", l.seconds}});
  j["layers"] = ls;
  if (has_verdict) j["verdict"] = win ? "win" : "loss";
  if (has_bound) j["bound_raw"] = bound_raw;
  j["peak_resident_layers"] = peak_resident_layers;
  j["elapsed_seconds"] = elapsed_seconds;
  j["complete"] = complete;

  auto tmp = run_dir / "manifest.json.tmp";
  {
    std::ofstream out(tmp);
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("cannot write manifest in " + run_dir.string());
  }
  std::filesystem::rename(tmp, run_dir / "manifest.json");
}

RunManifest RunManifest::load(const std::filesystem::path& run_dir) {
  std::ifstream in(run_dir / "manifest.json");
  if (!in) throw std::runtime_error("no manifest.json in " + run_dir.string());
  json j;
  in >> j;
  RunManifest m;
  m.format_version = j.at("format_version");
  m.mode = j.at("mode");
  m.rows = j.at("rows");
  m.cols = j.at("cols");
  m.goal = goal_from_json(j.at("goal"));
  m.caps = caps_from_json(j.at("caps"));
  m.batch_positions = j.at("batch_positions");
  m.workers = j.at("workers");
  m.max_sum = j.at("max_sum");
  for (const auto& l : j.at("layers"))
    m.layers.push_back({l.at("sum"), l.at("turn") == "C" ? Turn::Computer : Turn::Player,
                        l.at("positions"), l.at("done"), l.at("seconds")});
  if (j.contains("verdict")) {
    m.has_verdict = true;
    m.win = j["verdict"] == "win";
  }
  if (j.contains("bound_raw")) {
    m.has_bound = true;
    m.bound_raw = j["bound_raw"];
  }
  m.peak_resident_layers = j.value("peak_resident_layers", 0);
  m.elapsed_seconds = j.value("elapsed_seconds", 0.0);
  m.complete = j.value("complete", false);
  return m;
}

bool RunManifest::exists(const std::filesystem::path& run_dir) {
  return std::filesystem::exists(run_dir / "manifest.json");
}

}  // namespace tfel
