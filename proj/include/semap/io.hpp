#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <tuple>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "semap/catalog.hpp"
#include "semap/expansion.hpp"
#include "semap/grid.hpp"
#include "semap/planner.hpp"
#include "semap/simulator.hpp"

namespace semap {

using json = nlohmann::json;

/// Writes content to a temporary sibling and renames it into place, so an
/// aborted run never leaves a partial file.
inline void atomic_write(const std::filesystem::path& path,
                         const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Sensor log: one JSON header line, then one JSON record per line.

struct SensorLogHeader {
  int version = 1;
  std::vector<std::string> catalog;
  int feature_dim = 0;  // 0 = no features in this log
  ScanParams scan;
  json world_meta;  // free-form, round-tripped untouched
};

inline json scan_params_to_json(const ScanParams& p) {
  return {{"angle_min", p.angle_min},
          {"angle_increment", p.angle_increment},
          {"beam_count", p.beam_count},
          {"range_max", p.range_max}};
}

inline ScanParams scan_params_from_json(const json& j) {
  ScanParams p;
  p.angle_min = j.at("angle_min").get<double>();
  p.angle_increment = j.at("angle_increment").get<double>();
  p.beam_count = j.at("beam_count").get<int>();
  p.range_max = j.at("range_max").get<double>();
  return p;
}

inline std::string serialize_log(const SensorLogHeader& header,
                                 const std::vector<FrameRecord>& records) {
  std::ostringstream out;
  json h = {{"format", "semap-log"},
            {"version", header.version},
            {"catalog", header.catalog},
            {"feature_dim", header.feature_dim},
            {"scan", scan_params_to_json(header.scan)}};
  if (!header.world_meta.is_null()) h["world"] = header.world_meta;
  out << h.dump() << '\n';
  for (const FrameRecord& r : records) {
    json line = {{"t", r.t},
                 {"pose", {r.pose.x, r.pose.y, r.pose.theta}},
                 {"ranges", r.ranges},
                 {"likelihood", r.base_likelihood}};
    if (r.feature) line["feature"] = *r.feature;
    if (r.true_label >= 0) line["true_label"] = r.true_label;
    out << line.dump() << '\n';
  }
  return out.str();
}

inline void write_log(const std::filesystem::path& path,
                      const SensorLogHeader& header,
                      const std::vector<FrameRecord>& records) {
  atomic_write(path, serialize_log(header, records));
}

inline std::pair<SensorLogHeader, std::vector<FrameRecord>> parse_log(
    std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("sensor log: missing header line");
  json h;
  try {
    h = json::parse(line);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("sensor log line 1: bad header: ") +
                             e.what());
  }
  if (h.value("format", "") != "semap-log")
    throw std::runtime_error("sensor log: missing or wrong format field");

  SensorLogHeader header;
  header.version = h.at("version").get<int>();
  header.catalog = h.at("catalog").get<std::vector<std::string>>();
  header.feature_dim = h.value("feature_dim", 0);
  header.scan = scan_params_from_json(h.at("scan"));
  if (h.contains("world")) header.world_meta = h["world"];

  std::vector<FrameRecord> records;
  std::size_t line_no = 1;
  double last_t = -std::numeric_limits<double>::infinity();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error("sensor log line " + std::to_string(line_no) +
                               ": malformed record: " + e.what());
    }
    FrameRecord r;
    try {
      r.t = j.at("t").get<double>();
      auto pose = j.at("pose").get<std::vector<double>>();
      if (pose.size() != 3) throw std::runtime_error("pose needs 3 values");
      r.pose = {pose[0], pose[1], pose[2]};
      r.ranges = j.at("ranges").get<std::vector<double>>();
      r.base_likelihood = j.at("likelihood").get<Vec>();
      if (j.contains("feature")) r.feature = j["feature"].get<Vec>();
      if (j.contains("true_label")) r.true_label = j["true_label"].get<int>();
    } catch (const std::exception& e) {
      throw std::runtime_error("sensor log line " + std::to_string(line_no) +
                               ": " + e.what());
    }
    if (r.base_likelihood.size() != header.catalog.size())
      throw std::runtime_error("sensor log line " + std::to_string(line_no) +
                               ": likelihood length != catalog size");
    if (r.feature && static_cast<int>(r.feature->size()) != header.feature_dim)
      throw std::runtime_error("sensor log line " + std::to_string(line_no) +
                               ": feature length != feature_dim");
    if (!(r.t > last_t))
      throw std::runtime_error("sensor log line " + std::to_string(line_no) +
                               ": non-increasing timestamp");
    last_t = r.t;
    records.push_back(std::move(r));
  }
  return {std::move(header), std::move(records)};
}

inline std::pair<SensorLogHeader, std::vector<FrameRecord>> read_log(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_log(in);
}

// ---------------------------------------------------------------------------
// Map dump: single versioned JSON document, bit-exact round trip.

inline std::string serialize_map(const SemanticGridMap& map,
                                 const std::vector<std::string>& catalog) {
  const GridGeometry& g = map.geometry();
  json j = {{"format", "semap-map"},
            {"version", 1},
            {"geometry",
             {{"resolution", g.resolution},
              {"width", g.width},
              {"height", g.height},
              {"origin", {g.origin_x, g.origin_y}}}},
            {"catalog", catalog},
            {"clamp",
             {{"l_min", map.clamp_bounds().l_min},
              {"l_max", map.clamp_bounds().l_max}}},
            {"cell_prior", map.cell_prior()},
            {"occupancy", map.occupancy()},
            {"observed", map.observed()}};
  json layers = json::array();
  for (std::size_t c = 0; c < map.layer_count(); ++c) layers.push_back(map.layer(c));
  j["layers"] = std::move(layers);
  return j.dump();
}

inline void write_map(const std::filesystem::path& path,
                      const SemanticGridMap& map,
                      const std::vector<std::string>& catalog) {
  atomic_write(path, serialize_map(map, catalog));
}

inline std::pair<SemanticGridMap, std::vector<std::string>> parse_map(
    const std::string& text) {
  json j = json::parse(text);
  if (j.value("format", "") != "semap-map")
    throw std::runtime_error("map dump: missing or wrong format field");
  const json& jg = j.at("geometry");
  GridGeometry g;
  g.resolution = jg.at("resolution").get<double>();
  g.width = jg.at("width").get<int>();
  g.height = jg.at("height").get<int>();
  g.origin_x = jg.at("origin")[0].get<double>();
  g.origin_y = jg.at("origin")[1].get<double>();
  ClampBounds clamp{j.at("clamp").at("l_min").get<double>(),
                    j.at("clamp").at("l_max").get<double>()};
  auto catalog = j.at("catalog").get<std::vector<std::string>>();
  Vec cell_prior = j.at("cell_prior").get<Vec>();
  SemanticGridMap map(g, cell_prior.size(), clamp, cell_prior);
  std::vector<Vec> layers;
  for (const json& l : j.at("layers")) layers.push_back(l.get<Vec>());
  map.restore(j.at("occupancy").get<Vec>(), std::move(layers),
              j.at("observed").get<std::vector<uint8_t>>());
  return {std::move(map), std::move(catalog)};
}

inline std::pair<SemanticGridMap, std::vector<std::string>> read_map(
    const std::filesystem::path& path) {
  return parse_map(read_file(path));
}

// ---------------------------------------------------------------------------
// Winning-label render: portable pixmap plus a color legend sidecar.

struct Rgb {
  int r, g, b;
};

inline Rgb render_color(int label) {
  static const Rgb kPalette[] = {
      {230, 25, 75},  {60, 180, 75},   {255, 225, 25}, {0, 130, 200},
      {245, 130, 48}, {145, 30, 180},  {70, 240, 240}, {240, 50, 230},
      {210, 245, 60}, {250, 190, 212}, {0, 128, 128},  {220, 190, 255},
      {170, 110, 40}, {255, 250, 200}, {128, 0, 0},    {170, 255, 195}};
  if (label == SemanticGridMap::kOccupied) return {0, 0, 0};
  if (label == SemanticGridMap::kUnknown) return {128, 128, 128};
  return kPalette[static_cast<std::size_t>(label) %
                  (sizeof(kPalette) / sizeof(kPalette[0]))];
}

inline std::string render_ppm(const std::vector<int>& labels,
                              const GridGeometry& geom) {
  std::ostringstream out;
  out << "P3\n" << geom.width << ' ' << geom.height << "\n255\n";
  // Row 0 at the bottom of the image.
  for (int cy = geom.height - 1; cy >= 0; --cy) {
    for (int cx = 0; cx < geom.width; ++cx) {
      Rgb c = render_color(labels[static_cast<std::size_t>(geom.index(cx, cy))]);
      out << c.r << ' ' << c.g << ' ' << c.b << (cx + 1 == geom.width ? '\n' : ' ');
    }
  }
  return out.str();
}

inline std::string render_legend(const std::vector<std::string>& catalog) {
  std::ostringstream out;
  out << "# color_r color_g color_b label\n";
  Rgb occ = render_color(SemanticGridMap::kOccupied);
  Rgb unk = render_color(SemanticGridMap::kUnknown);
  out << occ.r << ' ' << occ.g << ' ' << occ.b << " occupied\n";
  out << unk.r << ' ' << unk.g << ' ' << unk.b << " unknown\n";
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    Rgb c = render_color(static_cast<int>(i));
    out << c.r << ' ' << c.g << ' ' << c.b << ' ' << catalog[i] << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Belief trace: one JSON line per frame.

struct TraceEntry {
  double t = 0.0;
  int ml = -1;
  int map = -1;
  Vec posterior;
  int true_label = -1;
};

inline std::string serialize_trace(const std::vector<std::string>& catalog,
                                   const std::vector<TraceEntry>& trace) {
  std::ostringstream out;
  json h = {{"format", "semap-trace"}, {"version", 1}, {"catalog", catalog}};
  out << h.dump() << '\n';
  for (const TraceEntry& e : trace) {
    json line = {{"t", e.t}, {"ml", e.ml}, {"map", e.map},
                 {"posterior", e.posterior}};
    if (e.true_label >= 0) line["true_label"] = e.true_label;
    out << line.dump() << '\n';
  }
  return out.str();
}

inline std::pair<std::vector<std::string>, std::vector<TraceEntry>> parse_trace(
    const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace: empty file");
  json h = json::parse(line);
  if (h.value("format", "") != "semap-trace")
    throw std::runtime_error("trace: missing or wrong format field");
  auto catalog = h.at("catalog").get<std::vector<std::string>>();
  std::vector<TraceEntry> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    TraceEntry e;
    e.t = j.at("t").get<double>();
    e.ml = j.at("ml").get<int>();
    e.map = j.at("map").get<int>();
    e.posterior = j.at("posterior").get<Vec>();
    if (j.contains("true_label")) e.true_label = j["true_label"].get<int>();
    trace.push_back(std::move(e));
  }
  return {std::move(catalog), std::move(trace)};
}

// ---------------------------------------------------------------------------
// Cost table file.

inline std::string serialize_cost_table(const CostTable& table) {
  json labels = json::object();
  for (const auto& [name, c] : table.label_cost) labels[name] = c;
  json j = {{"format", "semap-costs"},
            {"version", 1},
            {"labels", labels},
            {"unknown_cost", table.unknown_cost}};
  if (table.default_cost >= 1.0) j["default_cost"] = table.default_cost;
  return j.dump();
}

inline CostTable parse_cost_table(const std::string& text) {
  json j = json::parse(text);
  if (j.value("format", "") != "semap-costs")
    throw std::runtime_error("cost table: missing or wrong format field");
  CostTable table;
  for (auto& [name, c] : j.at("labels").items())
    table.label_cost[name] = c.get<double>();
  table.unknown_cost = j.value("unknown_cost", 1.0);
  table.default_cost = j.value("default_cost", -1.0);
  table.validate();
  return table;
}

inline CostTable read_cost_table(const std::filesystem::path& path) {
  return parse_cost_table(read_file(path));
}

// ---------------------------------------------------------------------------
// Object prior counts: whitespace-separated (object, place, count) lines.

inline std::vector<std::tuple<std::string, std::string, double>>
parse_prior_counts(std::istream& in) {
  std::vector<std::tuple<std::string, std::string, double>> triples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string obj, place;
    double count;
    if (!(ss >> obj)) continue;  // blank or comment-only line
    if (!(ss >> place >> count))
      throw std::runtime_error("prior counts line " + std::to_string(line_no) +
                               ": expected 'object place count'");
    triples.emplace_back(obj, place, count);
  }
  return triples;
}

// ---------------------------------------------------------------------------
// Feature/training file: "dim <d>" header, then "pos|neg v1 ... vd" rows.

inline TrainingSet parse_training_set(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("training set: empty file");
  std::istringstream hs(line);
  std::string kw;
  std::size_t dim = 0;
  if (!(hs >> kw >> dim) || kw != "dim" || dim == 0)
    throw std::runtime_error("training set: first line must be 'dim <d>'");
  TrainingSet set;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    Vec row;
    row.reserve(dim);
    double v;
    while (ss >> v) row.push_back(v);
    if (row.size() != dim)
      throw std::runtime_error("training set line " + std::to_string(line_no) +
                               ": expected " + std::to_string(dim) + " values");
    if (tag == "pos")
      set.positives.push_back(std::move(row));
    else if (tag == "neg")
      set.negatives.push_back(std::move(row));
    else
      throw std::runtime_error("training set line " + std::to_string(line_no) +
                               ": tag must be pos or neg");
  }
  return set;
}

// ---------------------------------------------------------------------------
// One-vs-all model file.

inline std::string serialize_model(const OneVsAllModel& model,
                                   const std::string& target_name) {
  json j = {{"format", "semap-ova"},
            {"version", 1},
            {"target_label", target_name},
            {"target_index", model.target_label},
            {"bias", model.bias},
            {"weights", model.weights},
            {"n_positive", model.n_positive},
            {"n_negative", model.n_negative}};
  return j.dump();
}

inline std::pair<OneVsAllModel, std::string> parse_model(const std::string& text) {
  json j = json::parse(text);
  if (j.value("format", "") != "semap-ova")
    throw std::runtime_error("model file: missing or wrong format field");
  OneVsAllModel m;
  m.target_label = j.at("target_index").get<std::size_t>();
  m.bias = j.at("bias").get<double>();
  m.weights = j.at("weights").get<Vec>();
  m.n_positive = j.value("n_positive", 0);
  m.n_negative = j.value("n_negative", 0);
  return {std::move(m), j.at("target_label").get<std::string>()};
}

}  // namespace semap
