#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "semap/catalog.hpp"
#include "semap/expansion.hpp"
#include "semap/filter.hpp"
#include "semap/grid.hpp"
#include "semap/io.hpp"
#include "semap/simulator.hpp"

namespace semap {

/// Everything one run needs: vocabulary, filter and map settings, and
/// (for simulation) the world, trajectory, and noise model.
struct RunConfig {
  std::vector<std::string> catalog;
  std::set<std::string> whitelist;             // empty = all labels allowed
  std::map<std::string, double> prior_weights;  // uniform when absent

  FilterConfig filter;
  GridGeometry grid;
  ClampBounds clamp;
  double cell_prior = 0.5;
  SensorGate gate;
  ScanParams scan;
  double min_confidence = 0.6;

  // Simulation-only section.
  std::vector<RegionSpec> regions;
  std::vector<RectSpec> walls;
  std::string default_label;
  std::vector<std::pair<double, double>> waypoints;
  double speed = 0.5;
  double dt = 0.1;
  ClassifierNoiseModel noise;
  int feature_dim = 0;  // 0 = no synthetic features
  std::uint64_t feature_seed = 0;

  ClassCatalog make_catalog() const { return ClassCatalog(catalog); }

  Vec make_prior(const ClassCatalog& cat) const {
    std::set<std::string> allowed = whitelist;
    if (allowed.empty())
      allowed.insert(cat.labels().begin(), cat.labels().end());
    return whitelist_prior(cat, allowed, prior_weights);
  }

  std::vector<std::size_t> whitelist_indices(const ClassCatalog& cat) const {
    std::vector<std::size_t> out;
    if (whitelist.empty()) {
      for (std::size_t i = 0; i < cat.size(); ++i) out.push_back(i);
    } else {
      for (std::size_t i = 0; i < cat.size(); ++i)
        if (whitelist.count(cat.name(i))) out.push_back(i);
    }
    return out;
  }
};

inline RunConfig parse_run_config(const json& j) {
  RunConfig c;
  c.catalog = j.at("catalog").get<std::vector<std::string>>();
  if (j.contains("whitelist"))
    for (const auto& name : j["whitelist"]) c.whitelist.insert(name.get<std::string>());
  if (j.contains("prior_weights"))
    for (auto& [name, w] : j["prior_weights"].items())
      c.prior_weights[name] = w.get<double>();

  if (j.contains("filter")) {
    const json& f = j["filter"];
    c.filter.forgetting_factor = f.value("forgetting_factor", 0.0);
    c.filter.epsilon_floor = f.value("epsilon_floor", 1e-12);
    std::string mode = f.value("prior_mode", "every_step");
    if (mode == "every_step")
      c.filter.prior_mode = PriorMode::kEveryStep;
    else if (mode == "at_init_only")
      c.filter.prior_mode = PriorMode::kAtInitOnly;
    else
      throw std::runtime_error("config: unknown prior_mode '" + mode + "'");
  }

  if (j.contains("grid")) {
    const json& g = j["grid"];
    c.grid.resolution = g.at("resolution").get<double>();
    c.grid.width = g.at("width").get<int>();
    c.grid.height = g.at("height").get<int>();
    if (g.contains("origin")) {
      c.grid.origin_x = g["origin"][0].get<double>();
      c.grid.origin_y = g["origin"][1].get<double>();
    }
  }
  if (j.contains("clamp")) {
    c.clamp.l_min = j["clamp"].value("l_min", -2.0);
    c.clamp.l_max = j["clamp"].value("l_max", 3.5);
  }
  c.cell_prior = j.value("cell_prior", 0.5);
  if (j.contains("gate")) {
    c.gate.camera_fov_half_angle = j["gate"].value("fov_half_angle", 0.7853981633974483);
    c.gate.semantic_range = j["gate"].value("semantic_range", 5.0);
  }
  if (j.contains("scan")) c.scan = scan_params_from_json(j["scan"]);
  c.min_confidence = j.value("min_confidence", 0.6);

  if (j.contains("world")) {
    const json& w = j["world"];
    c.default_label = w.at("default_label").get<std::string>();
    if (w.contains("regions"))
      for (const json& r : w["regions"]) {
        auto rect = r.at("rect").get<std::vector<double>>();
        if (rect.size() != 4)
          throw std::runtime_error("config: region rect needs 4 values");
        c.regions.push_back({{rect[0], rect[1], rect[2], rect[3]},
                             r.at("label").get<std::string>()});
      }
    if (w.contains("walls"))
      for (const json& r : w["walls"]) {
        auto rect = r.get<std::vector<double>>();
        if (rect.size() != 4)
          throw std::runtime_error("config: wall rect needs 4 values");
        c.walls.push_back({rect[0], rect[1], rect[2], rect[3]});
      }
    if (w.contains("waypoints"))
      for (const json& p : w["waypoints"])
        c.waypoints.emplace_back(p[0].get<double>(), p[1].get<double>());
    c.speed = w.value("speed", 0.5);
    c.dt = w.value("dt", 0.1);
  }
  if (j.contains("noise")) {
    const json& n = j["noise"];
    c.noise.accuracy = n.value("accuracy", 1.0);
    c.noise.peak_mass = n.value("peak_mass", 0.9);
    c.noise.seed = n.value("seed", 0);
  }
  if (j.contains("feature")) {
    c.feature_dim = j["feature"].value("dim", 0);
    c.feature_seed = j["feature"].value("seed", 0);
  }
  return c;
}

inline RunConfig read_run_config(const std::filesystem::path& path) {
  return parse_run_config(json::parse(read_file(path)));
}

struct EnvBreakdown {
  std::string label;
  std::size_t frames = 0;
  double ml_accuracy = 0.0;
  double map_accuracy = 0.0;
};

struct RunMetrics {
  std::size_t frames = 0;
  double ml_accuracy = -1.0;   // -1 when no ground truth in the stream
  double map_accuracy = -1.0;
  std::size_t ml_switches = 0;
  std::size_t map_switches = 0;
  double map_cell_accuracy = -1.0;  // winning-label cells vs world truth
  double weighted_map_accuracy = -1.0;
  std::vector<EnvBreakdown> per_environment;

  json to_json() const {
    json envs = json::array();
    for (const EnvBreakdown& e : per_environment)
      envs.push_back({{"label", e.label},
                      {"frames", e.frames},
                      {"ml_accuracy", e.ml_accuracy},
                      {"map_accuracy", e.map_accuracy}});
    return {{"format", "semap-metrics"},
            {"version", 1},
            {"frames", frames},
            {"ml_accuracy", ml_accuracy},
            {"map_accuracy", map_accuracy},
            {"ml_switches", ml_switches},
            {"map_switches", map_switches},
            {"map_cell_accuracy", map_cell_accuracy},
            {"weighted_map_accuracy", weighted_map_accuracy},
            {"per_environment", envs}};
  }
};

struct RunResult {
  RunMetrics metrics;
  std::vector<TraceEntry> trace;
  std::unique_ptr<SemanticGridMap> map;
};

/// Per-frame accuracies, switch counts, and the frame-weighted average over
/// per-environment (per-true-label) breakdowns.
inline RunMetrics compute_metrics(const std::vector<TraceEntry>& trace,
                                  const ClassCatalog& catalog,
                                  const SemanticGridMap* map = nullptr,
                                  const World* world = nullptr) {
  if (trace.empty()) throw std::invalid_argument("compute_metrics: empty trace");
  RunMetrics m;
  m.frames = trace.size();

  bool has_truth = true;
  for (const TraceEntry& e : trace)
    if (e.true_label < 0) has_truth = false;

  std::size_t ml_ok = 0, map_ok = 0;
  std::map<int, std::array<std::size_t, 3>> env;  // truth -> {frames, ml_ok, map_ok}
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i > 0) {
      if (trace[i].ml != trace[i - 1].ml) ++m.ml_switches;
      if (trace[i].map != trace[i - 1].map) ++m.map_switches;
    }
    if (has_truth) {
      auto& bucket = env[trace[i].true_label];
      ++bucket[0];
      if (trace[i].ml == trace[i].true_label) ++ml_ok, ++bucket[1];
      if (trace[i].map == trace[i].true_label) ++map_ok, ++bucket[2];
    }
  }
  if (has_truth) {
    m.ml_accuracy = static_cast<double>(ml_ok) / static_cast<double>(m.frames);
    m.map_accuracy = static_cast<double>(map_ok) / static_cast<double>(m.frames);
    double weighted = 0.0;
    for (const auto& [truth, bucket] : env) {
      EnvBreakdown e;
      e.label = catalog.name(static_cast<std::size_t>(truth));
      e.frames = bucket[0];
      e.ml_accuracy = static_cast<double>(bucket[1]) / static_cast<double>(bucket[0]);
      e.map_accuracy = static_cast<double>(bucket[2]) / static_cast<double>(bucket[0]);
      weighted += e.map_accuracy * static_cast<double>(e.frames);
      m.per_environment.push_back(std::move(e));
    }
    m.weighted_map_accuracy = weighted / static_cast<double>(m.frames);
  }

  if (map && world) {
    std::vector<int> render = map->winning_label_render(0.5);
    std::size_t labeled = 0, correct = 0;
    for (std::size_t i = 0; i < render.size(); ++i) {
      if (render[i] < 0) continue;
      ++labeled;
      if (render[i] == world->label[i]) ++correct;
    }
    if (labeled > 0)
      m.map_cell_accuracy =
          static_cast<double>(correct) / static_cast<double>(labeled);
  }
  return m;
}

/// Runs the full per-frame chain over an in-memory stream:
/// combine (when features and models are present) -> filter -> map update.
inline RunResult run_pipeline(const RunConfig& config,
                              const ClassCatalog& catalog,
                              const std::vector<FrameRecord>& stream,
                              const std::vector<OneVsAllModel>& models = {},
                              const World* world = nullptr) {
  Vec prior = config.make_prior(catalog);
  PlaceFilter filter(catalog, prior, config.filter);
  Vec cell_prior(catalog.size(), config.cell_prior);
  auto map = std::make_unique<SemanticGridMap>(config.grid, catalog.size(),
                                               config.clamp, cell_prior);
  for (const OneVsAllModel& model : models)
    if (!catalog.is_expansion(model.target_label))
      throw std::invalid_argument("pipeline: model targets a base label");

  RunResult result;
  result.trace.reserve(stream.size());
  std::size_t frame_no = 0;
  for (const FrameRecord& frame : stream) {
    ++frame_no;
    std::string frame_id = std::to_string(frame_no);
    if (frame.base_likelihood.size() != catalog.base_size())
      throw std::runtime_error("pipeline frame " + frame_id +
                               ": base likelihood length mismatch");

    Vec likelihood;
    if (!models.empty() && frame.feature) {
      Vec scores;
      scores.reserve(models.size());
      for (const OneVsAllModel& model : models)
        scores.push_back(model.score(*frame.feature));
      likelihood = combine_likelihood(frame.base_likelihood, scores);
    } else {
      // No features this frame: base-only normalization, expansion labels
      // (if any) contribute nothing.
      likelihood = normalized(frame.base_likelihood, "frame likelihood");
      likelihood.resize(catalog.size(), 0.0);
    }

    const Vec& posterior = filter.update(likelihood, frame_id);

    LaserScan scan;
    scan.angle_min = config.scan.angle_min;
    scan.angle_increment = config.scan.angle_increment;
    scan.range_max = config.scan.range_max;
    scan.ranges = frame.ranges;
    if (!scan.ranges.empty())
      map->update_semantic(frame.pose, scan, config.gate, posterior);

    TraceEntry entry;
    entry.t = frame.t;
    entry.ml = static_cast<int>(ml_label(frame.base_likelihood));
    entry.map = static_cast<int>(filter.map_label().first);
    entry.posterior = posterior;
    entry.true_label = frame.true_label;
    result.trace.push_back(std::move(entry));
  }

  result.metrics = compute_metrics(result.trace, catalog, map.get(), world);
  result.map = std::move(map);
  return result;
}

/// Builds the world and stream from the config's simulation section.
inline std::pair<World, std::vector<FrameRecord>> simulate_from_config(
    const RunConfig& config, const ClassCatalog& catalog) {
  WorldSpec spec;
  spec.geometry = config.grid;
  spec.regions = config.regions;
  spec.walls = config.walls;
  spec.default_label = config.default_label;
  World world = generate_world(spec, catalog);

  std::vector<std::size_t> base_whitelist;
  for (std::size_t idx : config.whitelist_indices(catalog))
    if (idx < catalog.base_size()) base_whitelist.push_back(idx);
  ClassifierSim classifier(catalog.base_size(), base_whitelist, config.noise);
  std::optional<FeatureSynth> features;
  if (config.feature_dim > 0)
    features.emplace(static_cast<std::size_t>(config.feature_dim),
                     catalog.size(), config.feature_seed);
  std::vector<FrameRecord> stream =
      simulate_stream(world, config.waypoints, config.speed, config.dt,
                      config.scan, classifier,
                      features ? &*features : nullptr);
  return {std::move(world), std::move(stream)};
}

}  // namespace semap
