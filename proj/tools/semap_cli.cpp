// Command-line front end: simulate worlds, replay logs, train expansion
// scorers, plan over semantic costmaps, boost object hypotheses, render maps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "semap/semap.hpp"

using namespace semap;

namespace {

void write_run_outputs(const std::string& out_prefix, const RunConfig& config,
                       const RunResult& result) {
  write_map(out_prefix + ".map.json", *result.map, config.catalog);
  atomic_write(out_prefix + ".trace.jsonl",
               serialize_trace(config.catalog, result.trace));
  atomic_write(out_prefix + ".metrics.json",
               result.metrics.to_json().dump(2) + "\n");
  std::vector<int> labels =
      result.map->winning_label_render(config.min_confidence);
  atomic_write(out_prefix + ".ppm",
               render_ppm(labels, result.map->geometry()));
  atomic_write(out_prefix + ".legend.txt", render_legend(config.catalog));
}

std::vector<OneVsAllModel> load_models(const std::vector<std::string>& paths,
                                       const ClassCatalog& catalog) {
  std::vector<OneVsAllModel> models;
  for (const std::string& p : paths) {
    auto [model, label] = parse_model(read_file(p));
    model.target_label = catalog.index_of(label);
    models.push_back(std::move(model));
  }
  return models;
}

int cmd_simulate(const std::string& config_path, const std::string& out_prefix,
                 std::uint64_t seed_override, bool has_seed) {
  RunConfig config = read_run_config(config_path);
  if (has_seed) config.noise.seed = seed_override;
  ClassCatalog catalog = config.make_catalog();
  auto [world, stream] = simulate_from_config(config, catalog);

  SensorLogHeader header;
  header.catalog = config.catalog;
  header.feature_dim = config.feature_dim;
  header.scan = config.scan;
  write_log(out_prefix + ".log.jsonl", header, stream);

  RunResult result = run_pipeline(config, catalog, stream, {}, &world);
  write_run_outputs(out_prefix, config, result);
  std::cout << result.metrics.to_json().dump(2) << "\n";
  return 0;
}

int cmd_replay(const std::string& config_path, const std::string& log_path,
               const std::string& out_prefix,
               const std::vector<std::string>& model_paths) {
  RunConfig config = read_run_config(config_path);
  ClassCatalog catalog = config.make_catalog();
  auto [header, stream] = read_log(log_path);
  if (header.catalog.size() > catalog.base_size())
    throw std::runtime_error("replay: log catalog larger than config catalog");
  config.scan = header.scan;
  std::vector<OneVsAllModel> models = load_models(model_paths, catalog);
  RunResult result = run_pipeline(config, catalog, stream, models);
  write_run_outputs(out_prefix, config, result);
  std::cout << result.metrics.to_json().dump(2) << "\n";
  return 0;
}

int cmd_train_class(const std::string& data_path, const std::string& label,
                    const std::string& out_path) {
  std::ifstream in(data_path);
  if (!in) throw std::runtime_error("cannot open " + data_path);
  TrainingSet set = parse_training_set(in);
  OneVsAllModel model = train_one_vs_all(set, 0);
  atomic_write(out_path, serialize_model(model, label));
  std::printf("trained '%s' on %zu positive / %zu negative, log-loss %.4f\n",
              label.c_str(), model.n_positive, model.n_negative,
              mean_log_loss(model, set));
  return 0;
}

int cmd_plan(const std::string& map_path, const std::string& cost_path,
             double sx, double sy, double gx, double gy,
             double min_confidence, const std::string& out_path) {
  auto [map, catalog_names] = read_map(map_path);
  ClassCatalog catalog(catalog_names);
  CostTable table = read_cost_table(cost_path);
  std::vector<double> field = build_costmap(map, catalog, table, min_confidence);

  const GridGeometry& g = map.geometry();
  if (!g.contains(sx, sy) || !g.contains(gx, gy))
    throw std::invalid_argument("plan: start or goal outside the map");
  int start = g.index(g.world_to_cell_x(sx), g.world_to_cell_y(sy));
  int goal = g.index(g.world_to_cell_x(gx), g.world_to_cell_y(gy));

  PlanResult result = plan(field, g.width, g.height, start, goal);
  if (!result.found) {
    std::cout << "no path\n";
    return 2;
  }
  std::cout << "cost " << result.total_cost << ", " << result.path.size()
            << " cells, " << result.expanded_nodes << " expansions\n";
  for (int cell : result.path) {
    double wx = g.origin_x + (cell % g.width + 0.5) * g.resolution;
    double wy = g.origin_y + (cell / g.width + 0.5) * g.resolution;
    std::printf("%.3f %.3f\n", wx, wy);
  }
  if (!out_path.empty()) {
    std::vector<int> labels = map.winning_label_render(min_confidence);
    for (int cell : result.path) labels[cell] = SemanticGridMap::kOccupied;
    atomic_write(out_path, render_ppm(labels, g));
  }
  return 0;
}

int cmd_boost(const std::string& priors_path, const std::string& likelihood_path,
              const std::string& place, std::size_t k) {
  std::ifstream in(priors_path);
  if (!in) throw std::runtime_error("cannot open " + priors_path);
  auto triples = parse_prior_counts(in);

  std::vector<std::string> object_names, place_names;
  auto add_unique = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  for (const auto& [obj, plc, count] : triples) {
    add_unique(object_names, obj);
    add_unique(place_names, plc);
  }
  add_unique(place_names, place);
  ObjectCatalog objects(object_names);
  ClassCatalog places(place_names);
  ObjectPriorTable table =
      ObjectPriorTable::from_counts(triples, objects, places);

  json j = json::parse(read_file(likelihood_path));
  Vec likelihood = j.get<Vec>();
  if (likelihood.size() != objects.size())
    throw std::invalid_argument("likelihood length != object count");

  Vec boosted = boost(likelihood, table, places.index_of(place));
  if (k == 0 || k > objects.size()) k = objects.size();
  auto before = top_k(likelihood, k);
  auto after = top_k(boosted, k);
  std::printf("%-4s %-12s %-11s %-12s %s\n", "rank", "detector", "score",
              "boosted", "score");
  for (std::size_t i = 0; i < k; ++i)
    std::printf("%-4zu %-12s %-11.4f %-12s %.4f\n", i + 1,
                objects.names[before[i].first].c_str(), before[i].second,
                objects.names[after[i].first].c_str(), after[i].second);
  return 0;
}

int cmd_render(const std::string& map_path, const std::string& out_prefix,
               double min_confidence) {
  auto [map, catalog_names] = read_map(map_path);
  std::vector<int> labels = map.winning_label_render(min_confidence);
  atomic_write(out_prefix + ".ppm", render_ppm(labels, map.geometry()));
  atomic_write(out_prefix + ".legend.txt", render_legend(catalog_names));
  std::cout << "wrote " << out_prefix << ".ppm and " << out_prefix
            << ".legend.txt\n";
  return 0;
}

int cmd_metrics(const std::string& trace_path) {
  auto [catalog_names, trace] = parse_trace(read_file(trace_path));
  ClassCatalog catalog(catalog_names);
  RunMetrics m = compute_metrics(trace, catalog);
  std::cout << m.to_json().dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semantic place mapping toolkit"};
  app.require_subcommand(1);

  std::string config_path, log_path, out = "run", map_path, cost_path;
  std::string data_path, label, model_out, priors_path, likelihood_path, place;
  std::string trace_path;
  std::vector<std::string> model_paths;
  std::uint64_t seed = 0;
  double sx = 0, sy = 0, gx = 0, gy = 0, min_confidence = 0.6;
  std::size_t top = 5;

  auto* sim = app.add_subcommand("simulate", "generate a world, log, and run");
  sim->add_option("--config", config_path, "run config JSON")->required();
  sim->add_option("--out", out, "output file prefix");
  auto* seed_opt = sim->add_option("--seed", seed, "override the noise seed");

  auto* rep = app.add_subcommand("replay", "run the pipeline over a log");
  rep->add_option("--config", config_path, "run config JSON")->required();
  rep->add_option("--log", log_path, "sensor log JSONL")->required();
  rep->add_option("--out", out, "output file prefix");
  rep->add_option("--model", model_paths, "expansion scorer model JSON");

  auto* trn = app.add_subcommand("train-class", "train a one-vs-all scorer");
  trn->add_option("--data", data_path, "training set file")->required();
  trn->add_option("--label", label, "expansion label name")->required();
  trn->add_option("--out", model_out, "model output path")->required();

  auto* pln = app.add_subcommand("plan", "plan a path over a map dump");
  pln->add_option("--map", map_path, "map dump JSON")->required();
  pln->add_option("--costs", cost_path, "cost table JSON")->required();
  pln->add_option("--start-x", sx)->required();
  pln->add_option("--start-y", sy)->required();
  pln->add_option("--goal-x", gx)->required();
  pln->add_option("--goal-y", gy)->required();
  pln->add_option("--min-confidence", min_confidence);
  pln->add_option("--out", out, "overlay image path (optional)")->default_val("");

  auto* bst = app.add_subcommand("boost", "rerank object hypotheses by place");
  bst->add_option("--priors", priors_path, "object/place count file")->required();
  bst->add_option("--likelihood", likelihood_path, "detector output JSON array")
      ->required();
  bst->add_option("--place", place, "current place label")->required();
  bst->add_option("--top", top, "how many hypotheses to print");

  auto* rnd = app.add_subcommand("render", "render a map dump to PPM");
  rnd->add_option("--map", map_path, "map dump JSON")->required();
  rnd->add_option("--out", out, "output file prefix");
  rnd->add_option("--min-confidence", min_confidence);

  auto* met = app.add_subcommand("metrics", "summarize a belief trace");
  met->add_option("--trace", trace_path, "belief trace JSONL")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return cmd_simulate(config_path, out, seed, seed_opt->count() > 0);
    if (rep->parsed()) return cmd_replay(config_path, log_path, out, model_paths);
    if (trn->parsed()) return cmd_train_class(data_path, label, model_out);
    if (pln->parsed())
      return cmd_plan(map_path, cost_path, sx, sy, gx, gy, min_confidence, out);
    if (bst->parsed()) return cmd_boost(priors_path, likelihood_path, place, top);
    if (rnd->parsed()) return cmd_render(map_path, out, min_confidence);
    if (met->parsed()) return cmd_metrics(trace_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
