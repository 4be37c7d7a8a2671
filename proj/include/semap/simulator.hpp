#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "semap/catalog.hpp"
#include "semap/grid.hpp"
#include "semap/prob.hpp"

namespace semap {

struct RectSpec {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;  // world meters, corners
};

struct RegionSpec {
  RectSpec rect;
  std::string label;
};

struct WorldSpec {
  GridGeometry geometry;
  std::vector<RegionSpec> regions;  // later regions win on overlap
  std::vector<RectSpec> walls;      // filled rectangles
  std::string default_label;        // fills cells no region covers
  std::uint64_t seed = 0;
};

/// Rasterized ground truth: wall mask plus a per-cell place label.
struct World {
  GridGeometry geometry;
  std::vector<uint8_t> wall;
  std::vector<int> label;

  bool is_wall(int cx, int cy) const {
    return wall[static_cast<std::size_t>(geometry.index(cx, cy))] != 0;
  }
  int label_at(int cx, int cy) const {
    return label[static_cast<std::size_t>(geometry.index(cx, cy))];
  }
  bool free_at_world(double x, double y) const {
    int cx = geometry.world_to_cell_x(x);
    int cy = geometry.world_to_cell_y(y);
    return geometry.contains(cx, cy) && !is_wall(cx, cy);
  }
};

inline World generate_world(const WorldSpec& spec, const ClassCatalog& catalog) {
  spec.geometry.validate();
  if (spec.default_label.empty())
    throw std::invalid_argument("world: default_label required");
  int default_idx = static_cast<int>(catalog.index_of(spec.default_label));

  World world;
  world.geometry = spec.geometry;
  world.wall.assign(spec.geometry.cell_count(), 0);
  world.label.assign(spec.geometry.cell_count(), default_idx);

  auto for_rect = [&](const RectSpec& r, auto&& f) {
    double lx = std::min(r.x0, r.x1), hx = std::max(r.x0, r.x1);
    double ly = std::min(r.y0, r.y1), hy = std::max(r.y0, r.y1);
    int cx0 = std::max(0, spec.geometry.world_to_cell_x(lx));
    int cy0 = std::max(0, spec.geometry.world_to_cell_y(ly));
    int cx1 = std::min(spec.geometry.width - 1,
                       spec.geometry.world_to_cell_x(hx - 1e-9));
    int cy1 = std::min(spec.geometry.height - 1,
                       spec.geometry.world_to_cell_y(hy - 1e-9));
    for (int cy = cy0; cy <= cy1; ++cy)
      for (int cx = cx0; cx <= cx1; ++cx) f(spec.geometry.index(cx, cy));
  };

  for (const RegionSpec& region : spec.regions) {
    int idx = static_cast<int>(catalog.index_of(region.label));
    for_rect(region.rect, [&](int cell) { world.label[cell] = idx; });
  }
  for (const RectSpec& wall : spec.walls)
    for_rect(wall, [&](int cell) { world.wall[cell] = 1; });
  return world;
}

struct ScanParams {
  double angle_min = -std::numbers::pi;
  double angle_increment = std::numbers::pi / 180.0;
  int beam_count = 360;
  double range_max = 10.0;
};

/// Grid ray marching at a tenth of a cell; range is the distance to the
/// first wall cell, capped at range_max with a no-return marker.
inline LaserScan simulate_scan(const World& world, const Pose2D& pose,
                               const ScanParams& params) {
  if (!world.free_at_world(pose.x, pose.y))
    throw std::invalid_argument("simulate_scan: pose not in free space");
  LaserScan scan;
  scan.angle_min = params.angle_min;
  scan.angle_increment = params.angle_increment;
  scan.range_max = params.range_max;
  scan.ranges.reserve(static_cast<std::size_t>(params.beam_count));

  const double step = world.geometry.resolution / 10.0;
  for (int i = 0; i < params.beam_count; ++i) {
    double angle = pose.theta + params.angle_min + i * params.angle_increment;
    double cx = std::cos(angle), sy = std::sin(angle);
    double range = LaserScan::kNoReturn;
    for (double t = step; t <= params.range_max; t += step) {
      int gx = world.geometry.world_to_cell_x(pose.x + t * cx);
      int gy = world.geometry.world_to_cell_y(pose.y + t * sy);
      if (!world.geometry.contains(gx, gy)) break;  // left the map: no return
      if (world.is_wall(gx, gy)) {
        range = t;
        break;
      }
    }
    scan.ranges.push_back(range);
  }
  return scan;
}

struct ClassifierNoiseModel {
  double accuracy = 1.0;   // chance the emitted peak is the true label
  double peak_mass = 0.9;  // mass on the sampled peak label
  // Optional row-stochastic confusion over base labels; uniform fallback.
  std::vector<Vec> confusion;
  std::uint64_t seed = 0;
};

/// Draws noisy per-frame base-class likelihood vectors. Peaks only ever land
/// on whitelisted labels; deterministic given seed and call sequence.
class ClassifierSim {
 public:
  ClassifierSim(std::size_t base_size, std::vector<std::size_t> whitelist,
                const ClassifierNoiseModel& noise)
      : base_size_(base_size), whitelist_(std::move(whitelist)), noise_(noise),
        rng_(noise.seed) {
    if (whitelist_.empty())
      throw std::invalid_argument("classifier sim: empty whitelist");
    if (!(noise_.accuracy >= 0.0 && noise_.accuracy <= 1.0))
      throw std::invalid_argument("classifier sim: accuracy outside [0,1]");
    if (!(noise_.peak_mass > 1.0 / static_cast<double>(base_size_) &&
          noise_.peak_mass < 1.0) &&
        whitelist_.size() > 1)
      throw std::invalid_argument("classifier sim: peak_mass outside (1/n, 1)");
    if (!noise_.confusion.empty()) {
      if (noise_.confusion.size() != base_size_)
        throw std::invalid_argument("classifier sim: confusion row count");
      for (const Vec& row : noise_.confusion)
        if (row.size() != base_size_ ||
            std::abs(sum(row) - 1.0) > kRenormTolerance)
          throw std::invalid_argument("classifier sim: confusion row invalid");
    }
  }

  Vec sample(std::size_t true_label) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::size_t peak = true_label;
    if (uni(rng_) >= noise_.accuracy) {
      std::size_t wrong = sample_wrong(true_label, uni);
      peak = wrong;
    }
    Vec out(base_size_, 0.0);
    if (whitelist_.size() == 1) {
      out[peak] = 1.0;
      return out;
    }
    double rest = (1.0 - noise_.peak_mass) /
                  static_cast<double>(whitelist_.size() - 1);
    for (std::size_t idx : whitelist_) out[idx] = rest;
    out[peak] = noise_.peak_mass;
    return out;
  }

 private:
  // Confusion-weighted draw over whitelisted labels other than the true one.
  std::size_t sample_wrong(std::size_t true_label,
                           std::uniform_real_distribution<double>& uni) {
    std::vector<std::size_t> candidates;
    Vec weights;
    for (std::size_t idx : whitelist_) {
      if (idx == true_label) continue;
      candidates.push_back(idx);
      weights.push_back(noise_.confusion.empty()
                            ? 1.0
                            : noise_.confusion[true_label][idx]);
    }
    if (candidates.empty()) return true_label;
    double total = sum(weights);
    if (total <= 0.0) {
      weights.assign(weights.size(), 1.0);
      total = static_cast<double>(weights.size());
    }
    double u = uni(rng_) * total;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      u -= weights[i];
      if (u <= 0.0) return candidates[i];
    }
    return candidates.back();
  }

  std::size_t base_size_;
  std::vector<std::size_t> whitelist_;
  ClassifierNoiseModel noise_;
  std::mt19937_64 rng_;
};

/// Label-conditioned Gaussian feature clusters: per-label mean drawn from the
/// seed, isotropic noise scaled 0.3.
class FeatureSynth {
 public:
  FeatureSynth(std::size_t dim, std::size_t label_count, std::uint64_t seed)
      : dim_(dim), rng_(seed) {
    std::mt19937_64 mean_rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> gauss(0.0, 1.0);
    means_.resize(label_count);
    for (Vec& m : means_) {
      m.resize(dim);
      for (double& v : m) v = gauss(mean_rng);
    }
  }

  Vec sample(std::size_t label) {
    if (label >= means_.size())
      throw std::invalid_argument("feature synth: label out of range");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec f(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      f[i] = means_[label][i] + 0.3 * gauss(rng_);
    return f;
  }

  std::size_t dimension() const { return dim_; }

 private:
  std::size_t dim_;
  std::vector<Vec> means_;
  std::mt19937_64 rng_;
};

/// One timestep of sensor-log input.
struct FrameRecord {
  double t = 0.0;
  Pose2D pose;
  std::vector<double> ranges;
  Vec base_likelihood;
  std::optional<Vec> feature;
  int true_label = -1;  // simulation only; -1 when unknown
};

/// Piecewise-linear trajectory through the waypoints at constant speed,
/// heading along the motion direction, sampled every dt.
inline std::vector<Pose2D> drive(const World& world,
                                 const std::vector<std::pair<double, double>>& waypoints,
                                 double speed, double dt) {
  if (waypoints.empty()) throw std::invalid_argument("drive: no waypoints");
  if (!(speed > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("drive: speed and dt must be > 0");
  for (auto [x, y] : waypoints)
    if (!world.free_at_world(x, y))
      throw std::invalid_argument("drive: waypoint not in free space");

  // Straight-line reachability between consecutive waypoints.
  const double step = world.geometry.resolution / 10.0;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    auto [x0, y0] = waypoints[i];
    auto [x1, y1] = waypoints[i + 1];
    double len = std::hypot(x1 - x0, y1 - y0);
    for (double s = 0.0; s <= len; s += step) {
      double f = len > 0.0 ? s / len : 0.0;
      if (!world.free_at_world(x0 + f * (x1 - x0), y0 + f * (y1 - y0)))
        throw std::invalid_argument("drive: segment to waypoint " +
                                    std::to_string(i + 1) + " blocked");
    }
  }

  std::vector<double> seg_len;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    seg_len.push_back(std::hypot(waypoints[i + 1].first - waypoints[i].first,
                                 waypoints[i + 1].second - waypoints[i].second));
    total += seg_len.back();
  }

  std::vector<Pose2D> poses;
  if (total == 0.0) {
    poses.push_back({waypoints[0].first, waypoints[0].second, 0.0});
    return poses;
  }
  double total_time = total / speed;
  for (double t = 0.0; t <= total_time + 1e-9; t += dt) {
    double s = std::min(speed * t, total);
    double acc = 0.0;
    std::size_t seg = 0;
    while (seg + 1 < seg_len.size() && acc + seg_len[seg] < s) {
      acc += seg_len[seg];
      ++seg;
    }
    auto [x0, y0] = waypoints[seg];
    auto [x1, y1] = waypoints[seg + 1];
    double f = seg_len[seg] > 0.0 ? (s - acc) / seg_len[seg] : 0.0;
    double theta = normalize_angle(std::atan2(y1 - y0, x1 - x0));
    poses.push_back({x0 + f * (x1 - x0), y0 + f * (y1 - y0), theta});
  }
  return poses;
}

/// Full synthetic stream: trajectory, scans, noisy classifier output, and
/// (optionally) label-conditioned features. Deterministic given the seeds.
inline std::vector<FrameRecord> simulate_stream(
    const World& world, const std::vector<std::pair<double, double>>& waypoints,
    double speed, double dt, const ScanParams& scan_params,
    ClassifierSim& classifier, FeatureSynth* features = nullptr) {
  std::vector<FrameRecord> stream;
  std::vector<Pose2D> poses = drive(world, waypoints, speed, dt);
  stream.reserve(poses.size());
  double t = 0.0;
  for (const Pose2D& pose : poses) {
    FrameRecord rec;
    rec.t = t;
    rec.pose = pose;
    int truth = world.label_at(world.geometry.world_to_cell_x(pose.x),
                               world.geometry.world_to_cell_y(pose.y));
    rec.true_label = truth;
    rec.ranges = simulate_scan(world, pose, scan_params).ranges;
    rec.base_likelihood = classifier.sample(static_cast<std::size_t>(truth));
    if (features) rec.feature = features->sample(static_cast<std::size_t>(truth));
    stream.push_back(std::move(rec));
    t += dt;
  }
  return stream;
}

}  // namespace semap
