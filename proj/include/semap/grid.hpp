#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "semap/prob.hpp"

namespace semap {

struct GridGeometry {
  double resolution = 0.05;  // meters per cell
  int width = 1;
  int height = 1;
  double origin_x = 0.0;  // world coordinates of the corner of cell (0,0)
  double origin_y = 0.0;

  void validate() const {
    if (!(resolution > 0.0))
      throw std::invalid_argument("geometry: resolution must be > 0");
    if (width < 1 || height < 1)
      throw std::invalid_argument("geometry: width/height must be >= 1");
  }

  bool contains(int cx, int cy) const {
    return cx >= 0 && cy >= 0 && cx < width && cy < height;
  }
  int index(int cx, int cy) const { return cy * width + cx; }
  int cell_x(int idx) const { return idx % width; }
  int cell_y(int idx) const { return idx / width; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  int world_to_cell_x(double x) const {
    return static_cast<int>(std::floor((x - origin_x) / resolution));
  }
  int world_to_cell_y(double y) const {
    return static_cast<int>(std::floor((y - origin_y) / resolution));
  }
  double cell_center_x(int cx) const {
    return origin_x + (cx + 0.5) * resolution;
  }
  double cell_center_y(int cy) const {
    return origin_y + (cy + 0.5) * resolution;
  }
};

struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // radians, (-pi, pi]
};

inline double normalize_angle(double a) {
  while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  return a;
}

struct LaserScan {
  static constexpr double kNoReturn = -1.0;

  double angle_min = -std::numbers::pi;  // sensor frame
  double angle_increment = std::numbers::pi / 180.0;
  std::vector<double> ranges;  // meters, kNoReturn marks no return
  double range_max = 10.0;
};

/// Semantic updates only apply to rays inside the camera FOV and to cells
/// within semantic_range of the robot.
struct SensorGate {
  double camera_fov_half_angle = std::numbers::pi / 4.0;
  double semantic_range = 5.0;

  void validate() const {
    if (!(camera_fov_half_angle > 0.0 &&
          camera_fov_half_angle <= std::numbers::pi))
      throw std::invalid_argument("gate: fov half angle outside (0, pi]");
    if (!(semantic_range > 0.0))
      throw std::invalid_argument("gate: semantic_range must be > 0");
  }
};

struct RayTrace {
  std::vector<int> cells;  // flat indices, in traversal order
  bool reached_end = false;
};

/// Integer grid traversal from `from` to `to`, visiting every cell the
/// segment passes through. Exact diagonal boundary crossings step
/// diagonally. Out-of-bounds segments yield the in-bounds prefix.
inline RayTrace cast_ray(const GridGeometry& geom, double x0, double y0,
                         double x1, double y1) {
  if (!std::isfinite(x0) || !std::isfinite(y0) || !std::isfinite(x1) ||
      !std::isfinite(y1))
    throw std::invalid_argument("cast_ray: non-finite endpoint");

  RayTrace trace;
  int cx = geom.world_to_cell_x(x0);
  int cy = geom.world_to_cell_y(y0);
  const int ex = geom.world_to_cell_x(x1);
  const int ey = geom.world_to_cell_y(y1);

  const double dx = x1 - x0;
  const double dy = y1 - y0;
  const int step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
  const int step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);

  const double inf = std::numeric_limits<double>::infinity();
  double t_max_x = inf, t_delta_x = inf;
  double t_max_y = inf, t_delta_y = inf;
  if (step_x != 0) {
    double next_bound =
        geom.origin_x + (cx + (step_x > 0 ? 1 : 0)) * geom.resolution;
    t_max_x = (next_bound - x0) / dx;
    t_delta_x = geom.resolution / std::abs(dx);
  }
  if (step_y != 0) {
    double next_bound =
        geom.origin_y + (cy + (step_y > 0 ? 1 : 0)) * geom.resolution;
    t_max_y = (next_bound - y0) / dy;
    t_delta_y = geom.resolution / std::abs(dy);
  }

  constexpr double kTie = 1e-12;
  while (true) {
    if (!geom.contains(cx, cy)) break;
    trace.cells.push_back(geom.index(cx, cy));
    if (cx == ex && cy == ey) {
      trace.reached_end = true;
      break;
    }
    if (t_max_x > 1.0 + kTie && t_max_y > 1.0 + kTie) break;  // ran out of segment
    if (std::abs(t_max_x - t_max_y) <= kTie) {
      cx += step_x;
      cy += step_y;
      t_max_x += t_delta_x;
      t_max_y += t_delta_y;
    } else if (t_max_x < t_max_y) {
      cx += step_x;
      t_max_x += t_delta_x;
    } else {
      cy += step_y;
      t_max_y += t_delta_y;
    }
  }
  return trace;
}

struct ClampBounds {
  double l_min = -2.0;
  double l_max = 3.5;

  void validate() const {
    if (!(l_min < 0.0 && 0.0 < l_max))
      throw std::invalid_argument("clamp: need l_min < 0 < l_max");
  }
};

struct UpdateSummary {
  bool pose_in_map = true;
  int rays_in_fov = 0;
  std::size_t free_cells_updated = 0;
  std::size_t hit_cells_updated = 0;
};

// Standard hit/miss increments for the level-0 occupancy layer.
inline const double kLogOddsHit = std::log(0.7 / 0.3);
inline const double kLogOddsMiss = std::log(0.3 / 0.7);

/// Layered semantic occupancy map: a level-0 occupancy grid plus one
/// log-odds layer per semantic class. Single writer; updates exclusive.
class SemanticGridMap {
 public:
  static constexpr int kUnknown = -1;
  static constexpr int kOccupied = -2;

  SemanticGridMap(GridGeometry geometry, std::size_t num_classes,
                  ClampBounds clamp = {}, Vec cell_prior = {})
      : geom_(geometry), clamp_(clamp) {
    geom_.validate();
    clamp_.validate();
    if (num_classes == 0)
      throw std::invalid_argument("map: need at least one class layer");
    if (cell_prior.empty()) cell_prior.assign(num_classes, 0.5);
    if (cell_prior.size() != num_classes)
      throw std::invalid_argument("map: cell prior length != class count");
    cell_prior_ = std::move(cell_prior);
    occupancy_.assign(geom_.cell_count(), 0.0);  // occupancy prior 0.5
    observed_.assign(geom_.cell_count(), 0);
    layers_.reserve(num_classes);
    prior_log_.reserve(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
      double p = cell_prior_[c];
      if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("map: cell prior must be in (0,1)");
      prior_log_.push_back(log_odds(p));
      layers_.emplace_back(geom_.cell_count(), prior_log_.back());
    }
  }

  /// Casts every FOV-gated scan ray and writes the place posterior into the
  /// traversed free cells as a clamped log-odds increment; the occupancy
  /// layer gets the usual hit/miss treatment. Cells are updated at most once
  /// per call.
  UpdateSummary update_semantic(const Pose2D& pose, const LaserScan& scan,
                                const SensorGate& gate, const Vec& posterior) {
    gate.validate();
    if (posterior.size() != layers_.size())
      throw std::invalid_argument("update_semantic: posterior length " +
                                  std::to_string(posterior.size()) +
                                  " != layer count " +
                                  std::to_string(layers_.size()));

    UpdateSummary summary;
    if (!geom_.contains(geom_.world_to_cell_x(pose.x),
                        geom_.world_to_cell_y(pose.y))) {
      summary.pose_in_map = false;
      return summary;
    }

    // Increment per class: observation log-odds minus the cell prior's.
    Vec increment(layers_.size());
    for (std::size_t c = 0; c < layers_.size(); ++c) {
      double p = clamp(posterior[c], 1e-12, 1.0 - 1e-12);
      increment[c] = log_odds(p) - prior_log_[c];
    }

    std::vector<int> free_cells;
    std::vector<int> hit_cells;
    ++stamp_;
    if (free_mark_.size() != geom_.cell_count()) {
      free_mark_.assign(geom_.cell_count(), 0);
      hit_mark_.assign(geom_.cell_count(), 0);
    }

    for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
      double bearing = scan.angle_min + static_cast<double>(i) * scan.angle_increment;
      if (std::abs(normalize_angle(bearing)) > gate.camera_fov_half_angle)
        continue;
      ++summary.rays_in_fov;

      double r = scan.ranges[i];
      bool has_return = r > 0.0;
      double reach = has_return ? r : scan.range_max;
      bool hit_in_range = has_return && r <= gate.semantic_range;
      // Endpoints landing exactly on a cell edge belong to the cell the ray
      // traversed, not the one beyond it.
      double d = std::max(std::min(reach, gate.semantic_range) - 1e-9, 0.0);

      double dir = pose.theta + bearing;
      RayTrace trace = cast_ray(geom_, pose.x, pose.y,
                                pose.x + d * std::cos(dir),
                                pose.y + d * std::sin(dir));
      for (std::size_t k = 0; k < trace.cells.size(); ++k) {
        int cell = trace.cells[k];
        bool is_hit = hit_in_range && trace.reached_end &&
                      k + 1 == trace.cells.size();
        if (is_hit) {
          if (hit_mark_[cell] != stamp_) {
            hit_mark_[cell] = stamp_;
            hit_cells.push_back(cell);
          }
        } else if (free_mark_[cell] != stamp_) {
          free_mark_[cell] = stamp_;
          free_cells.push_back(cell);
        }
      }
    }

    // Occupied endpoints take precedence over any free-space crossing.
    for (int cell : hit_cells) {
      occupancy_[cell] = clamp(occupancy_[cell] + kLogOddsHit, clamp_.l_min,
                               clamp_.l_max);
    }
    for (int cell : free_cells) {
      if (hit_mark_[cell] == stamp_) continue;
      occupancy_[cell] = clamp(occupancy_[cell] + kLogOddsMiss, clamp_.l_min,
                               clamp_.l_max);
      for (std::size_t c = 0; c < layers_.size(); ++c) {
        layers_[c][cell] =
            clamp(layers_[c][cell] + increment[c], clamp_.l_min, clamp_.l_max);
      }
      observed_[cell] = 1;
      ++summary.free_cells_updated;
    }
    summary.hit_cells_updated = hit_cells.size();
    return summary;
  }

  double cell_probability(int cx, int cy, std::size_t cls) const {
    check_cell(cx, cy);
    check_class(cls);
    return logistic(layers_[cls][geom_.index(cx, cy)]);
  }

  double cell_log_odds(int cx, int cy, std::size_t cls) const {
    check_cell(cx, cy);
    check_class(cls);
    return layers_[cls][geom_.index(cx, cy)];
  }

  double occupancy_probability(int cx, int cy) const {
    check_cell(cx, cy);
    return logistic(occupancy_[geom_.index(cx, cy)]);
  }

  /// Per-cell winning class index; kOccupied where occupancy wins, kUnknown
  /// where nothing confident was ever observed. Ties go to the lowest index.
  std::vector<int> winning_label_render(double min_confidence) const {
    std::vector<int> out(geom_.cell_count(), kUnknown);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (logistic(occupancy_[i]) > 0.5) {
        out[i] = kOccupied;
        continue;
      }
      if (!observed_[i]) continue;
      std::size_t best = 0;
      for (std::size_t c = 1; c < layers_.size(); ++c)
        if (layers_[c][i] > layers_[best][i]) best = c;
      if (logistic(layers_[best][i]) >= min_confidence)
        out[i] = static_cast<int>(best);
    }
    return out;
  }

  /// Zero-information layer for a class appended to the catalog after map
  /// creation.
  void add_layer(std::size_t class_index, double prior = 0.5) {
    if (class_index != layers_.size())
      throw std::invalid_argument(
          class_index < layers_.size()
              ? "add_layer: layer already exists"
              : "add_layer: class index skips a layer");
    if (!(prior > 0.0 && prior < 1.0))
      throw std::invalid_argument("add_layer: prior must be in (0,1)");
    cell_prior_.push_back(prior);
    prior_log_.push_back(log_odds(prior));
    layers_.emplace_back(geom_.cell_count(), prior_log_.back());
  }

  const GridGeometry& geometry() const { return geom_; }
  const ClampBounds& clamp_bounds() const { return clamp_; }
  std::size_t layer_count() const { return layers_.size(); }
  const Vec& cell_prior() const { return cell_prior_; }
  const Vec& occupancy() const { return occupancy_; }
  const Vec& layer(std::size_t c) const {
    check_class(c);
    return layers_[c];
  }
  const std::vector<uint8_t>& observed() const { return observed_; }

  /// Restores raw state (deserialization). Sizes must match the geometry.
  void restore(Vec occupancy, std::vector<Vec> layers,
               std::vector<uint8_t> observed) {
    if (occupancy.size() != geom_.cell_count() ||
        observed.size() != geom_.cell_count() ||
        layers.size() != layers_.size())
      throw std::invalid_argument("map restore: size mismatch");
    for (const Vec& l : layers)
      if (l.size() != geom_.cell_count())
        throw std::invalid_argument("map restore: layer size mismatch");
    occupancy_ = std::move(occupancy);
    layers_ = std::move(layers);
    observed_ = std::move(observed);
  }

 private:
  void check_cell(int cx, int cy) const {
    if (!geom_.contains(cx, cy))
      throw std::out_of_range("map: cell out of bounds");
  }
  void check_class(std::size_t cls) const {
    if (cls >= layers_.size())
      throw std::out_of_range("map: class index out of range");
  }

  GridGeometry geom_;
  ClampBounds clamp_;
  Vec cell_prior_;
  Vec prior_log_;
  Vec occupancy_;
  std::vector<Vec> layers_;
  std::vector<uint8_t> observed_;
  std::vector<uint32_t> free_mark_;
  std::vector<uint32_t> hit_mark_;
  uint32_t stamp_ = 0;
};

}  // namespace semap
