#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "semap/catalog.hpp"
#include "semap/grid.hpp"

namespace semap {

constexpr double kImpassable = std::numeric_limits<double>::infinity();

/// Per-label traversal cost multipliers; occupied cells are impassable.
struct CostTable {
  std::unordered_map<std::string, double> label_cost;
  double unknown_cost = 1.0;
  double default_cost = -1.0;  // < 1 means "no default"

  double cost_for(const std::string& label) const {
    auto it = label_cost.find(label);
    if (it != label_cost.end()) return it->second;
    if (default_cost >= 1.0) return default_cost;
    throw std::invalid_argument("cost table: no cost for label '" + label +
                                "' and no default");
  }

  void validate() const {
    for (const auto& [name, c] : label_cost)
      if (!(c >= 1.0) || !std::isfinite(c))
        throw std::invalid_argument("cost table: multiplier for '" + name +
                                    "' must be finite and >= 1");
    if (!(unknown_cost >= 1.0) || !std::isfinite(unknown_cost))
      throw std::invalid_argument("cost table: unknown_cost must be >= 1");
  }
};

/// Per-cell step-cost multipliers derived from the map's winning labels.
/// Occupied cells become kImpassable.
inline std::vector<double> build_costmap(const SemanticGridMap& map,
                                         const ClassCatalog& catalog,
                                         const CostTable& table,
                                         double min_confidence) {
  table.validate();
  // Fail fast if any catalog label is uncovered.
  for (const std::string& name : catalog.labels()) table.cost_for(name);

  std::vector<int> labels = map.winning_label_render(min_confidence);
  std::vector<double> field(labels.size(), table.unknown_cost);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == SemanticGridMap::kOccupied)
      field[i] = kImpassable;
    else if (labels[i] != SemanticGridMap::kUnknown)
      field[i] = table.cost_for(catalog.name(static_cast<std::size_t>(labels[i])));
  }
  return field;
}

struct PlanResult {
  bool found = false;
  std::vector<int> path;  // flat cell indices, start..goal
  double total_cost = 0.0;
  std::size_t expanded_nodes = 0;
};

namespace detail {

inline double octile(int x0, int y0, int x1, int y1) {
  double dx = std::abs(x1 - x0);
  double dy = std::abs(y1 - y0);
  return (dx + dy) + (std::numbers::sqrt2 - 2.0) * std::min(dx, dy);
}

struct OpenEntry {
  double f;
  double h;
  int cell;
  bool operator>(const OpenEntry& o) const {
    if (f != o.f) return f > o.f;
    if (h != o.h) return h > o.h;
    return cell > o.cell;
  }
};

/// Shared best-first search core; heuristic = 0 gives the Dijkstra oracle.
inline PlanResult grid_search(const std::vector<double>& cost, int width,
                              int height, int start, int goal,
                              bool use_heuristic) {
  const std::size_t n = cost.size();
  if (n != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw std::invalid_argument("plan: cost field size != width*height");
  auto in_bounds = [&](int cx, int cy) {
    return cx >= 0 && cy >= 0 && cx < width && cy < height;
  };
  if (start < 0 || goal < 0 || start >= static_cast<int>(n) ||
      goal >= static_cast<int>(n))
    throw std::invalid_argument("plan: start/goal out of bounds");
  if (!std::isfinite(cost[start]) || !std::isfinite(cost[goal]))
    throw std::invalid_argument("plan: start/goal not passable");

  double min_mult = kImpassable;
  for (double c : cost)
    if (std::isfinite(c) && c < min_mult) min_mult = c;

  const int gx = goal % width, gy = goal / width;
  auto h_of = [&](int cell) {
    if (!use_heuristic) return 0.0;
    return octile(cell % width, cell / width, gx, gy) * min_mult;
  };

  std::vector<double> g(n, kImpassable);
  std::vector<int> parent(n, -1);
  std::vector<uint8_t> closed(n, 0);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;

  g[start] = 0.0;
  open.push({h_of(start), h_of(start), start});

  PlanResult result;
  static const int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static const int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

  while (!open.empty()) {
    OpenEntry top = open.top();
    open.pop();
    int u = top.cell;
    if (closed[u]) continue;
    closed[u] = 1;
    ++result.expanded_nodes;
    if (u == goal) {
      result.found = true;
      break;
    }
    int ux = u % width, uy = u / width;
    for (int k = 0; k < 8; ++k) {
      int vx = ux + kDx[k], vy = uy + kDy[k];
      if (!in_bounds(vx, vy)) continue;
      int v = vy * width + vx;
      if (closed[v] || !std::isfinite(cost[v])) continue;
      double dist = k < 4 ? 1.0 : std::numbers::sqrt2;
      double step = dist * 0.5 * (cost[u] + cost[v]);
      double cand = g[u] + step;
      if (cand < g[v]) {
        g[v] = cand;
        parent[v] = u;
        double h = h_of(v);
        open.push({cand + h, h, v});
      }
    }
  }

  if (result.found) {
    result.total_cost = g[goal];
    for (int c = goal; c != -1; c = parent[c]) result.path.push_back(c);
    std::reverse(result.path.begin(), result.path.end());
  }
  return result;
}

}  // namespace detail

/// A* over an 8-connected costfield. Step cost is center distance times the
/// mean of the two endpoint multipliers; heuristic is octile distance scaled
/// by the minimum multiplier (admissible). Unreachable goals return
/// found=false rather than throwing.
inline PlanResult plan(const std::vector<double>& cost, int width, int height,
                       int start, int goal) {
  return detail::grid_search(cost, width, height, start, goal, true);
}

/// Heuristic-free reference search with identical cost semantics.
inline PlanResult plan_dijkstra(const std::vector<double>& cost, int width,
                                int height, int start, int goal) {
  return detail::grid_search(cost, width, height, start, goal, false);
}

}  // namespace semap
