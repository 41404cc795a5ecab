#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "cinedrone/planner/world_map.hpp"

namespace cinedrone::planner {

/// Path cost on the 8-connected lattice, kept as move counts so that costs compare exactly:
/// a + b*sqrt(2) has a unique integer representation.
struct GridCost {
  std::int64_t straight = 0;
  std::int64_t diagonal = 0;
  double units() const { return static_cast<double>(straight) + static_cast<double>(diagonal) * std::sqrt(2.0); }
  bool operator==(const GridCost&) const = default;
};

/// Lattice of nodes spaced `cell` apart covering the map bounds. A node is free when it
/// keeps at least cell/2 from every no-fly zone; an edge is traversable when both ends are
/// free and the straight segment between them touches no zone.
class OccupancyGrid {
 public:
  OccupancyGrid(const WorldMap& map, double cell);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double cell() const { return cell_; }
  int index(int i, int j) const { return j * nx_ + i; }
  bool in_range(int i, int j) const { return i >= 0 && j >= 0 && i < nx_ && j < ny_; }
  bool free(int i, int j) const { return in_range(i, j) && free_[index(i, j)] != 0; }
  bool edge_free(int i, int j, int di, int dj) const;
  Vec2 position(int i, int j) const {
    return {map_->bounds.min_x + i * cell_, map_->bounds.min_y + j * cell_};
  }
  const WorldMap& map() const { return *map_; }

  /// Nearest free node that can be reached from `p` in a straight, zone-free line.
  std::optional<std::pair<int, int>> snap(const Vec2& p) const;

 private:
  const WorldMap* map_;
  double cell_;
  int nx_ = 0, ny_ = 0;
  std::vector<std::uint8_t> free_;
};

struct PathResult {
  std::vector<LocalPoint> waypoints;  // smoothed, starts at `start`, ends at `goal`
  std::vector<LocalPoint> grid_path;  // start, lattice nodes, goal
  GridCost grid_cost;                 // between the snapped start and goal nodes
  double grid_length(double cell) const { return grid_cost.units() * cell; }
  double length() const;
};

/// Grid A* with a Euclidean heuristic; the returned lattice cost is grid-optimal. Throws
/// NoPathError when either end is outside the bounds, inside a zone, or disconnected.
PathResult astar_path(const OccupancyGrid& grid, const LocalPoint& start, const LocalPoint& goal);
PathResult astar_path(const WorldMap& map, const LocalPoint& start, const LocalPoint& goal, double cell);

double polyline_length(const std::vector<LocalPoint>& pts);

}  // namespace cinedrone::planner
