#include "cinedrone/planner/astar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "cinedrone/core/errors.hpp"

namespace cinedrone::planner {

OccupancyGrid::OccupancyGrid(const WorldMap& map, double cell) : map_(&map), cell_(cell) {
  if (!(cell > 0.0)) throw ValidationError("grid cell must be > 0");
  nx_ = static_cast<int>(std::floor((map.bounds.max_x - map.bounds.min_x) / cell + 1e-9)) + 1;
  ny_ = static_cast<int>(std::floor((map.bounds.max_y - map.bounds.min_y) / cell + 1e-9)) + 1;
  free_.assign(static_cast<std::size_t>(nx_) * ny_, 1);
  const double inflation = 0.5 * cell;
  for (const auto& zone : map.no_fly_zones) {
    const int i0 = std::max(0, static_cast<int>(std::floor((zone.lo.x() - inflation - map.bounds.min_x) / cell)));
    const int i1 = std::min(nx_ - 1, static_cast<int>(std::ceil((zone.hi.x() + inflation - map.bounds.min_x) / cell)));
    const int j0 = std::max(0, static_cast<int>(std::floor((zone.lo.y() - inflation - map.bounds.min_y) / cell)));
    const int j1 = std::min(ny_ - 1, static_cast<int>(std::ceil((zone.hi.y() + inflation - map.bounds.min_y) / cell)));
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i)
        if (free_[index(i, j)] && distance_to_polygon(position(i, j), zone) < inflation) free_[index(i, j)] = 0;
  }
}

bool OccupancyGrid::edge_free(int i, int j, int di, int dj) const {
  if (!free(i, j) || !free(i + di, j + dj)) return false;
  return segment_clear(*map_, position(i, j), position(i + di, j + dj));
}

std::optional<std::pair<int, int>> OccupancyGrid::snap(const Vec2& p) const {
  const double fi = (p.x() - map_->bounds.min_x) / cell_;
  const double fj = (p.y() - map_->bounds.min_y) / cell_;
  const int ci = static_cast<int>(std::lround(fi));
  const int cj = static_cast<int>(std::lround(fj));
  std::optional<std::pair<int, int>> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (int radius = 0; radius <= 4 && !best; ++radius) {
    for (int j = cj - radius; j <= cj + radius; ++j) {
      for (int i = ci - radius; i <= ci + radius; ++i) {
        if (std::max(std::abs(i - ci), std::abs(j - cj)) != radius || !free(i, j)) continue;
        const double d = (position(i, j) - p).norm();
        if (d < best_d && segment_clear(*map_, p, position(i, j))) {
          best_d = d;
          best = std::make_pair(i, j);
        }
      }
    }
  }
  return best;
}

double polyline_length(const std::vector<LocalPoint>& pts) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += (pts[i] - pts[i - 1]).norm();
  return len;
}

double PathResult::length() const { return polyline_length(waypoints); }

namespace {

std::vector<LocalPoint> smooth(const WorldMap& map, const std::vector<LocalPoint>& pts, double clearance) {
  std::vector<LocalPoint> out{pts.front()};
  std::size_t i = 0;
  while (i + 1 < pts.size()) {
    std::size_t j = pts.size() - 1;
    while (j > i + 1 && !segment_clear(map, pts[i].head<2>(), pts[j].head<2>(), clearance)) --j;
    out.push_back(pts[j]);
    i = j;
  }
  return out;
}

}  // namespace

PathResult astar_path(const OccupancyGrid& grid, const LocalPoint& start, const LocalPoint& goal) {
  const WorldMap& map = grid.map();
  for (const auto* p : {&start, &goal}) {
    if (!map.bounds.contains(p->head<2>())) throw NoPathError("endpoint outside map bounds");
    if (in_no_fly_zone(map, p->head<2>())) throw NoPathError("endpoint inside a no-fly zone");
  }
  const auto s = grid.snap(start.head<2>());
  const auto g = grid.snap(goal.head<2>());
  if (!s || !g) throw NoPathError("endpoint has no free grid node nearby");

  const int n = grid.nx() * grid.ny();
  const int start_idx = grid.index(s->first, s->second);
  const int goal_idx = grid.index(g->first, g->second);
  const Vec2 goal_pos = grid.position(g->first, g->second);

  std::vector<GridCost> cost(n);
  std::vector<std::uint8_t> reached(n, 0);
  std::vector<int> parent(n, -1);
  std::vector<std::uint8_t> closed(n, 0);

  using Entry = std::tuple<double, int>;  // f, node index (ties broken by index)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  cost[start_idx] = {};
  reached[start_idx] = 1;
  open.emplace((grid.position(s->first, s->second) - goal_pos).norm() / grid.cell(), start_idx);

  static constexpr int kDirs[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  while (!open.empty()) {
    const auto [f, idx] = open.top();
    open.pop();
    if (closed[idx]) continue;
    closed[idx] = 1;
    if (idx == goal_idx) break;
    const int i = idx % grid.nx(), j = idx / grid.nx();
    for (const auto& d : kDirs) {
      const int ni = i + d[0], nj = j + d[1];
      if (!grid.in_range(ni, nj)) continue;
      const int nidx = grid.index(ni, nj);
      if (closed[nidx] || !grid.edge_free(i, j, d[0], d[1])) continue;
      GridCost c = cost[idx];
      (d[0] != 0 && d[1] != 0) ? ++c.diagonal : ++c.straight;
      if (!reached[nidx] || c.units() < cost[nidx].units()) {
        cost[nidx] = c;
        reached[nidx] = 1;
        parent[nidx] = idx;
        const double h = (grid.position(ni, nj) - goal_pos).norm() / grid.cell();
        open.emplace(c.units() + h, nidx);
      }
    }
  }
  if (!closed[goal_idx]) throw NoPathError("goal unreachable");

  std::vector<int> chain;
  for (int v = goal_idx; v != -1; v = parent[v]) chain.push_back(v);
  std::reverse(chain.begin(), chain.end());

  PathResult out;
  out.grid_cost = cost[goal_idx];
  out.grid_path.push_back(start);
  for (int v : chain) {
    const Vec2 p = grid.position(v % grid.nx(), v / grid.nx());
    out.grid_path.emplace_back(p.x(), p.y(), start.z());
  }
  out.grid_path.push_back(goal);
  // drop lattice nodes coinciding with the endpoints
  if (out.grid_path.size() > 2 && (out.grid_path[1] - start).head<2>().norm() < 1e-9)
    out.grid_path.erase(out.grid_path.begin() + 1);
  if (out.grid_path.size() > 2 && (out.grid_path[out.grid_path.size() - 2] - goal).head<2>().norm() < 1e-9)
    out.grid_path.erase(out.grid_path.end() - 2);
  out.waypoints = smooth(map, out.grid_path, 0.25 * grid.cell());
  return out;
}

PathResult astar_path(const WorldMap& map, const LocalPoint& start, const LocalPoint& goal, double cell) {
  OccupancyGrid grid(map, cell);
  return astar_path(grid, start, goal);
}

}  // namespace cinedrone::planner
