#include "morp/pathfind.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>

namespace morp {

namespace {

struct OpenEntry {
  double priority;
  std::uint64_t seq;
  std::uint32_t index;
};

struct OpenGreater {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.priority != b.priority) return a.priority > b.priority;
    return a.seq > b.seq;
  }
};

using OpenList = std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenGreater>;

StepCount advance(StepCount s, int heading) {
  if (heading % 2 == 1) {
    ++s.diagonal;
  } else {
    ++s.straight;
  }
  return s;
}

double octile(Cell a, Cell b) {
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  const int lo = std::min(dx, dy);
  const int hi = std::max(dx, dy);
  return StepCount{hi - lo, lo}.value();
}

GridPath make_path(std::vector<Cell> cells, double resolution) {
  GridPath path;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (cells[i].x != cells[i - 1].x && cells[i].y != cells[i - 1].y) {
      ++path.steps.diagonal;
    } else {
      ++path.steps.straight;
    }
  }
  path.length_m = path.steps.meters(resolution);
  path.cells = std::move(cells);
  return path;
}

void require_navigable(const OccupancyMap& map, Cell c, const char* what) {
  if (!map.navigable(c)) throw PreconditionError(std::string(what) + ": innavigable cell");
}

}  // namespace

bool can_move(const OccupancyMap& map, Cell from, Heading h) {
  const Cell to = step_cell(from, h);
  if (!map.navigable(to)) return false;
  if (!is_diagonal(h)) return true;
  return map.navigable({to.x, from.y}) && map.navigable({from.x, to.y});
}

std::optional<GridPath> shortest_path(const OccupancyMap& map, Cell from, Cell to) {
  require_navigable(map, from, "shortest_path");
  require_navigable(map, to, "shortest_path");
  if (from == to) return make_path({from}, map.resolution());

  const std::size_t n = map.size();
  std::vector<StepCount> g(n);
  std::vector<double> g_value(n, kInfinity);
  std::vector<std::int32_t> parent(n, -1);
  OpenList open;
  std::uint64_t seq = 0;
  const std::size_t start = map.index(from);
  const std::size_t goal = map.index(to);
  g_value[start] = 0.0;
  parent[start] = static_cast<std::int32_t>(start);
  open.push({octile(from, to), seq++, static_cast<std::uint32_t>(start)});

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    const std::size_t cur = top.index;
    const Cell c = map.cell_at(cur);
    // Stale entry: a cheaper route to `cur` was pushed after this one.
    if (top.priority > g_value[cur] + octile(c, to)) continue;
    if (cur == goal) break;
    for (int h = 0; h < kHeadingCount; ++h) {
      if (!can_move(map, c, heading_from_index(h))) continue;
      const Cell nc = step_cell(c, heading_from_index(h));
      const std::size_t ni = map.index(nc);
      const StepCount ng = advance(g[cur], h);
      const double ngv = ng.value();
      if (ngv < g_value[ni]) {
        g[ni] = ng;
        g_value[ni] = ngv;
        parent[ni] = static_cast<std::int32_t>(cur);
        open.push({ngv + octile(nc, to), seq++, static_cast<std::uint32_t>(ni)});
      }
    }
  }
  if (parent[goal] < 0) return std::nullopt;

  std::vector<Cell> cells;
  for (std::size_t i = goal;; i = static_cast<std::size_t>(parent[i])) {
    cells.push_back(map.cell_at(i));
    if (i == start) break;
  }
  std::reverse(cells.begin(), cells.end());
  return make_path(std::move(cells), map.resolution());
}

DistanceField::DistanceField(const OccupancyMap& map, Cell source)
    : width_(map.width()), resolution_(map.resolution()), source_(source) {
  require_navigable(map, source, "distance_field");
  const std::size_t n = map.size();
  steps_.assign(n, StepCount{});
  parent_.assign(n, -1);
  std::vector<double> value(n, kInfinity);
  OpenList open;
  std::uint64_t seq = 0;
  const std::size_t start = map.index(source);
  value[start] = 0.0;
  parent_[start] = static_cast<std::int32_t>(start);
  open.push({0.0, seq++, static_cast<std::uint32_t>(start)});
  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    const std::size_t cur = top.index;
    if (top.priority > value[cur]) continue;
    const Cell c = map.cell_at(cur);
    for (int h = 0; h < kHeadingCount; ++h) {
      if (!can_move(map, c, heading_from_index(h))) continue;
      const std::size_t ni = map.index(step_cell(c, heading_from_index(h)));
      const StepCount ng = advance(steps_[cur], h);
      const double ngv = ng.value();
      if (ngv < value[ni]) {
        value[ni] = ngv;
        steps_[ni] = ng;
        parent_[ni] = static_cast<std::int32_t>(cur);
        open.push({ngv, seq++, static_cast<std::uint32_t>(ni)});
      }
    }
  }
}

bool DistanceField::reachable(Cell c) const {
  if (c.x < 0 || c.y < 0 || c.x >= width_) return false;
  const std::size_t i = static_cast<std::size_t>(c.y) * width_ + c.x;
  return i < parent_.size() && parent_[i] >= 0;
}

double DistanceField::distance_m(Cell c) const {
  if (!reachable(c)) return kInfinity;
  return steps(c).meters(resolution_);
}

StepCount DistanceField::steps(Cell c) const { return steps_[static_cast<std::size_t>(c.y) * width_ + c.x]; }

std::optional<GridPath> DistanceField::path_to(Cell c) const {
  if (!reachable(c)) return std::nullopt;
  std::vector<Cell> cells;
  const std::size_t start = static_cast<std::size_t>(source_.y) * width_ + source_.x;
  for (std::size_t i = static_cast<std::size_t>(c.y) * width_ + c.x;; i = static_cast<std::size_t>(parent_[i])) {
    cells.push_back({static_cast<int>(i % width_), static_cast<int>(i / width_)});
    if (i == start) break;
  }
  std::reverse(cells.begin(), cells.end());
  return make_path(std::move(cells), resolution_);
}

DistanceField distance_field(const OccupancyMap& map, Cell source) { return DistanceField(map, source); }

DistanceMatrix distance_matrix(const OccupancyMap& map, std::span<const Cell> locations) {
  for (const Cell& c : locations) require_navigable(map, c, "distance_matrix");
  DistanceMatrix m(locations.size());
  for (std::size_t i = 0; i < locations.size(); ++i) {
    // Later rows are filled from earlier fields; identical cells reuse row i.
    bool needs_field = false;
    for (std::size_t j = i + 1; j < locations.size(); ++j) needs_field |= locations[j] != locations[i];
    if (!needs_field) continue;
    const DistanceField field(map, locations[i]);
    for (std::size_t j = i + 1; j < locations.size(); ++j) m.set(i, j, field.distance_m(locations[j]));
  }
  return m;
}

ActionPlan path_to_actions(const GridPath& path, Heading start_heading) {
  ActionPlan plan;
  Heading heading = start_heading;
  for (std::size_t i = 1; i < path.cells.size(); ++i) {
    const Heading want = heading_between(path.cells[i - 1], path.cells[i]);
    const int cw = ((heading_index(want) - heading_index(heading)) % 8 + 8) % 8;
    if (cw <= 4) {
      for (int k = 0; k < cw; ++k) plan.actions.push_back(Action::Right);
    } else {
      for (int k = 0; k < 8 - cw; ++k) plan.actions.push_back(Action::Left);
    }
    heading = want;
    plan.actions.push_back(Action::Forward);
  }
  plan.final_heading = heading;
  return plan;
}

std::vector<std::uint8_t> reachable_mask(const OccupancyMap& map, Cell from) {
  require_navigable(map, from, "reachable_mask");
  std::vector<std::uint8_t> mask(map.size(), 0);
  std::vector<std::size_t> stack{map.index(from)};
  mask[stack.back()] = 1;
  while (!stack.empty()) {
    const Cell c = map.cell_at(stack.back());
    stack.pop_back();
    for (int h = 0; h < kHeadingCount; ++h) {
      if (!can_move(map, c, heading_from_index(h))) continue;
      const std::size_t ni = map.index(step_cell(c, heading_from_index(h)));
      if (mask[ni]) continue;
      mask[ni] = 1;
      stack.push_back(ni);
    }
  }
  return mask;
}

}  // namespace morp
