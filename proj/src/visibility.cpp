#include <algorithm>
#include <cmath>
#include <numbers>

#include "morp/gridmap.hpp"

namespace morp {

namespace {

struct Offset {
  int dx;
  int dy;
};

// Offsets inside the closed disc of radius range/resolution cells, row-major order.
std::vector<Offset> disc_offsets(double radius_cells) {
  const int r = static_cast<int>(std::floor(radius_cells + 1e-9));
  const double limit = radius_cells * radius_cells * (1.0 + 1e-12) + 1e-9;
  std::vector<Offset> out;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if (static_cast<double>(dx * dx + dy * dy) <= limit) out.push_back({dx, dy});
    }
  }
  return out;
}

double radius_in_cells(const OccupancyMap& map, const FovSpec& fov) { return fov.range_m / map.resolution(); }

}  // namespace

bool line_of_sight(const OccupancyMap& map, Cell a, Cell b) {
  const int dx = b.x - a.x;
  const int dy = b.y - a.y;
  const int nx = std::abs(dx);
  const int ny = std::abs(dy);
  const int sx = dx > 0 ? 1 : -1;
  const int sy = dy > 0 ? 1 : -1;
  int x = a.x;
  int y = a.y;
  int ix = 0;
  int iy = 0;
  auto blocked = [&](int cx, int cy) {
    const Cell c{cx, cy};
    if (c == b) return false;
    return !map.navigable(c);
  };
  while (ix < nx || iy < ny) {
    const long long decision = static_cast<long long>(1 + 2 * ix) * ny - static_cast<long long>(1 + 2 * iy) * nx;
    if (decision == 0) {
      // Segment passes exactly through a cell corner: both side cells are crossed.
      if (blocked(x + sx, y) || blocked(x, y + sy)) return false;
      x += sx;
      y += sy;
      ++ix;
      ++iy;
    } else if (decision < 0) {
      x += sx;
      ++ix;
    } else {
      y += sy;
      ++iy;
    }
    if (blocked(x, y)) return false;
  }
  return true;
}

bool within_cone(Cell a, Cell b, Heading heading, double theta_deg) {
  if (theta_deg >= 360.0 || a == b) return true;
  const double bearing = std::atan2(static_cast<double>(b.x - a.x), static_cast<double>(a.y - b.y)) * 180.0 /
                         std::numbers::pi;
  double diff = bearing - 45.0 * heading_index(heading);
  while (diff > 180.0) diff -= 360.0;
  while (diff <= -180.0) diff += 360.0;
  return std::abs(diff) <= theta_deg / 2.0 + 1e-9;
}

std::vector<Cell> visible_cells(const OccupancyMap& map, const Pose& pose, const FovSpec& fov) {
  fov.validate();
  if (!map.navigable(pose.cell)) throw PreconditionError("visible_cells: pose on innavigable cell");
  std::vector<Cell> out;
  for (const Offset& o : disc_offsets(radius_in_cells(map, fov))) {
    const Cell c{pose.cell.x + o.dx, pose.cell.y + o.dy};
    if (!map.navigable(c)) continue;
    if (!within_cone(pose.cell, c, pose.heading, fov.theta_deg)) continue;
    if (!line_of_sight(map, pose.cell, c)) continue;
    out.push_back(c);
  }
  return out;
}

VisibilityTable::VisibilityTable(const OccupancyMap& layout, const FovSpec& fov) : fov_(fov), width_(layout.width()) {
  fov.validate();
  const std::vector<Offset> disc = disc_offsets(radius_in_cells(layout, fov));
  offsets_.assign(layout.size() + 1, 0);
  indices_.reserve(layout.navigable_count() * disc.size() / 3);
  for (std::size_t i = 0; i < layout.size(); ++i) {
    offsets_[i] = indices_.size();
    if (!layout.navigable_at(i)) continue;
    const Cell from = layout.cell_at(i);
    for (const Offset& o : disc) {
      const Cell c{from.x + o.dx, from.y + o.dy};
      if (!layout.navigable(c)) continue;
      if (!line_of_sight(layout, from, c)) continue;
      indices_.push_back(static_cast<std::uint32_t>(layout.index(c)));
    }
  }
  offsets_[layout.size()] = indices_.size();
  indices_.shrink_to_fit();
}

std::span<const std::uint32_t> VisibilityTable::visible_from(std::size_t i) const {
  return std::span<const std::uint32_t>(indices_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]);
}

void VisibilityTable::visible(std::size_t i, Heading heading, std::vector<std::uint32_t>& out) const {
  out.clear();
  const auto all = visible_from(i);
  if (omnidirectional()) {
    out.assign(all.begin(), all.end());
    return;
  }
  const Cell from{static_cast<int>(i % width_), static_cast<int>(i / width_)};
  for (std::uint32_t j : all) {
    const Cell c{static_cast<int>(j % width_), static_cast<int>(j / width_)};
    if (within_cone(from, c, heading, fov_.theta_deg)) out.push_back(j);
  }
}

}  // namespace morp
