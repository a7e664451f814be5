#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morp/types.hpp"

namespace morp {

enum class CellState : std::int8_t { Innavigable = -1, UnexploredNavigable = 0, ExploredNavigable = 1 };

inline constexpr double kDefaultResolution = 0.1;

// 2D occupancy grid with an exploration overlay. Navigable cells are either
// unexplored or explored; exploration only ever moves unexplored -> explored.
class OccupancyMap {
 public:
  OccupancyMap() = default;
  // All cells start innavigable.
  OccupancyMap(int width, int height, double resolution = kDefaultResolution);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  std::size_t size() const { return cells_.size(); }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.y) * width_ + c.x; }
  Cell cell_at(std::size_t index) const {
    return {static_cast<int>(index % width_), static_cast<int>(index / width_)};
  }

  CellState state(Cell c) const { return cells_[index(c)]; }
  CellState state_at(std::size_t i) const { return cells_[i]; }
  bool navigable(Cell c) const { return in_bounds(c) && cells_[index(c)] != CellState::Innavigable; }
  bool navigable_at(std::size_t i) const { return cells_[i] != CellState::Innavigable; }
  bool explored(Cell c) const { return in_bounds(c) && cells_[index(c)] == CellState::ExploredNavigable; }

  // Layout edits (generation/loading). Resets exploration of the edited cell.
  void set_navigable(Cell c, bool navigable);
  // Explores one navigable cell; returns true if it flipped.
  bool explore(std::size_t i);
  // Clears the exploration overlay.
  void reset_exploration();

  std::size_t navigable_count() const { return navigable_count_; }
  std::size_t explored_count() const { return explored_count_; }
  double nav_area_m2() const { return static_cast<double>(navigable_count_) * resolution_ * resolution_; }
  // Map coverage: explored / navigable.
  double coverage() const;

  std::span<const CellState> cells() const { return cells_; }
  const std::int8_t* raw() const { return reinterpret_cast<const std::int8_t*>(cells_.data()); }

  std::vector<Cell> navigable_cells() const;

  // Same layout and exploration state.
  friend bool operator==(const OccupancyMap& a, const OccupancyMap& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.resolution_ == b.resolution_ && a.cells_ == b.cells_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = kDefaultResolution;
  std::vector<CellState> cells_;
  std::size_t navigable_count_ = 0;
  std::size_t explored_count_ = 0;
};

// '#' innavigable, '.' navigable (unexplored), 'o' explored navigable.
// An optional first line "# resolution=<meters>" sets the resolution.
OccupancyMap load_map(std::string_view text);
OccupancyMap load_map_file(const std::string& path);
std::string save_map(const OccupancyMap& map, bool with_exploration = true);
void save_map_file(const OccupancyMap& map, const std::string& path, bool with_exploration = true);

enum class SizeClass { Small, Medium, Large };

std::string_view size_class_name(SizeClass s);
SizeClass parse_size_class(std::string_view name);
// Mean navigable area of each class in m^2.
double size_class_target_area(SizeClass s);

// Rooms-and-corridors layout from recursive binary space partitioning on a
// 200x150 canvas. Deterministic in (seed, size); the navigable region is a
// single 4-connected component with area within +-30% of the class target.
OccupancyMap generate_map(std::uint64_t seed, SizeClass size);

struct FovSpec {
  double theta_deg = 360.0;
  double range_m = 2.0;

  void validate() const;
  friend bool operator==(const FovSpec&, const FovSpec&) = default;
};

// True iff no innavigable cell lies strictly between a and b on the supercover
// line joining their centres (cells touched only at a corner count as crossed).
bool line_of_sight(const OccupancyMap& map, Cell a, Cell b);

// True iff the bearing a -> b lies inside the closed cone of `fov` around `heading`.
bool within_cone(Cell a, Cell b, Heading heading, double theta_deg);

// Cells visible from `pose`, sorted row-major. Always contains the pose cell.
std::vector<Cell> visible_cells(const OccupancyMap& map, const Pose& pose, const FovSpec& fov);

// Precomputed omnidirectional visibility for every navigable cell of a fixed
// layout. Immutable after construction and shared across episodes on that layout.
class VisibilityTable {
 public:
  VisibilityTable(const OccupancyMap& layout, const FovSpec& fov);

  const FovSpec& fov() const { return fov_; }
  int width() const { return width_; }
  // Row-major map indices visible from map index `i` with theta = 360.
  std::span<const std::uint32_t> visible_from(std::size_t i) const;
  // Applies the cone of the table's fov; result row-major.
  void visible(std::size_t i, Heading heading, std::vector<std::uint32_t>& out) const;
  bool omnidirectional() const { return fov_.theta_deg >= 360.0; }

 private:
  FovSpec fov_;
  int width_ = 0;
  std::vector<std::uint64_t> offsets_;  // per map cell, into indices_
  std::vector<std::uint32_t> indices_;
};

// Flips every unexplored cell in `cells` to explored; returns how many flipped.
std::size_t mark_explored(OccupancyMap& map, std::span<const Cell> cells);

struct MapStats {
  double nav_area = 0.0;
  double nav_complexity = 1.0;
};

inline constexpr std::size_t kDefaultComplexityPairs = 2000;

// nav_complexity is the maximum geodesic/euclidean ratio over `sample_pairs`
// uniformly sampled navigable pairs.
MapStats map_stats(const OccupancyMap& map, std::size_t sample_pairs = kDefaultComplexityPairs,
                   std::uint64_t seed = 0);

// Number of connected navigable components (4- or 8-connectivity).
std::size_t count_components(const OccupancyMap& map, bool eight_connected);

}  // namespace morp
