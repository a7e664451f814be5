#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "morp/gridmap.hpp"
#include "morp/types.hpp"

namespace morp {

inline constexpr double kSqrt2 = 1.4142135623730951;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Octile path cost as exact step counts. Two counts with equal value are the
// same counts (sqrt 2 is irrational), so comparisons through value() are exact
// for any grid that fits in memory.
struct StepCount {
  std::int32_t straight = 0;
  std::int32_t diagonal = 0;

  double value() const { return static_cast<double>(straight) + static_cast<double>(diagonal) * kSqrt2; }
  double meters(double resolution) const { return resolution * value(); }
  friend bool operator==(const StepCount&, const StepCount&) = default;
};

struct GridPath {
  std::vector<Cell> cells;
  double length_m = 0.0;
  StepCount steps;
};

// A move a -> step_cell(a, h) is legal iff the target is navigable and, for a
// diagonal, both orthogonal cells it squeezes between are navigable.
bool can_move(const OccupancyMap& map, Cell from, Heading h);

// A* with the octile heuristic. std::nullopt when `to` is unreachable.
std::optional<GridPath> shortest_path(const OccupancyMap& map, Cell from, Cell to);

// Full-grid single-source result (Dijkstra).
class DistanceField {
 public:
  DistanceField(const OccupancyMap& map, Cell source);

  Cell source() const { return source_; }
  bool reachable(Cell c) const;
  // Meters; kInfinity when unreachable.
  double distance_m(Cell c) const;
  StepCount steps(Cell c) const;
  std::optional<GridPath> path_to(Cell c) const;

 private:
  int width_ = 0;
  double resolution_ = kDefaultResolution;
  Cell source_;
  std::vector<StepCount> steps_;
  std::vector<std::int32_t> parent_;  // -1 unreached, self for source
};

DistanceField distance_field(const OccupancyMap& map, Cell source);

// Symmetric geodesic distance matrix in meters (kInfinity for disconnected pairs).
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

DistanceMatrix distance_matrix(const OccupancyMap& map, std::span<const Cell> locations);

struct ActionPlan {
  std::vector<Action> actions;
  Heading final_heading = Heading::N;
};

// Minimal turns (ties rotate clockwise) before each forward so every forward follows the path.
ActionPlan path_to_actions(const GridPath& path, Heading start_heading);

// Cells reachable from `from` under the move rule (flags indexed row-major).
std::vector<std::uint8_t> reachable_mask(const OccupancyMap& map, Cell from);

}  // namespace morp
