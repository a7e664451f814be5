#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "morp/gridmap.hpp"
#include "morp/pathfind.hpp"
#include "morp/rng.hpp"

namespace morp {

// Unexplored navigable cells with at least one explored 8-neighbour, row-major.
std::vector<Cell> detect_frontiers(const OccupancyMap& map);

struct FrontierCandidate {
  Cell cell;
  double distance_m = 0.0;
  int gain = 0;
  GridPath path;
};

struct FrontierSet {
  std::vector<FrontierCandidate> candidates;
  bool empty() const { return candidates.empty(); }
  std::size_t size() const { return candidates.size(); }
};

inline constexpr int kDefaultClusters = 10;

enum class GainMode {
  AlongPath,   // newly seen cells over every pose on the path
  AtFrontier,  // newly seen cells from the frontier cell only
};

// Deterministic K-means (k-means++ seeding from a hash of the frontier set).
// Returns cluster labels per point and the number of clusters used.
struct Clustering {
  std::vector<int> labels;
  std::vector<double> cx;
  std::vector<double> cy;
  int k = 0;
};
Clustering kmeans_cells(const std::vector<Cell>& points, int k);

// Unexplored navigable cells that would enter the field of view along `path`.
int path_gain(const OccupancyMap& map, const VisibilityTable& visibility, const GridPath& path,
              Heading start_heading, GainMode mode = GainMode::AlongPath);

FrontierSet cluster_frontiers(const OccupancyMap& map, const VisibilityTable& visibility,
                              const std::vector<Cell>& frontiers, Pose agent, int k = kDefaultClusters,
                              GainMode mode = GainMode::AlongPath);

// Index into fs.candidates.
std::size_t choose_wfbe_r(const FrontierSet& fs);
std::size_t choose_wfbe_w(const FrontierSet& fs, double w);
// Uniform over unexplored navigable cells reachable from `from`.
Cell choose_rnd(const OccupancyMap& map, Cell from, Rng& rng);

struct ExplorePolicy {
  enum class Kind { Rnd, WfbeR, WfbeW };
  Kind kind = Kind::WfbeR;
  double w = 0.5;
  std::uint64_t seed = 0;

  // "rnd", "wfbe-r" or "wfbe-w:<w>".
  static ExplorePolicy parse(std::string_view text);
  std::string name() const;
  friend bool operator==(const ExplorePolicy&, const ExplorePolicy&) = default;
};

}  // namespace morp
