#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "morp/agents.hpp"

namespace morp {

struct SweepConfig {
  std::vector<SizeClass> size_classes{SizeClass::Medium, SizeClass::Large};
  std::vector<int> c_values{1, 3};
  std::vector<int> n_o_values{1, 3, 5, 10};
  std::vector<int> n_r_values{1, 3, 5};
  std::vector<std::string> policies{"wfbe-r"};
  int episodes_per_cell = 100;
  std::uint64_t seed = 0;
  int max_t = kDefaultMaxT;
  double max_dist = kDefaultMaxDist;
  FovSpec fov;
  // Generated layouts per size class; every cell draws its episodes from the whole pool.
  int maps_per_class = 4;
  int exact_bound = kDefaultExactBound;
  int oracle_exact_bound = 10;
  int heuristic_budget = kDefaultHeuristicBudget;
  std::int64_t low_step_cap = kDefaultLowStepCap;

  // Throws ConfigError.
  void validate() const;
};

struct PoolMap {
  SizeClass size = SizeClass::Medium;
  std::uint64_t seed = 0;
  OccupancyMap layout;
  std::shared_ptr<const VisibilityTable> visibility;
  std::vector<std::uint32_t> navigable;  // row-major indices of navigable cells
};

using MapPool = std::vector<PoolMap>;

// maps_per_class layouts per size class, seeds derived from `seed`. Visibility
// tables are built with `fov`, across `threads` workers.
MapPool build_map_pool(const std::vector<SizeClass>& sizes, int maps_per_class, std::uint64_t seed, const FovSpec& fov,
                       int threads = 1);

struct GeneratedEpisode {
  EpisodeSpec spec;
  std::size_t map_index = 0;
};

// One episode for (c, n_o, n_r, index). The draw depends on neither the policy
// nor c, so those are compared on identical episodes. Throws CapacityError when the
// chosen map has fewer than n_o + n_r + 1 navigable cells.
GeneratedEpisode generate_episode(const SweepConfig& config, const MapPool& pool, int c, int n_o, int n_r, int index);

// Every (c, n_o, n_r, index) in sweep order.
std::vector<GeneratedEpisode> generate_episodes(const SweepConfig& config, const MapPool& pool);

struct CellKey {
  std::string policy;
  int c = 0;
  int n_o = 0;
  int n_r = 0;

  friend bool operator==(const CellKey&, const CellKey&) = default;
};

struct EpisodeRow {
  CellKey cell;
  int index = 0;
  std::uint64_t seed = 0;
  SizeClass size = SizeClass::Medium;
  std::uint64_t map_seed = 0;
  double nav_area = 0.0;
  std::string status;
  bool stuck = false;
  double es = 0.0;
  double ror = 0.0;
  double sor = 0.0;
  double mc = 0.0;
  double espl = 0.0;
  double path_length = 0.0;
  double oracle_z = 0.0;
  bool oracle_exact = true;
  int high_actions = 0;
  std::int64_t low_steps = 0;
  int n_objects = 0;
  int initially_seen = 0;
  int discovered_in_plan = 0;
  int discovered_in_explore = 0;
  // Path length when the first object was seen; -1 when none was.
  double first_object_path = -1.0;

  friend bool operator==(const EpisodeRow&, const EpisodeRow&) = default;
};

struct CellAggregate {
  CellKey cell;
  int episodes = 0;
  double es = 0.0;
  double ror = 0.0;
  double sor = 0.0;
  double mc = 0.0;
  double espl = 0.0;
  // Objects first seen during a Plan action over objects not seen at spawn, pooled over the cell.
  double discovery_in_plan = 0.0;
  int stuck = 0;

  friend bool operator==(const CellAggregate&, const CellAggregate&) = default;
};

struct SweepResult {
  SweepConfig config;
  std::vector<EpisodeRow> rows;  // in cell order, then episode index
  std::vector<CellAggregate> cells;
};

// Worker count: MORP_THREADS when set, else `requested` when > 0, else the hardware concurrency.
int resolve_threads(int requested);

// Calls fn(i) for i in [0, n) across `threads` workers. The first exception is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

EpisodeRow make_row(const CellKey& key, int index, const GeneratedEpisode& ep, const MapPool& pool,
                    const EpisodeResult& result);

// Per-cell means in row order.
std::vector<CellAggregate> aggregate(const std::vector<EpisodeRow>& rows);

SweepResult run_sweep(const SweepConfig& config, int threads = 0);
SweepResult run_sweep(const SweepConfig& config, const MapPool& pool, int threads = 0);

struct ExploreRow {
  std::string policy;
  int n_o = 0;
  int index = 0;
  std::uint64_t seed = 0;
  double nav_area = 0.0;
  bool found_all = false;
  double total_path = 0.0;  // path length when the last object was seen (or at budget)
  double first_object_path = 0.0;

  friend bool operator==(const ExploreRow&, const ExploreRow&) = default;
};

struct ExploreSummary {
  std::string policy;
  int n_o = 0;
  int episodes = 0;
  double mean_total_path = 0.0;
  double mean_first_object_path = 0.0;
  double found_all_fraction = 0.0;
};

struct ExploreResult {
  SweepConfig config;
  std::vector<ExploreRow> rows;
  std::vector<ExploreSummary> summary;
};

// Exploration-only episodes per (policy, n_o), c and n_r taken from the first
// configured values.
ExploreResult run_exploration_benchmark(const SweepConfig& config, int threads = 0);
ExploreResult run_exploration_benchmark(const SweepConfig& config, const MapPool& pool, int threads = 0);

}  // namespace morp
