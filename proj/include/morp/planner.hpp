#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "morp/gridmap.hpp"
#include "morp/pathfind.hpp"
#include "morp/rng.hpp"

namespace morp {

class Episode;

// Single-vehicle capacitated pickup-and-delivery instance. Location 0 is the
// agent; object i has pickup 2i+1 and dropoff 2i+2. Held objects have their
// pickup at the agent's cell and must be (formally) picked up first.
struct CvrpInstance {
  int n_s = 0;
  std::vector<Cell> locations;
  DistanceMatrix dist;
  int capacity = 1;
  std::vector<std::uint8_t> held;  // per object
  std::vector<int> object_ids;     // episode object id per instance object (may be empty)

  static constexpr int pickup(int object) { return 2 * object + 1; }
  static constexpr int dropoff(int object) { return 2 * object + 2; }
  static constexpr int object_of(int location) { return (location - 1) / 2; }
  static constexpr bool is_pickup(int location) { return location % 2 == 1; }

  int location_count() const { return 2 * n_s + 1; }
  int held_count() const;
  // Throws PreconditionError on malformed instances.
  void validate() const;
};

struct RoutePlan {
  std::vector<int> order;  // visit order; order[0] == 0
  double cost = 0.0;
};

// Sum of tau along the order, accumulated front to back.
double route_cost(const CvrpInstance& inst, const std::vector<int>& order);

inline constexpr int kDefaultExactBound = 6;
// Dense state tables grow as 3^n_s; beyond this the exact solver refuses.
inline constexpr int kMaxExactBound = 11;
inline constexpr int kDefaultHeuristicBudget = 50;

// Globally optimal; ties resolved to the lexicographically smallest order.
// Throws SizeError when n_s > bound.
RoutePlan solve_exact(const CvrpInstance& inst, int bound = kDefaultExactBound);

// Parallel cheapest insertion, local search (pair relocation, segment
// relocation, segment reversal), then ruin-and-recreate over object pairs.
// Stops when nothing improves or after `budget` accepted improvements.
RoutePlan solve_heuristic(const CvrpInstance& inst, int budget = kDefaultHeuristicBudget);

// Instance over the episode's seen-and-unrearranged objects (held included).
// Throws EmptyInstanceError when there is nothing to plan.
CvrpInstance build_instance(const Episode& episode);

// Random instance on `map`: agent, n_s pickups and n_r receptacles on navigable
// cells; the first `n_held` objects are held (pickup at the agent cell).
CvrpInstance random_instance(const OccupancyMap& map, Rng& rng, int n_s, int capacity, int n_held, int n_r = 3);

std::string dump_instance(const CvrpInstance& inst);
CvrpInstance load_instance(const std::string& text);

struct TimingRow {
  int n_o = 0;
  int c = 0;
  std::string solver;
  double median_ms = 0.0;
  double p90_ms = 0.0;
};

struct TimingSweepConfig {
  std::vector<int> n_o_values{1, 2, 3, 4, 5};
  std::vector<int> c_values{1, 3};
  int instances_per_cell = 20;
  std::uint64_t seed = 0;
  int exact_bound = kDefaultExactBound;
  int heuristic_budget = kDefaultHeuristicBudget;
  // Each instance is re-solved until this much wall time has elapsed; the per-solve mean is recorded.
  double min_sample_ms = 0.5;
};

std::vector<TimingRow> solver_timing_sweep(const TimingSweepConfig& config);
void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows);

}  // namespace morp
