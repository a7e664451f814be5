#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "morp/explore.hpp"
#include "morp/planner.hpp"
#include "morp/sim.hpp"

namespace morp {

// No reachable exploration target while objects remain undiscovered.
class StuckError : public Error {
 public:
  using Error::Error;
};

struct SolverOptions {
  int exact_bound = kDefaultExactBound;
  int heuristic_budget = kDefaultHeuristicBudget;
};

// Solves with solve_exact when n_s is within the bound, solve_heuristic otherwise.
RoutePlan solve_route(const CvrpInstance& inst, const SolverOptions& options, bool* exact = nullptr);

struct OracleBaseline {
  double z = 0.0;
  RoutePlan plan;
  bool exact = true;  // false when z came from the heuristic solver (an upper bound)
};

// Full-observability baseline over the initially misplaced objects.
OracleBaseline oracle_run(const EpisodeSpec& spec, const OccupancyMap& layout, const SolverOptions& options);

enum class HighLevelKind { Explore, Plan };

std::string_view high_level_name(HighLevelKind k);

struct HighLevelAction {
  HighLevelKind kind = HighLevelKind::Explore;
  Cell target;
  GridPath path;
};

struct ExecOutcome {
  bool reached = false;
  bool budget_hit = false;
  bool replanned = false;
  double traveled = 0.0;
};

struct HighLevelLogEntry {
  int index = 0;
  HighLevelKind kind = HighLevelKind::Explore;
  Cell target;
  ExecOutcome outcome;
  int pending_before = 0;
  int held_before = 0;
};

struct AgentConfig {
  ExplorePolicy policy;
  SolverOptions planner;
  int clusters = kDefaultClusters;
  GainMode gain_mode = GainMode::AlongPath;
  // Find every object but never plan; ends once all objects are seen.
  bool explore_only = false;
};

// Greedy modular agent: plan whenever a seen object still needs rearranging
// (or something is held), explore otherwise.
class HeuristicAgent {
 public:
  HeuristicAgent(AgentConfig config, std::uint64_t episode_seed);

  const AgentConfig& config() const { return config_; }

  // std::nullopt when there is nothing left to do. Throws StuckError.
  std::optional<HighLevelAction> next(const Episode& episode);
  ExecOutcome execute(Episode& episode, const HighLevelAction& action) const;

 private:
  HighLevelAction plan_action(const Episode& episode) const;
  HighLevelAction explore_action(const Episode& episode);

  AgentConfig config_;
  Rng rng_;
};

struct EpisodeResult {
  EpisodeStatus status = EpisodeStatus::Running;
  EpisodeMetrics metrics;
  double path_length = 0.0;
  double oracle_z = 0.0;
  bool oracle_exact = true;
  int high_actions = 0;
  std::int64_t low_steps = 0;
  bool stuck = false;
  std::string error;
  int n_objects = 0;
  int initially_seen = 0;
  int discovered_in_plan = 0;
  int discovered_in_explore = 0;
  bool all_seen = false;
  std::optional<double> first_object_path;
  std::optional<double> all_seen_path;
  double nav_area = 0.0;
  std::vector<HighLevelLogEntry> high_level_log;
  std::vector<TraceRow> trace;
};

struct RunOptions {
  bool keep_trace = false;
  // Exact bound used for the oracle baseline (kept separate from the agent's replanning bound).
  SolverOptions oracle{10, kDefaultHeuristicBudget};
};

EpisodeResult run_episode(const EpisodeSpec& spec, const OccupancyMap& layout,
                          std::shared_ptr<const VisibilityTable> visibility, const AgentConfig& config,
                          const RunOptions& options = {});

// Oracle agent executed in the simulator: follows the oracle plan with full knowledge.
EpisodeResult run_oracle_episode(const EpisodeSpec& spec, const OccupancyMap& layout,
                                 std::shared_ptr<const VisibilityTable> visibility, const RunOptions& options = {});

}  // namespace morp
