#include "morp/agents.hpp"

#include <algorithm>

namespace morp {

RoutePlan solve_route(const CvrpInstance& inst, const SolverOptions& options, bool* exact) {
  const bool use_exact = inst.n_s <= std::min(options.exact_bound, kMaxExactBound);
  if (exact) *exact = use_exact;
  return use_exact ? solve_exact(inst, options.exact_bound) : solve_heuristic(inst, options.heuristic_budget);
}

OracleBaseline oracle_run(const EpisodeSpec& spec, const OccupancyMap& layout, const SolverOptions& options) {
  spec.validate(layout);
  CvrpInstance inst;
  inst.capacity = spec.capacity;
  inst.locations.push_back(spec.spawn.cell);
  for (const ObjectSpec& o : spec.objects) {
    const Cell receptacle = spec.receptacle_of(o.id);
    if (o.start == receptacle) continue;
    inst.locations.push_back(o.start);
    inst.locations.push_back(receptacle);
    inst.held.push_back(0);
    inst.object_ids.push_back(o.id);
  }
  inst.n_s = static_cast<int>(inst.held.size());
  inst.dist = distance_matrix(layout, inst.locations);

  OracleBaseline out;
  out.plan = solve_route(inst, options, &out.exact);
  out.z = out.plan.cost;
  return out;
}

std::string_view high_level_name(HighLevelKind k) { return k == HighLevelKind::Plan ? "plan" : "explore"; }

HeuristicAgent::HeuristicAgent(AgentConfig config, std::uint64_t episode_seed)
    : config_(std::move(config)), rng_(derive_seed({episode_seed, config_.policy.seed, 0x726e64ULL})) {}

std::optional<HighLevelAction> HeuristicAgent::next(const Episode& episode) {
  if (config_.explore_only) {
    if (episode.seen_count() == episode.object_count()) return std::nullopt;
    return explore_action(episode);
  }
  const bool pending = !episode.pending_objects().empty() || episode.agent().held_count() > 0;
  if (pending) return plan_action(episode);
  if (episode.rearranged_count() < episode.object_count()) return explore_action(episode);
  return std::nullopt;
}

HighLevelAction HeuristicAgent::plan_action(const Episode& episode) const {
  const CvrpInstance inst = build_instance(episode);
  const RoutePlan plan = solve_route(inst, config_.planner);
  const Cell here = episode.agent().pose.cell;
  // Held pickups are formal visits at the agent's cell; the first real visit is the waypoint.
  Cell target = here;
  for (std::size_t k = 1; k < plan.order.size(); ++k) {
    const int loc = plan.order[k];
    if (CvrpInstance::is_pickup(loc) && inst.held[CvrpInstance::object_of(loc)]) continue;
    target = inst.locations[static_cast<std::size_t>(loc)];
    break;
  }
  std::optional<GridPath> path = shortest_path(episode.map(), here, target);
  if (!path) throw Error("plan waypoint unreachable (spec invariants violated)");
  return {HighLevelKind::Plan, target, std::move(*path)};
}

HighLevelAction HeuristicAgent::explore_action(const Episode& episode) {
  const OccupancyMap& map = episode.map();
  const Pose pose = episode.agent().pose;
  Cell target = pose.cell;
  bool chosen = false;
  if (config_.policy.kind != ExplorePolicy::Kind::Rnd) {
    const std::vector<Cell> frontiers = detect_frontiers(map);
    if (!frontiers.empty()) {
      const FrontierSet fs =
          cluster_frontiers(map, episode.visibility(), frontiers, pose, config_.clusters, config_.gain_mode);
      if (!fs.empty()) {
        const std::size_t k = config_.policy.kind == ExplorePolicy::Kind::WfbeR ? choose_wfbe_r(fs)
                                                                                : choose_wfbe_w(fs, config_.policy.w);
        return {HighLevelKind::Explore, fs.candidates[k].cell, fs.candidates[k].path};
      }
    }
  }
  try {
    target = choose_rnd(map, pose.cell, rng_);
    chosen = true;
  } catch (const PreconditionError&) {
    chosen = false;
  }
  if (!chosen) throw StuckError("no reachable unexplored cell while objects remain");
  std::optional<GridPath> path = shortest_path(map, pose.cell, target);
  if (!path) throw StuckError("exploration target unreachable");
  return {HighLevelKind::Explore, target, std::move(*path)};
}

ExecOutcome HeuristicAgent::execute(Episode& episode, const HighLevelAction& action) const {
  ExecOutcome out;
  episode.begin_high_level_action();
  episode.set_activity(action.kind == HighLevelKind::Plan ? Activity::Plan : Activity::Explore);
  const ActionPlan steps = path_to_actions(action.path, episode.agent().pose.heading);
  const std::size_t seen_before = episode.seen_count();
  const double start_length = episode.agent().path_length;
  const double max_dist = episode.spec().max_dist;

  for (std::size_t i = 0; i < steps.actions.size(); ++i) {
    if (episode.status() != EpisodeStatus::Running) break;
    episode.step(steps.actions[i]);
    out.traveled = episode.agent().path_length - start_length;
    if (i + 1 == steps.actions.size()) break;
    if (episode.status() != EpisodeStatus::Running) break;
    if (action.kind == HighLevelKind::Plan && episode.seen_count() > seen_before) {
      out.replanned = true;
      break;
    }
    if (steps.actions[i] == Action::Forward && out.traveled >= max_dist) {
      out.budget_hit = true;
      break;
    }
  }
  out.reached = episode.agent().pose.cell == action.target;
  if (out.reached) out.replanned = false;
  if (out.reached && action.kind == HighLevelKind::Plan && episode.status() == EpisodeStatus::Running) {
    episode.step(Action::GrabDrop);
  }
  episode.set_activity(Activity::Idle);
  episode.check_termination();
  return out;
}

namespace {

void fill_discovery(const Episode& ep, EpisodeResult& r) {
  r.n_objects = static_cast<int>(ep.object_count());
  for (const auto& a : ep.first_seen_activity()) {
    if (!a) continue;
    if (*a == Activity::Init) ++r.initially_seen;
    if (*a == Activity::Plan) ++r.discovered_in_plan;
    if (*a == Activity::Explore) ++r.discovered_in_explore;
  }
  r.all_seen = ep.seen_count() == ep.object_count();
  r.first_object_path = ep.first_object_path();
  r.all_seen_path = ep.all_seen_path();
  r.path_length = ep.agent().path_length;
  r.high_actions = ep.agent().high_actions;
  r.low_steps = ep.agent().low_steps;
  r.nav_area = ep.map().nav_area_m2();
}

}  // namespace

EpisodeResult run_episode(const EpisodeSpec& spec, const OccupancyMap& layout,
                          std::shared_ptr<const VisibilityTable> visibility, const AgentConfig& config,
                          const RunOptions& options) {
  EpisodeResult result;
  Episode ep(spec, layout, std::move(visibility));
  ep.set_trace_enabled(options.keep_trace);
  const OracleBaseline oracle = oracle_run(spec, layout, options.oracle);
  result.oracle_z = oracle.z;
  result.oracle_exact = oracle.exact;

  HeuristicAgent agent(config, spec.seed);
  while (ep.check_termination() == EpisodeStatus::Running) {
    std::optional<HighLevelAction> hla;
    try {
      hla = agent.next(ep);
    } catch (const StuckError& e) {
      result.stuck = true;
      result.error = e.what();
      break;
    }
    if (!hla) break;
    HighLevelLogEntry entry;
    entry.index = ep.agent().high_actions;
    entry.kind = hla->kind;
    entry.target = hla->target;
    entry.pending_before = static_cast<int>(ep.pending_objects().size());
    entry.held_before = ep.agent().held_count();
    entry.outcome = agent.execute(ep, *hla);
    result.high_level_log.push_back(entry);
  }

  fill_discovery(ep, result);
  // Explore-only runs and stuck runs stop while the simulator still reports running.
  result.status = ep.status() == EpisodeStatus::Running ? EpisodeStatus::Timeout : ep.status();
  if (config.explore_only && result.all_seen) result.status = EpisodeStatus::Success;
  if (ep.status() != EpisodeStatus::Running) {
    result.metrics = ep.compute_metrics(oracle.z);
  } else {
    const std::size_t n = ep.object_count();
    result.metrics.es = 0.0;
    result.metrics.ror = n == 0 ? 1.0 : static_cast<double>(ep.rearranged_count()) / static_cast<double>(n);
    result.metrics.sor = n == 0 ? 1.0 : static_cast<double>(ep.seen_count()) / static_cast<double>(n);
    result.metrics.mc = ep.map().coverage();
    result.metrics.espl = 0.0;
  }
  if (options.keep_trace) result.trace = ep.trace();
  return result;
}

EpisodeResult run_oracle_episode(const EpisodeSpec& spec, const OccupancyMap& layout,
                                 std::shared_ptr<const VisibilityTable> visibility, const RunOptions& options) {
  EpisodeResult result;
  Episode ep(spec, layout, std::move(visibility));
  ep.set_trace_enabled(options.keep_trace);
  const OracleBaseline oracle = oracle_run(spec, layout, options.oracle);
  result.oracle_z = oracle.z;
  result.oracle_exact = oracle.exact;

  // Location cells of the oracle instance, rebuilt in the same order as oracle_run.
  std::vector<Cell> cells{spec.spawn.cell};
  for (const ObjectSpec& o : spec.objects) {
    const Cell receptacle = spec.receptacle_of(o.id);
    if (o.start == receptacle) continue;
    cells.push_back(o.start);
    cells.push_back(receptacle);
  }
  for (std::size_t k = 1; k < oracle.plan.order.size(); ++k) {
    if (ep.check_termination() != EpisodeStatus::Running) break;
    const Cell target = cells[static_cast<std::size_t>(oracle.plan.order[k])];
    std::optional<GridPath> path = shortest_path(ep.map(), ep.agent().pose.cell, target);
    if (!path) throw Error("oracle waypoint unreachable");
    ep.begin_high_level_action();
    ep.set_activity(Activity::Plan);
    for (Action a : path_to_actions(*path, ep.agent().pose.heading).actions) {
      if (ep.status() != EpisodeStatus::Running) break;
      ep.step(a);
    }
    if (ep.status() == EpisodeStatus::Running) ep.step(Action::GrabDrop);
  }
  ep.check_termination();
  fill_discovery(ep, result);
  result.status = ep.status() == EpisodeStatus::Running ? EpisodeStatus::Timeout : ep.status();
  if (ep.status() != EpisodeStatus::Running) result.metrics = ep.compute_metrics(oracle.z);
  if (options.keep_trace) result.trace = ep.trace();
  return result;
}

}  // namespace morp
