#include "morp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace morp {

void SweepConfig::validate() const {
  if (size_classes.empty()) throw ConfigError("size_classes must be non-empty");
  if (c_values.empty()) throw ConfigError("c_values must be non-empty");
  if (n_o_values.empty()) throw ConfigError("n_o_values must be non-empty");
  if (n_r_values.empty()) throw ConfigError("n_r_values must be non-empty");
  if (policies.empty()) throw ConfigError("policies must be non-empty");
  if (episodes_per_cell < 1) throw ConfigError("episodes_per_cell must be >= 1");
  for (int c : c_values) {
    if (c < 1) throw ConfigError("capacity values must be >= 1");
  }
  for (int n : n_o_values) {
    if (n < 0) throw ConfigError("n_o values must be >= 0");
  }
  for (int n : n_r_values) {
    if (n < 1) throw ConfigError("n_r values must be >= 1");
  }
  for (const std::string& p : policies) ExplorePolicy::parse(p);
  if (max_t < 1) throw ConfigError("max_t must be >= 1");
  if (!(max_dist > 0.0)) throw ConfigError("max_dist must be > 0");
  if (maps_per_class < 1) throw ConfigError("maps_per_class must be >= 1");
  if (exact_bound < 0 || exact_bound > kMaxExactBound) throw ConfigError("exact_bound out of range");
  if (oracle_exact_bound < 0 || oracle_exact_bound > kMaxExactBound) {
    throw ConfigError("oracle_exact_bound out of range");
  }
  if (heuristic_budget < 0) throw ConfigError("heuristic_budget must be >= 0");
  if (low_step_cap < 1) throw ConfigError("low_step_cap must be >= 1");
  try {
    fov.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

int resolve_threads(int requested) {
  if (const char* env = std::getenv("MORP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  if (requested > 0) return requested;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, threads)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

MapPool build_map_pool(const std::vector<SizeClass>& sizes, int maps_per_class, std::uint64_t seed, const FovSpec& fov,
                       int threads) {
  if (sizes.empty() || maps_per_class < 1) throw ConfigError("map pool needs at least one size class and map");
  MapPool pool(sizes.size() * static_cast<std::size_t>(maps_per_class));
  parallel_for(pool.size(), threads, [&](std::size_t i) {
    PoolMap& m = pool[i];
    m.size = sizes[i / static_cast<std::size_t>(maps_per_class)];
    m.seed = derive_seed({seed, static_cast<std::uint64_t>(m.size), i % static_cast<std::size_t>(maps_per_class)});
    m.layout = generate_map(m.seed, m.size);
    m.visibility = std::make_shared<const VisibilityTable>(m.layout, fov);
    for (std::size_t k = 0; k < m.layout.size(); ++k) {
      if (m.layout.navigable_at(k)) m.navigable.push_back(static_cast<std::uint32_t>(k));
    }
  });
  return pool;
}

namespace {

constexpr int kMaxSpecAttempts = 100;

EpisodeSpec draw_spec(const SweepConfig& config, const PoolMap& map, int c, int n_o, int n_r, Rng& rng) {
  const std::size_t nav = map.navigable.size();
  if (nav < static_cast<std::size_t>(n_o + n_r + 1)) {
    throw CapacityError("map has " + std::to_string(nav) + " navigable cells, fewer than n_o + n_r + 1");
  }
  auto cell = [&](std::size_t k) { return map.layout.cell_at(map.navigable[k]); };

  EpisodeSpec spec;
  spec.map_ref.size = map.size;
  spec.map_ref.seed = map.seed;
  spec.capacity = c;
  spec.fov = config.fov;
  spec.max_t = config.max_t;
  spec.max_dist = config.max_dist;
  spec.low_step_cap = config.low_step_cap;

  // Receptacles on distinct cells, redrawing collisions.
  std::vector<std::size_t> taken;
  for (int r = 0; r < n_r; ++r) {
    std::size_t k;
    do {
      k = rng.index(nav);
    } while (std::find(taken.begin(), taken.end(), k) != taken.end());
    taken.push_back(k);
    spec.receptacles.push_back({r, cell(k)});
  }
  for (int i = 0; i < n_o; ++i) spec.objects.push_back({i, i % n_r, cell(rng.index(nav))});
  spec.spawn.cell = cell(rng.index(nav));
  spec.spawn.heading = heading_from_index(static_cast<int>(rng.index(8)));
  return spec;
}

}  // namespace

GeneratedEpisode generate_episode(const SweepConfig& config, const MapPool& pool, int c, int n_o, int n_r, int index) {
  if (pool.empty()) throw PreconditionError("empty map pool");
  // Capacity is left out of the seed: cells that differ only in c replay the same layouts and placements.
  const std::uint64_t seed = derive_seed({config.seed, static_cast<std::uint64_t>(n_o), static_cast<std::uint64_t>(n_r),
                                          static_cast<std::uint64_t>(index)});
  for (int attempt = 0; attempt < kMaxSpecAttempts; ++attempt) {
    Rng rng(derive_seed({seed, static_cast<std::uint64_t>(attempt)}));
    GeneratedEpisode out;
    out.map_index = rng.index(pool.size());
    out.spec = draw_spec(config, pool[out.map_index], c, n_o, n_r, rng);
    out.spec.seed = seed;
    try {
      out.spec.validate(pool[out.map_index].layout);
    } catch (const SpecError&) {
      continue;
    }
    return out;
  }
  throw GenerationError("could not draw a valid episode after " + std::to_string(kMaxSpecAttempts) + " attempts");
}

std::vector<GeneratedEpisode> generate_episodes(const SweepConfig& config, const MapPool& pool) {
  std::vector<GeneratedEpisode> out;
  for (int c : config.c_values) {
    for (int n_o : config.n_o_values) {
      for (int n_r : config.n_r_values) {
        for (int i = 0; i < config.episodes_per_cell; ++i) out.push_back(generate_episode(config, pool, c, n_o, n_r, i));
      }
    }
  }
  return out;
}

EpisodeRow make_row(const CellKey& key, int index, const GeneratedEpisode& ep, const MapPool& pool,
                    const EpisodeResult& result) {
  EpisodeRow row;
  row.cell = key;
  row.index = index;
  row.seed = ep.spec.seed;
  row.size = pool[ep.map_index].size;
  row.map_seed = pool[ep.map_index].seed;
  row.nav_area = pool[ep.map_index].layout.nav_area_m2();
  row.status = std::string(status_name(result.status));
  row.stuck = result.stuck;
  row.es = result.metrics.es;
  row.ror = result.metrics.ror;
  row.sor = result.metrics.sor;
  row.mc = result.metrics.mc;
  row.espl = result.metrics.espl;
  row.path_length = result.path_length;
  row.oracle_z = result.oracle_z;
  row.oracle_exact = result.oracle_exact;
  row.high_actions = result.high_actions;
  row.low_steps = result.low_steps;
  row.n_objects = result.n_objects;
  row.initially_seen = result.initially_seen;
  row.discovered_in_plan = result.discovered_in_plan;
  row.discovered_in_explore = result.discovered_in_explore;
  row.first_object_path = result.first_object_path.value_or(-1.0);
  return row;
}

std::vector<CellAggregate> aggregate(const std::vector<EpisodeRow>& rows) {
  std::vector<CellAggregate> cells;
  std::vector<long> hidden;  // objects not seen at spawn, per cell
  std::vector<long> in_plan;
  for (const EpisodeRow& r : rows) {
    if (cells.empty() || !(cells.back().cell == r.cell)) {
      cells.push_back({});
      cells.back().cell = r.cell;
      hidden.push_back(0);
      in_plan.push_back(0);
    }
    CellAggregate& a = cells.back();
    ++a.episodes;
    a.es += r.es;
    a.ror += r.ror;
    a.sor += r.sor;
    a.mc += r.mc;
    a.espl += r.espl;
    a.stuck += r.stuck ? 1 : 0;
    hidden.back() += r.n_objects - r.initially_seen;
    in_plan.back() += r.discovered_in_plan;
  }
  for (std::size_t k = 0; k < cells.size(); ++k) {
    CellAggregate& a = cells[k];
    const double n = a.episodes;
    a.es /= n;
    a.ror /= n;
    a.sor /= n;
    a.mc /= n;
    a.espl /= n;
    a.discovery_in_plan = hidden[k] > 0 ? static_cast<double>(in_plan[k]) / static_cast<double>(hidden[k]) : 0.0;
  }
  return cells;
}

namespace {

AgentConfig agent_config(const SweepConfig& config, const std::string& policy) {
  AgentConfig a;
  a.policy = ExplorePolicy::parse(policy);
  a.planner = {config.exact_bound, config.heuristic_budget};
  return a;
}

RunOptions run_options(const SweepConfig& config) {
  RunOptions o;
  o.oracle = {config.oracle_exact_bound, config.heuristic_budget};
  return o;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config, int threads) {
  config.validate();
  const int workers = resolve_threads(threads);
  const MapPool pool = build_map_pool(config.size_classes, config.maps_per_class, config.seed, config.fov, workers);
  return run_sweep(config, pool, workers);
}

SweepResult run_sweep(const SweepConfig& config, const MapPool& pool, int threads) {
  config.validate();
  const std::vector<GeneratedEpisode> episodes = generate_episodes(config, pool);
  const std::size_t per_policy = episodes.size();
  const std::size_t total = per_policy * config.policies.size();

  std::vector<AgentConfig> agents;
  for (const std::string& p : config.policies) agents.push_back(agent_config(config, p));
  const RunOptions options = run_options(config);

  SweepResult result;
  result.config = config;
  result.rows.resize(total);
  parallel_for(total, resolve_threads(threads), [&](std::size_t id) {
    const std::size_t p = id / per_policy;
    const std::size_t e = id % per_policy;
    const GeneratedEpisode& ep = episodes[e];
    const PoolMap& map = pool[ep.map_index];
    const EpisodeResult r = run_episode(ep.spec, map.layout, map.visibility, agents[p], options);
    const int index = static_cast<int>(e % static_cast<std::size_t>(config.episodes_per_cell));
    const CellKey key{config.policies[p], ep.spec.capacity, static_cast<int>(ep.spec.objects.size()),
                      static_cast<int>(ep.spec.receptacles.size())};
    result.rows[id] = make_row(key, index, ep, pool, r);
  });
  result.cells = aggregate(result.rows);
  return result;
}

ExploreResult run_exploration_benchmark(const SweepConfig& config, int threads) {
  config.validate();
  const int workers = resolve_threads(threads);
  const MapPool pool = build_map_pool(config.size_classes, config.maps_per_class, config.seed, config.fov, workers);
  return run_exploration_benchmark(config, pool, workers);
}

ExploreResult run_exploration_benchmark(const SweepConfig& config, const MapPool& pool, int threads) {
  config.validate();
  const int c = config.c_values.front();
  const int n_r = config.n_r_values.front();
  std::vector<GeneratedEpisode> episodes;
  for (int n_o : config.n_o_values) {
    for (int i = 0; i < config.episodes_per_cell; ++i) episodes.push_back(generate_episode(config, pool, c, n_o, n_r, i));
  }
  const std::size_t per_policy = episodes.size();
  const std::size_t total = per_policy * config.policies.size();
  std::vector<AgentConfig> agents;
  for (const std::string& p : config.policies) {
    agents.push_back(agent_config(config, p));
    agents.back().explore_only = true;
  }
  const RunOptions options = run_options(config);

  ExploreResult result;
  result.config = config;
  result.rows.resize(total);
  parallel_for(total, resolve_threads(threads), [&](std::size_t id) {
    const std::size_t p = id / per_policy;
    const std::size_t e = id % per_policy;
    const GeneratedEpisode& ep = episodes[e];
    const PoolMap& map = pool[ep.map_index];
    const EpisodeResult r = run_episode(ep.spec, map.layout, map.visibility, agents[p], options);
    ExploreRow& row = result.rows[id];
    row.policy = config.policies[p];
    row.n_o = static_cast<int>(ep.spec.objects.size());
    row.index = static_cast<int>(e % static_cast<std::size_t>(config.episodes_per_cell));
    row.seed = ep.spec.seed;
    row.nav_area = map.layout.nav_area_m2();
    row.found_all = r.all_seen;
    row.total_path = r.all_seen_path.value_or(r.path_length);
    row.first_object_path = r.first_object_path.value_or(r.path_length);
  });

  for (const ExploreRow& r : result.rows) {
    if (result.summary.empty() || result.summary.back().policy != r.policy || result.summary.back().n_o != r.n_o) {
      result.summary.push_back({r.policy, r.n_o});
    }
    ExploreSummary& s = result.summary.back();
    ++s.episodes;
    s.mean_total_path += r.total_path;
    s.mean_first_object_path += r.first_object_path;
    s.found_all_fraction += r.found_all ? 1.0 : 0.0;
  }
  for (ExploreSummary& s : result.summary) {
    s.mean_total_path /= s.episodes;
    s.mean_first_object_path /= s.episodes;
    s.found_all_fraction /= s.episodes;
  }
  return result;
}

}  // namespace morp
