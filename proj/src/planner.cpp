#include "morp/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "morp/sim.hpp"

namespace morp {

int CvrpInstance::held_count() const {
  return static_cast<int>(std::count(held.begin(), held.end(), 1));
}

void CvrpInstance::validate() const {
  if (n_s < 0) throw PreconditionError("cvrp: negative object count");
  if (static_cast<int>(locations.size()) != location_count() && !locations.empty()) {
    throw PreconditionError("cvrp: locations must have 2*n_s+1 entries");
  }
  if (static_cast<int>(dist.size()) != location_count()) throw PreconditionError("cvrp: distance matrix size");
  if (static_cast<int>(held.size()) != n_s) throw PreconditionError("cvrp: held flags size");
  if (capacity < 1) throw PreconditionError("cvrp: capacity must be >= 1");
  if (held_count() > capacity) throw PreconditionError("cvrp: more held objects than capacity");
  for (int i = 0; i < location_count(); ++i) {
    for (int j = 0; j < location_count(); ++j) {
      if (!std::isfinite(dist(i, j))) throw PreconditionError("cvrp: non-finite distance");
    }
  }
}

double route_cost(const CvrpInstance& inst, const std::vector<int>& order) {
  double cost = 0.0;
  for (std::size_t i = 1; i < order.size(); ++i) {
    cost += inst.dist(static_cast<std::size_t>(order[i - 1]), static_cast<std::size_t>(order[i]));
  }
  return cost;
}

// ---------------------------------------------------------------------------
// Exact solver
//
// Object status is encoded base 3 (0 waiting, 1 aboard, 2 delivered). A
// backward pass computes the optimal cost-to-go for every reachable
// (status, last location) pair; a forward depth-first search in ascending
// location order then sums costs front to back, so the reported optimum is
// the exact minimum of the forward sums and the first one found is the
// lexicographically smallest order.

namespace {

class ExactSolver {
 public:
  explicit ExactSolver(const CvrpInstance& inst) : inst_(inst), n_(inst.n_s), locs_(inst.location_count()) {
    pow3_.assign(static_cast<std::size_t>(n_) + 1, 1);
    for (int i = 1; i <= n_; ++i) pow3_[i] = pow3_[i - 1] * 3;
    states_ = pow3_[n_];
    value_.assign(static_cast<std::size_t>(states_) * locs_, -1.0);
    expanded_.assign(static_cast<std::size_t>(states_) * locs_, std::numeric_limits<double>::infinity());
  }

  RoutePlan solve() {
    RoutePlan plan;
    if (n_ == 0) {
      plan.order = {0};
      return plan;
    }
    const double optimum = cost_to_go(0, 0);
    tolerance_ = 1e-9 * (1.0 + optimum);
    std::vector<int> order{0};
    order.reserve(static_cast<std::size_t>(locs_));
    search(0, 0, 0.0, order);
    plan.order = best_order_;
    plan.cost = best_cost_;
    return plan;
  }

 private:
  int status(std::int64_t code, int obj) const { return static_cast<int>((code / pow3_[obj]) % 3); }

  int load(std::int64_t code) const {
    int l = 0;
    for (int i = 0; i < n_; ++i) l += status(code, i) == 1 ? 1 : 0;
    return l;
  }

  bool held_pending(std::int64_t code) const {
    for (int i = 0; i < n_; ++i) {
      if (inst_.held[i] && status(code, i) == 0) return true;
    }
    return false;
  }

  bool allowed(std::int64_t code, int loc, int current_load, bool held_first) const {
    const int obj = CvrpInstance::object_of(loc);
    const int st = status(code, obj);
    if (CvrpInstance::is_pickup(loc)) {
      if (st != 0 || current_load >= inst_.capacity) return false;
      return !held_first || inst_.held[obj];
    }
    return st == 1 && !held_first;
  }

  std::int64_t advance(std::int64_t code, int loc) const { return code + pow3_[CvrpInstance::object_of(loc)]; }

  double cost_to_go(std::int64_t code, int last) {
    double& slot = value_[static_cast<std::size_t>(code) * locs_ + last];
    if (slot >= 0.0) return slot;
    if (code == states_ - 1) return slot = 0.0;
    const int l = load(code);
    const bool held_first = held_pending(code);
    double best = std::numeric_limits<double>::infinity();
    for (int loc = 1; loc < locs_; ++loc) {
      if (!allowed(code, loc, l, held_first)) continue;
      best = std::min(best, inst_.dist(last, loc) + cost_to_go(advance(code, loc), loc));
    }
    return slot = best;
  }

  void search(std::int64_t code, int last, double prefix, std::vector<int>& order) {
    if (code == states_ - 1) {
      if (prefix < best_cost_) {
        best_cost_ = prefix;
        best_order_ = order;
      }
      return;
    }
    double& seen = expanded_[static_cast<std::size_t>(code) * locs_ + last];
    // An earlier (lexicographically smaller) visit with no larger prefix dominates.
    if (prefix >= seen) return;
    seen = prefix;
    const int l = load(code);
    const bool held_first = held_pending(code);
    for (int loc = 1; loc < locs_; ++loc) {
      if (!allowed(code, loc, l, held_first)) continue;
      const std::int64_t next = advance(code, loc);
      const double np = prefix + inst_.dist(last, loc);
      if (np + cost_to_go(next, loc) > best_cost_ + tolerance_) continue;
      order.push_back(loc);
      search(next, loc, np, order);
      order.pop_back();
    }
  }

  const CvrpInstance& inst_;
  int n_;
  int locs_;
  std::vector<std::int64_t> pow3_;
  std::int64_t states_ = 1;
  std::vector<double> value_;
  std::vector<double> expanded_;
  double tolerance_ = 0.0;
  double best_cost_ = std::numeric_limits<double>::infinity();
  std::vector<int> best_order_;
};

}  // namespace

RoutePlan solve_exact(const CvrpInstance& inst, int bound) {
  inst.validate();
  bound = std::min(bound, kMaxExactBound);
  if (inst.n_s > bound) {
    throw SizeError("solve_exact: n_s = " + std::to_string(inst.n_s) + " exceeds bound " + std::to_string(bound));
  }
  ExactSolver solver(inst);
  return solver.solve();
}

// ---------------------------------------------------------------------------
// Heuristic solver

namespace {

constexpr double kImproveEps = 1e-9;

class RouteBuilder {
 public:
  explicit RouteBuilder(const CvrpInstance& inst) : inst_(inst) {
    route_.push_back(0);
    for (int i = 0; i < inst.n_s; ++i) {
      if (inst.held[i]) route_.push_back(CvrpInstance::pickup(i));
    }
    prefix_ = static_cast<int>(route_.size());
  }

  const std::vector<int>& route() const { return route_; }
  int prefix() const { return prefix_; }

  double d(int a, int b) const { return inst_.dist(static_cast<std::size_t>(a), static_cast<std::size_t>(b)); }

  // Load after each position of `r`. Held objects whose dropoff is absent stay aboard.
  std::vector<int> loads(const std::vector<int>& r) const {
    std::vector<int> out(r.size(), 0);
    int l = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (r[k] != 0) l += CvrpInstance::is_pickup(r[k]) ? 1 : -1;
      out[k] = l;
    }
    return out;
  }

  bool feasible(const std::vector<int>& r) const {
    std::vector<std::uint8_t> picked(static_cast<std::size_t>(inst_.n_s), 0);
    int l = 0;
    for (std::size_t k = 1; k < r.size(); ++k) {
      const int loc = r[k];
      const int obj = CvrpInstance::object_of(loc);
      if (CvrpInstance::is_pickup(loc)) {
        if (inst_.held[obj] != (static_cast<int>(k) < prefix_)) return false;
        picked[obj] = 1;
        if (++l > inst_.capacity) return false;
      } else {
        if (!picked[obj]) return false;
        --l;
      }
    }
    return true;
  }

  struct Insertion {
    double delta = std::numeric_limits<double>::infinity();
    int after_pickup = -1;  // pickup goes after this position (-1 for held objects)
    int after_drop = -1;    // dropoff goes after this position (in the original route)
  };

  // Best feasible insertion of object `obj` into `r` (which must not contain it, except the held pickup).
  Insertion best_insertion(const std::vector<int>& r, int obj) const {
    Insertion best;
    const int p = CvrpInstance::pickup(obj);
    const int q = CvrpInstance::dropoff(obj);
    const std::vector<int> l = loads(r);
    const int last = static_cast<int>(r.size()) - 1;
    auto edge = [&](int k, int x) {
      // Cost change from placing x between r[k] and r[k+1].
      if (k == last) return d(r[k], x);
      return d(r[k], x) + d(x, r[k + 1]) - d(r[k], r[k + 1]);
    };
    if (inst_.held[obj]) {
      // Without its dropoff the object rides to the end, so loads up to the drop point must already fit.
      for (int j = prefix_ - 1; j <= last; ++j) {
        if (l[j] > inst_.capacity) break;
        const double delta = edge(j, q);
        if (delta < best.delta - 1e-12) best = {delta, -1, j};
      }
      return best;
    }
    // Held objects that have no dropoff yet sit aboard for the whole route.
    for (int i = prefix_ - 1; i <= last; ++i) {
      int max_load = l[i];
      if (max_load + 1 > inst_.capacity) continue;
      for (int j = i; j <= last; ++j) {
        if (j > i) max_load = std::max(max_load, l[j]);
        if (max_load + 1 > inst_.capacity) break;
        double delta;
        if (j == i) {
          delta = d(r[i], p) + d(p, q) + (i == last ? 0.0 : d(q, r[i + 1]) - d(r[i], r[i + 1]));
        } else {
          delta = edge(i, p) + edge(j, q);
        }
        if (delta < best.delta - 1e-12) best = {delta, i, j};
      }
    }
    return best;
  }

  static std::vector<int> apply(const std::vector<int>& r, const Insertion& ins, int obj) {
    std::vector<int> out;
    out.reserve(r.size() + 2);
    for (int k = 0; k < static_cast<int>(r.size()); ++k) {
      out.push_back(r[k]);
      if (k == ins.after_pickup) out.push_back(CvrpInstance::pickup(obj));
      if (k == ins.after_drop) out.push_back(CvrpInstance::dropoff(obj));
    }
    return out;
  }

  // Parallel cheapest insertion of `objs` into `r`.
  std::vector<int> insert_all(std::vector<int> r, std::vector<int> objs) const {
    while (!objs.empty()) {
      std::size_t best_k = objs.size();
      Insertion best;
      for (std::size_t k = 0; k < objs.size(); ++k) {
        const Insertion ins = best_insertion(r, objs[k]);
        if (ins.delta < best.delta - 1e-12) {
          best = ins;
          best_k = k;
        }
      }
      if (best_k == objs.size()) throw Error("solve_heuristic: no feasible insertion (internal)");
      r = apply(r, best, objs[best_k]);
      objs.erase(objs.begin() + static_cast<std::ptrdiff_t>(best_k));
    }
    return r;
  }

  void construct() {
    std::vector<int> objs;
    for (int obj = 0; obj < inst_.n_s; ++obj) objs.push_back(obj);
    route_ = insert_all(route_, objs);
  }

  std::vector<int> without(const std::vector<int>& r, int obj) const {
    std::vector<int> out;
    out.reserve(r.size());
    for (int k = 0; k < static_cast<int>(r.size()); ++k) {
      const int loc = r[k];
      if (loc == CvrpInstance::dropoff(obj)) continue;
      if (loc == CvrpInstance::pickup(obj) && k >= prefix_) continue;
      out.push_back(loc);
    }
    return out;
  }

  // Best improving neighbour of `r` over pair relocation, relocation of 1-3 node
  // segments and segment reversal; empty when `r` is a local optimum.
  std::vector<int> best_neighbour(const std::vector<int>& r) const {
    double best_cost = route_cost(inst_, r) - kImproveEps;
    std::vector<int> best_route;
    auto consider = [&](std::vector<int>& cand) {
      if (!feasible(cand)) return;
      const double c = route_cost(inst_, cand);
      if (c < best_cost) {
        best_cost = c;
        best_route = std::move(cand);
      }
    };

    for (int obj = 0; obj < inst_.n_s; ++obj) {
      const std::vector<int> base = without(r, obj);
      const Insertion ins = best_insertion(base, obj);
      if (ins.delta == std::numeric_limits<double>::infinity()) continue;
      std::vector<int> cand = apply(base, ins, obj);
      consider(cand);
    }

    const int n = static_cast<int>(r.size());
    for (int len = 1; len <= 3; ++len) {
      for (int a = prefix_; a + len <= n; ++a) {
        std::vector<int> base = r;
        const std::vector<int> seg(base.begin() + a, base.begin() + a + len);
        base.erase(base.begin() + a, base.begin() + a + len);
        for (int b = prefix_; b <= static_cast<int>(base.size()); ++b) {
          if (b == a) continue;
          std::vector<int> cand = base;
          cand.insert(cand.begin() + b, seg.begin(), seg.end());
          consider(cand);
        }
      }
    }

    for (int a = prefix_; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        std::vector<int> cand = r;
        std::reverse(cand.begin() + a, cand.begin() + b + 1);
        consider(cand);
      }
    }
    return best_route;
  }

  // Best-improvement descent; returns the number of accepted moves.
  int descend(std::vector<int>& r, int max_moves) const {
    int moves = 0;
    while (moves < max_moves) {
      std::vector<int> next = best_neighbour(r);
      if (next.empty()) break;
      r = std::move(next);
      ++moves;
    }
    return moves;
  }

  // Local search, then ruin-and-recreate: remove every pair of objects in turn,
  // reinsert them in both orders and descend; repeat until no pair improves.
  // Every accepted improvement counts against `budget`.
  void optimise(int budget) {
    int used = descend(route_, budget);
    const int n = inst_.n_s;
    std::vector<std::vector<int>> groups;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) groups.push_back({a, b});
    }
    bool improved = !groups.empty();
    while (improved && used < budget) {
      improved = false;
      for (const std::vector<int>& g : groups) {
        if (used >= budget) break;
        std::vector<int> base = route_;
        for (int obj : g) base = without(base, obj);
        std::vector<int> order = g;
        std::vector<int> best;
        double best_cost = route_cost(inst_, route_) - kImproveEps;
        // Each reinsertion order, one object at a time at its cheapest position.
        do {
          std::vector<int> cand = base;
          bool ok = true;
          for (int obj : order) {
            const Insertion ins = best_insertion(cand, obj);
            if (ins.delta == std::numeric_limits<double>::infinity()) {
              ok = false;
              break;
            }
            cand = apply(cand, ins, obj);
          }
          if (!ok) continue;
          descend(cand, budget);
          const double c = route_cost(inst_, cand);
          if (c < best_cost) {
            best_cost = c;
            best = std::move(cand);
          }
        } while (std::next_permutation(order.begin(), order.end()));
        if (!best.empty()) {
          route_ = std::move(best);
          ++used;
          improved = true;
        }
      }
    }
  }

 private:
  const CvrpInstance& inst_;
  std::vector<int> route_;
  int prefix_ = 1;
};

}  // namespace

RoutePlan solve_heuristic(const CvrpInstance& inst, int budget) {
  inst.validate();
  RouteBuilder builder(inst);
  builder.construct();
  builder.optimise(budget);
  RoutePlan plan;
  plan.order = builder.route();
  plan.cost = route_cost(inst, plan.order);
  return plan;
}

// ---------------------------------------------------------------------------

CvrpInstance build_instance(const Episode& episode) {
  const std::vector<int> pending = episode.pending_objects();
  if (pending.empty()) throw EmptyInstanceError("build_instance: nothing to plan");
  const AgentState& agent = episode.agent();
  CvrpInstance inst;
  inst.n_s = static_cast<int>(pending.size());
  inst.capacity = episode.spec().capacity;
  inst.locations.push_back(agent.pose.cell);
  for (int id : pending) {
    const bool held = agent.holding(id);
    inst.held.push_back(held ? 1 : 0);
    inst.object_ids.push_back(id);
    const auto& where = episode.world().object_cells[static_cast<std::size_t>(id)];
    inst.locations.push_back(held ? agent.pose.cell : *where);
    inst.locations.push_back(episode.spec().receptacle_of(id));
  }
  inst.dist = distance_matrix(episode.map(), inst.locations);
  return inst;
}

CvrpInstance random_instance(const OccupancyMap& map, Rng& rng, int n_s, int capacity, int n_held, int n_r) {
  if (n_held > std::min(capacity, n_s)) throw PreconditionError("random_instance: too many held objects");
  const std::vector<Cell> cells = map.navigable_cells();
  auto pick = [&] { return cells[rng.index(cells.size())]; };
  std::vector<Cell> receptacles;
  for (int r = 0; r < std::max(1, n_r); ++r) receptacles.push_back(pick());
  CvrpInstance inst;
  inst.n_s = n_s;
  inst.capacity = capacity;
  const Cell agent = pick();
  inst.locations.push_back(agent);
  for (int i = 0; i < n_s; ++i) {
    const bool held = i < n_held;
    inst.held.push_back(held ? 1 : 0);
    inst.locations.push_back(held ? agent : pick());
    inst.locations.push_back(receptacles[static_cast<std::size_t>(i) % receptacles.size()]);
  }
  inst.dist = distance_matrix(map, inst.locations);
  return inst;
}

// ---------------------------------------------------------------------------

std::vector<TimingRow> solver_timing_sweep(const TimingSweepConfig& config) {
  if (config.n_o_values.empty() || config.c_values.empty() || config.instances_per_cell < 1) {
    throw ConfigError("solver_timing_sweep: empty ranges");
  }
  const OccupancyMap map = generate_map(derive_seed({config.seed, 0x74696d65ULL}), SizeClass::Medium);
  using Clock = std::chrono::steady_clock;

  auto time_one = [&](auto&& solve) {
    int reps = 0;
    const auto start = Clock::now();
    double elapsed = 0.0;
    do {
      solve();
      ++reps;
      elapsed = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    } while (elapsed < config.min_sample_ms);
    return elapsed / reps;
  };
  auto summarize = [](std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const std::size_t idx = std::min(v.size() - 1, static_cast<std::size_t>(std::ceil(q * v.size())) - 1);
    return v[idx];
  };
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  };

  std::vector<TimingRow> rows;
  for (int n_o : config.n_o_values) {
    for (int c : config.c_values) {
      Rng rng(derive_seed({config.seed, static_cast<std::uint64_t>(n_o), static_cast<std::uint64_t>(c)}));
      std::vector<CvrpInstance> instances;
      for (int k = 0; k < config.instances_per_cell; ++k) instances.push_back(random_instance(map, rng, n_o, c, 0));
      std::vector<double> exact_ms, heur_ms;
      for (const auto& inst : instances) {
        if (n_o <= config.exact_bound) {
          exact_ms.push_back(time_one([&] { return solve_exact(inst, config.exact_bound); }));
        }
        heur_ms.push_back(time_one([&] { return solve_heuristic(inst, config.heuristic_budget); }));
      }
      if (!exact_ms.empty()) rows.push_back({n_o, c, "exact", median(exact_ms), summarize(exact_ms, 0.9)});
      rows.push_back({n_o, c, "heuristic", median(heur_ms), summarize(heur_ms, 0.9)});
    }
  }
  return rows;
}

void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows) {
  out << "n_o,c,solver,median_ms,p90_ms\n";
  out.precision(9);
  for (const auto& r : rows) {
    out << r.n_o << ',' << r.c << ',' << r.solver << ',' << r.median_ms << ',' << r.p90_ms << '\n';
  }
}

}  // namespace morp
