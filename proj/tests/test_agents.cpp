#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "morp/agents.hpp"
#include "morp/bench.hpp"

using morp::Cell;
using morp::HighLevelKind;

namespace {

morp::EpisodeSpec room_spec(std::vector<morp::ObjectSpec> objects, std::vector<morp::ReceptacleSpec> recs, Cell spawn,
                            int capacity = 3) {
  morp::EpisodeSpec s;
  s.objects = std::move(objects);
  s.receptacles = std::move(recs);
  s.spawn = {spawn, morp::Heading::N};
  s.capacity = capacity;
  return s;
}

struct Room {
  morp::OccupancyMap map = fixture::open_room(60, 60);
  std::shared_ptr<const morp::VisibilityTable> vis = fixture::table(map);
};

const Room& room() {
  static const Room r;
  return r;
}

const morp::MapPool& medium_pool() {
  static const morp::MapPool p =
      morp::build_map_pool({morp::SizeClass::Small, morp::SizeClass::Medium}, 2, 99, morp::FovSpec{});
  return p;
}

}  // namespace

TEST_CASE("everything already in place") {
  const Room& r = room();
  const auto spec = room_spec({{0, 0, {31, 31}}, {1, 1, {29, 30}}}, {{0, {31, 31}}, {1, {29, 30}}}, {30, 30});
  const auto res = morp::run_episode(spec, r.map, r.vis, {});
  CHECK(res.status == morp::EpisodeStatus::Success);
  CHECK(res.path_length == 0.0);
  CHECK(res.oracle_z == 0.0);
  CHECK(res.metrics.espl == 1.0);
  CHECK(res.high_actions == 0);
}

TEST_CASE("one visible misplaced object is carried along the oracle route") {
  const Room& r = room();
  const auto spec = room_spec({{0, 0, {34, 30}}}, {{0, {50, 45}}}, {30, 30});
  const auto base = morp::oracle_run(spec, r.map, {});
  const double expect = morp::shortest_path(r.map, {30, 30}, {34, 30})->length_m +
                        morp::shortest_path(r.map, {34, 30}, {50, 45})->length_m;
  CHECK(base.z == expect);
  CHECK(base.exact);
  const auto res = morp::run_episode(spec, r.map, r.vis, {});
  CHECK(res.status == morp::EpisodeStatus::Success);
  CHECK(res.path_length == doctest::Approx(base.z).epsilon(1e-12));
  CHECK(res.metrics.espl == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.high_actions == 2);
}

TEST_CASE("greedy arbitration") {
  const Room& r = room();
  morp::HeuristicAgent agent({}, 1);
  SUBCASE("nothing seen yet: explore") {
    morp::Episode ep(room_spec({{0, 0, {5, 5}}}, {{0, {55, 55}}}, {30, 30}), r.map, r.vis);
    const auto a = agent.next(ep);
    REQUIRE(a);
    CHECK(a->kind == HighLevelKind::Explore);
  }
  SUBCASE("seen object: plan toward its pickup") {
    morp::Episode ep(room_spec({{0, 0, {33, 31}}}, {{0, {55, 55}}}, {30, 30}), r.map, r.vis);
    const auto a = agent.next(ep);
    REQUIRE(a);
    CHECK(a->kind == HighLevelKind::Plan);
    CHECK(a->target == Cell{33, 31});
  }
  SUBCASE("carrying an object: plan toward its receptacle") {
    morp::Episode ep(room_spec({{0, 0, {30, 30}}}, {{0, {55, 55}}}, {30, 30}), r.map, r.vis);
    ep.step(morp::Action::GrabDrop);
    const auto a = agent.next(ep);
    REQUIRE(a);
    CHECK(a->kind == HighLevelKind::Plan);
    CHECK(a->target == Cell{55, 55});
  }
  SUBCASE("all rearranged: done") {
    morp::Episode ep(room_spec({{0, 0, {31, 30}}}, {{0, {31, 30}}}, {30, 30}), r.map, r.vis);
    CHECK_FALSE(agent.next(ep).has_value());
  }
}

TEST_CASE("executing high-level actions") {
  const Room& r = room();
  morp::HeuristicAgent agent({}, 1);
  SUBCASE("adjacent waypoint: turns, one forward, grab") {
    morp::Episode ep(room_spec({{0, 0, {31, 31}}}, {{0, {55, 55}}}, {30, 30}), r.map, r.vis);
    const auto a = agent.next(ep);
    REQUIRE(a);
    const auto out = agent.execute(ep, *a);
    CHECK(out.reached);
    CHECK(ep.agent().held_count() == 1);
    CHECK(ep.agent().high_actions == 1);
    CHECK(ep.agent().low_steps == 3 + 1 + 1);
  }
  SUBCASE("travel budget") {
    const morp::OccupancyMap corridor = fixture::open_room(400, 1);
    const auto vis = fixture::table(corridor);
    auto spec = room_spec({{0, 0, {399, 0}}}, {{0, {0, 0}}}, {0, 0});
    spec.max_dist = 10.0;
    morp::Episode ep(spec, corridor, vis);
    morp::HighLevelAction a{HighLevelKind::Explore, {300, 0}, *morp::shortest_path(corridor, {0, 0}, {300, 0})};
    CHECK(a.path.length_m == doctest::Approx(30.0));
    const auto out = agent.execute(ep, a);
    CHECK_FALSE(out.reached);
    CHECK(out.budget_hit);
    CHECK(out.traveled >= 10.0);
    CHECK(out.traveled < 10.2);
    CHECK(ep.agent().high_actions == 1);
  }
  SUBCASE("a discovery mid-route interrupts a plan") {
    const morp::OccupancyMap corridor = fixture::open_room(200, 1);
    const auto vis = fixture::table(corridor);
    auto spec = room_spec({{0, 0, {2, 0}}, {1, 0, {60, 0}}}, {{0, {150, 0}}}, {0, 0});
    spec.max_dist = 100.0;
    morp::Episode ep(spec, corridor, vis);
    ep.step(morp::Action::Right);
    ep.step(morp::Action::Right);
    const auto first = agent.next(ep);
    REQUIRE(first);
    agent.execute(ep, *first);
    REQUIRE(ep.agent().held_count() == 1);
    const auto second = agent.next(ep);
    REQUIRE(second);
    CHECK(second->target == Cell{150, 0});
    const auto out = agent.execute(ep, *second);
    CHECK(out.replanned);
    CHECK_FALSE(out.reached);
    CHECK(ep.agent().pose.cell == Cell{40, 0});
    const auto third = agent.next(ep);
    REQUIRE(third);
    CHECK(third->target == Cell{60, 0});
  }
}

TEST_CASE("medium-map episode with capacity one") {
  const morp::MapPool& pool = medium_pool();
  morp::SweepConfig cfg;
  cfg.seed = 5;
  const auto gen = morp::generate_episode(cfg, pool, 1, 3, 1, 0);
  const auto& pm = pool[gen.map_index];
  morp::RunOptions opt;
  opt.keep_trace = true;
  const auto a = morp::run_episode(gen.spec, pm.layout, pm.visibility, {}, opt);
  const auto b = morp::run_episode(gen.spec, pm.layout, pm.visibility, {}, opt);
  CHECK(a.status == morp::EpisodeStatus::Success);
  CHECK(a.metrics.es == 1.0);
  CHECK(a.metrics.sor == 1.0);
  std::ostringstream ta, tb;
  morp::write_trace_csv(ta, a.trace);
  morp::write_trace_csv(tb, b.trace);
  CHECK(ta.str() == tb.str());
  CHECK(a.path_length == b.path_length);
}

TEST_CASE("episode properties across policies") {
  const morp::MapPool& pool = medium_pool();
  morp::SweepConfig cfg;
  cfg.seed = 17;
  int checked = 0;
  for (const char* name : {"wfbe-r", "wfbe-w:0.5", "wfbe-w:1", "rnd"}) {
    morp::AgentConfig agent;
    agent.policy = morp::ExplorePolicy::parse(name);
    for (int i = 0; i < 12; ++i) {
      const int n_o = 1 + i % 5;
      const int c = i % 2 == 0 ? 1 : 3;
      const auto gen = morp::generate_episode(cfg, pool, c, n_o, 1 + i % 3, i);
      const auto& pm = pool[gen.map_index];
      const auto res = morp::run_episode(gen.spec, pm.layout, pm.visibility, agent);
      CAPTURE(name);
      CAPTURE(i);
      CHECK(res.status == morp::EpisodeStatus::Success);
      CHECK(res.metrics.espl <= 1.0);
      CHECK(res.metrics.espl >= 0.0);
      if (res.metrics.espl == 1.0) CHECK(res.path_length <= res.oracle_z);
      // The oracle route is a lower bound on any successful agent route.
      if (res.status == morp::EpisodeStatus::Success && res.oracle_exact) {
        CHECK(res.path_length >= res.oracle_z - 1e-9);
      }
      for (const auto& e : res.high_level_log) {
        if (e.kind == HighLevelKind::Explore) {
          CHECK(e.pending_before == 0);
          CHECK(e.held_before == 0);
        } else {
          CHECK(e.pending_before + e.held_before > 0);
        }
      }
      ++checked;
    }
  }
  CHECK(checked == 48);
}

TEST_CASE("oracle agent in the simulator") {
  const morp::MapPool& pool = medium_pool();
  morp::SweepConfig cfg;
  for (int i = 0; i < 10; ++i) {
    const auto gen = morp::generate_episode(cfg, pool, 1 + i % 3, 1 + i % 4, 2, i);
    const auto& pm = pool[gen.map_index];
    const auto res = morp::run_oracle_episode(gen.spec, pm.layout, pm.visibility);
    CHECK(res.status == morp::EpisodeStatus::Success);
    CHECK(res.path_length == doctest::Approx(res.oracle_z).epsilon(1e-9));
  }
}

TEST_CASE("exploration-only runs stop once every object is seen") {
  const morp::MapPool& pool = medium_pool();
  morp::SweepConfig cfg;
  morp::AgentConfig agent;
  agent.explore_only = true;
  for (int i = 0; i < 5; ++i) {
    const auto gen = morp::generate_episode(cfg, pool, 3, 5, 3, i);
    const auto& pm = pool[gen.map_index];
    const auto res = morp::run_episode(gen.spec, pm.layout, pm.visibility, agent);
    CHECK(res.all_seen);
    CHECK(res.status == morp::EpisodeStatus::Success);
    REQUIRE(res.all_seen_path);
    CHECK(*res.all_seen_path <= res.path_length);
    for (const auto& e : res.high_level_log) CHECK(e.kind == HighLevelKind::Explore);
  }
}
