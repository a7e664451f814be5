#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "morp/pathfind.hpp"
#include "morp/rng.hpp"
#include "oracles.hpp"

using morp::Action;
using morp::Cell;
using morp::Heading;

namespace {

// Walks the plan from `start` and returns the visited cells.
std::vector<Cell> replay(const morp::ActionPlan& plan, Cell start, Heading h) {
  std::vector<Cell> cells{start};
  for (Action a : plan.actions) {
    if (a == Action::Left) h = morp::turned_left(h);
    if (a == Action::Right) h = morp::turned_right(h);
    if (a == Action::Forward) cells.push_back(morp::step_cell(cells.back(), h));
  }
  CHECK(h == plan.final_heading);
  return cells;
}

}  // namespace

TEST_CASE("shortest_path basic lengths") {
  const morp::OccupancyMap m = fixture::open_room(10, 10);
  const auto same = morp::shortest_path(m, {4, 4}, {4, 4});
  REQUIRE(same);
  CHECK(same->cells.size() == 1);
  CHECK(same->length_m == 0.0);

  const auto straight = morp::shortest_path(m, {0, 0}, {0, 5});
  REQUIRE(straight);
  CHECK(straight->length_m == doctest::Approx(0.5).epsilon(1e-12));

  const auto mixed = morp::shortest_path(m, {0, 0}, {3, 5});
  REQUIRE(mixed);
  const oracle::Octile expect = oracle::dijkstra(m, {0, 0})[m.index({3, 5})];
  CHECK(expect == oracle::Octile{2, 3});
  CHECK(mixed->steps.straight == 2);
  CHECK(mixed->steps.diagonal == 3);
  CHECK(mixed->length_m == doctest::Approx(0.1 * (3 * std::sqrt(2.0) + 2)).epsilon(1e-12));
}

TEST_CASE("shortest_path errors and unreachable targets") {
  const morp::OccupancyMap m = morp::load_map(".#.\n.#.\n");
  CHECK_FALSE(morp::shortest_path(m, {0, 0}, {2, 1}).has_value());
  CHECK_THROWS_AS(morp::shortest_path(m, {1, 0}, {0, 0}), morp::PreconditionError);
}

TEST_CASE("no corner cutting") {
  // Diagonal squeeze between two walls is forbidden.
  const morp::OccupancyMap m = morp::load_map(".#\n#.\n");
  CHECK_FALSE(morp::shortest_path(m, {0, 0}, {1, 1}).has_value());
  CHECK_FALSE(morp::can_move(m, {0, 0}, Heading::SE));
  const morp::OccupancyMap half = morp::load_map("..\n#.\n");
  CHECK_FALSE(morp::can_move(half, {0, 0}, Heading::SE));
  CHECK(morp::can_move(half, {0, 0}, Heading::E));
}

TEST_CASE("paths are legal and match the oracle on generated maps") {
  morp::Rng rng(21);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const morp::OccupancyMap m = morp::generate_map(seed, morp::SizeClass::Medium);
    const auto nav = m.navigable_cells();
    for (int q = 0; q < 10; ++q) {
      const Cell a = nav[rng.index(nav.size())];
      const auto ref = oracle::dijkstra(m, a);
      const morp::DistanceField field(m, a);
      for (int t = 0; t < 20; ++t) {
        const Cell b = nav[rng.index(nav.size())];
        const auto p = morp::shortest_path(m, a, b);
        const oracle::Octile o = ref[m.index(b)];
        REQUIRE(p.has_value());
        CHECK(p->steps.straight == o.s);
        CHECK(p->steps.diagonal == o.d);
        CHECK(field.steps(b) == p->steps);
        CHECK(field.distance_m(b) == p->length_m);
        CHECK(p->cells.front() == a);
        CHECK(p->cells.back() == b);
        for (std::size_t k = 1; k < p->cells.size(); ++k) {
          CHECK(morp::can_move(m, p->cells[k - 1], morp::heading_between(p->cells[k - 1], p->cells[k])));
        }
      }
    }
  }
}

TEST_CASE("distance_matrix") {
  const morp::OccupancyMap room = fixture::open_room(6, 6);
  const std::vector<Cell> one{{2, 2}};
  const morp::DistanceMatrix d1 = morp::distance_matrix(room, one);
  CHECK(d1.size() == 1);
  CHECK(d1(0, 0) == 0.0);

  const morp::OccupancyMap split = morp::load_map("..#..\n..#..\n");
  const std::vector<Cell> two{{0, 0}, {4, 1}};
  const morp::DistanceMatrix d2 = morp::distance_matrix(split, two);
  CHECK(std::isinf(d2(0, 1)));
  CHECK(std::isinf(d2(1, 0)));

  const morp::OccupancyMap m = morp::generate_map(9, morp::SizeClass::Medium);
  const auto nav = m.navigable_cells();
  morp::Rng rng(3);
  std::vector<Cell> four;
  for (int i = 0; i < 4; ++i) four.push_back(nav[rng.index(nav.size())]);
  const morp::DistanceMatrix d = morp::distance_matrix(m, four);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(d(i, i) == 0.0);
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(d(i, j) == d(j, i));
      CHECK(d(i, j) == morp::shortest_path(m, four[i], four[j])->length_m);
    }
  }
  const std::vector<Cell> wall{{2, 0}};
  CHECK_THROWS_AS(morp::distance_matrix(split, wall), morp::PreconditionError);
}

TEST_CASE("path_to_actions") {
  morp::GridPath single;
  single.cells = {{3, 3}};
  const auto none = morp::path_to_actions(single, Heading::W);
  CHECK(none.actions.empty());
  CHECK(none.final_heading == Heading::W);

  morp::GridPath south;
  south.cells = {{3, 3}, {3, 4}};
  const auto turn = morp::path_to_actions(south, Heading::N);
  CHECK(turn.actions == std::vector<Action>{Action::Right, Action::Right, Action::Right, Action::Right, Action::Forward});
  CHECK(turn.final_heading == Heading::S);

  morp::GridPath bend;
  bend.cells = {{3, 5}, {3, 4}, {3, 3}, {4, 2}};
  const auto b = morp::path_to_actions(bend, Heading::N);
  CHECK(b.actions == std::vector<Action>{Action::Forward, Action::Forward, Action::Right, Action::Forward});
  CHECK(b.final_heading == Heading::NE);

  morp::GridPath west;
  west.cells = {{3, 3}, {2, 3}};
  CHECK(morp::path_to_actions(west, Heading::NE).actions ==
        std::vector<Action>{Action::Left, Action::Left, Action::Left, Action::Forward});
}

TEST_CASE("path_to_actions replays every generated path with minimal turns") {
  const morp::OccupancyMap m = morp::generate_map(2, morp::SizeClass::Medium);
  const auto nav = m.navigable_cells();
  morp::Rng rng(8);
  for (int q = 0; q < 200; ++q) {
    const Cell a = nav[rng.index(nav.size())];
    const Cell b = nav[rng.index(nav.size())];
    const Heading h = morp::heading_from_index(rng.range(0, 7));
    const auto p = morp::shortest_path(m, a, b);
    REQUIRE(p);
    const auto plan = morp::path_to_actions(*p, h);
    CHECK(replay(plan, a, h) == p->cells);
    // Each forward is preceded by at most 4 turns.
    int run = 0;
    for (Action act : plan.actions) {
      run = act == Action::Forward ? 0 : run + 1;
      CHECK(run <= 4);
    }
  }
}
