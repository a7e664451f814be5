#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "morp/explore.hpp"
#include "morp/rng.hpp"

using morp::Cell;

namespace {

morp::FrontierSet make_set(std::vector<int> gains, std::vector<double> dists) {
  morp::FrontierSet fs;
  for (std::size_t k = 0; k < gains.size(); ++k) {
    morp::FrontierCandidate c;
    c.cell = {static_cast<int>(k), 0};
    c.gain = gains[k];
    c.distance_m = dists[k];
    fs.candidates.push_back(c);
  }
  return fs;
}

void explore_all(morp::OccupancyMap& m) {
  for (std::size_t i = 0; i < m.size(); ++i) m.explore(i);
}

// Frontier definition scanned cell by cell.
std::vector<Cell> frontier_scan(const morp::OccupancyMap& m) {
  std::vector<Cell> out;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (m.state({x, y}) != morp::CellState::UnexploredNavigable) continue;
      bool touch = false;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) touch = touch || ((dx || dy) && m.explored({x + dx, y + dy}));
      }
      if (touch) out.push_back({x, y});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("detect_frontiers") {
  morp::OccupancyMap m = fixture::open_room(9, 9);
  CHECK(morp::detect_frontiers(m).empty());
  m.explore(m.index({4, 4}));
  CHECK(morp::detect_frontiers(m).size() == 8);
  m.explore(m.index({0, 0}));
  CHECK(morp::detect_frontiers(m).size() == 11);
  explore_all(m);
  CHECK(morp::detect_frontiers(m).empty());

  morp::OccupancyMap corridor = fixture::open_room(20, 3);
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 10; ++x) corridor.explore(corridor.index({x, y}));
  }
  CHECK(morp::detect_frontiers(corridor) == std::vector<Cell>{{10, 0}, {10, 1}, {10, 2}});
}

TEST_CASE("detect_frontiers matches a direct scan on partially explored maps") {
  morp::Rng rng(31);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    morp::OccupancyMap m = morp::generate_map(seed, morp::SizeClass::Medium);
    const auto vis = fixture::table(m);
    const auto nav = m.navigable_cells();
    for (int k = 0; k < 15; ++k) {
      for (std::uint32_t i : vis->visible_from(m.index(nav[rng.index(nav.size())]))) m.explore(i);
    }
    CHECK(morp::detect_frontiers(m) == frontier_scan(m));
  }
}

TEST_CASE("k-means separates two distant blobs") {
  std::vector<Cell> pts;
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 3; ++x) {
      pts.push_back({x + 2, y + 2});
      pts.push_back({x + 60, y + 40});
    }
  }
  const morp::Clustering c = morp::kmeans_cells(pts, 2);
  REQUIRE(c.k == 2);
  // Exhaustive check: the blob split has the least within-cluster scatter of all 2-partitions.
  auto scatter = [&](const std::vector<int>& labels) {
    double total = 0;
    for (int g = 0; g < 2; ++g) {
      double sx = 0, sy = 0;
      int n = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (labels[i] != g) continue;
        sx += pts[i].x;
        sy += pts[i].y;
        ++n;
      }
      if (n == 0) return 1e300;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (labels[i] == g) total += std::pow(pts[i].x - sx / n, 2) + std::pow(pts[i].y - sy / n, 2);
      }
    }
    return total;
  };
  double best = 1e300;
  std::vector<int> best_labels;
  for (std::uint32_t mask = 0; mask < (1u << pts.size()); ++mask) {
    std::vector<int> labels(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) labels[i] = (mask >> i) & 1u;
    const double s = scatter(labels);
    if (s < best) {
      best = s;
      best_labels = labels;
    }
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      CHECK((c.labels[i] == c.labels[j]) == (best_labels[i] == best_labels[j]));
    }
  }
  CHECK(morp::kmeans_cells(pts, 2).labels == c.labels);
}

TEST_CASE("cluster_frontiers representatives") {
  morp::OccupancyMap m = fixture::open_room(80, 50);
  const auto vis = fixture::table(m);
  SUBCASE("one frontier") {
    const std::vector<Cell> one{{40, 25}};
    const auto fs = morp::cluster_frontiers(m, *vis, one, {{10, 10}, morp::Heading::N}, 10);
    REQUIRE(fs.size() == 1);
    CHECK(fs.candidates[0].cell == Cell{40, 25});
    CHECK(fs.candidates[0].distance_m > 0.0);
  }
  SUBCASE("two blobs, one representative each") {
    std::vector<Cell> pts;
    for (int y = 0; y < 3; ++y) {
      for (int x = 0; x < 3; ++x) {
        pts.push_back({x + 2, y + 2});
        pts.push_back({x + 70, y + 40});
      }
    }
    const auto fs = morp::cluster_frontiers(m, *vis, pts, {{40, 25}, morp::Heading::N}, 2);
    REQUIRE(fs.size() == 2);
    std::set<Cell> reps{fs.candidates[0].cell, fs.candidates[1].cell};
    CHECK(reps == std::set<Cell>{{3, 3}, {71, 41}});
  }
  SUBCASE("a blind path gains nothing") {
    explore_all(m);
    morp::GridPath p;
    p.cells = {{10, 10}, {11, 10}, {12, 10}};
    CHECK(morp::path_gain(m, *vis, p, morp::Heading::E) == 0);
    CHECK(morp::path_gain(m, *vis, p, morp::Heading::E, morp::GainMode::AtFrontier) == 0);
  }
  SUBCASE("gain counts unexplored cells that come into view") {
    morp::GridPath p;
    p.cells = {{40, 25}};
    CHECK(morp::path_gain(m, *vis, p, morp::Heading::E) == 1257);
  }
}

TEST_CASE("WFBE rules") {
  CHECK(morp::choose_wfbe_r(make_set({10, 4}, {5, 1})) == 1);
  CHECK(morp::choose_wfbe_r(make_set({0, 0, 0}, {3, 1, 2})) == 1);
  CHECK(morp::choose_wfbe_r(make_set({7}, {9})) == 0);
  CHECK_THROWS_AS(morp::choose_wfbe_r(morp::FrontierSet{}), morp::PreconditionError);

  CHECK(morp::choose_wfbe_w(make_set({1, 1, 1}, {3, 1, 7}), 1.0) == 1);
  CHECK(morp::choose_wfbe_w(make_set({5, 2, 9}, {1, 1, 1}), 0.0) == 1);
  CHECK(morp::choose_wfbe_w(make_set({8, 8}, {2, 4}), 0.5) == 0);
  CHECK_THROWS_AS(morp::choose_wfbe_w(morp::FrontierSet{}, 0.5), morp::PreconditionError);
  CHECK_THROWS_AS(morp::choose_wfbe_w(make_set({1}, {1}), 1.5), morp::PreconditionError);
}

TEST_CASE("WFBE choices are invariant to scaling distances and gains") {
  morp::Rng rng(41);
  for (int t = 0; t < 500; ++t) {
    const int n = rng.range(1, 10);
    std::vector<int> g(n);
    std::vector<double> d(n);
    for (int k = 0; k < n; ++k) {
      g[k] = rng.range(0, 50);
      d[k] = 0.1 * rng.range(1, 100);
    }
    std::vector<int> g2(g);
    std::vector<double> d2(d);
    for (auto& v : g2) v *= 4;
    for (auto& v : d2) v *= 8;
    const double w = 0.25 * rng.range(0, 4);
    CHECK(morp::choose_wfbe_w(make_set(g, d), w) == morp::choose_wfbe_w(make_set(g2, d2), w));
    CHECK(morp::choose_wfbe_r(make_set(g, d)) == morp::choose_wfbe_r(make_set(g2, d2)));
  }
}

TEST_CASE("random target selection") {
  morp::OccupancyMap m = fixture::open_room(6, 6);
  explore_all(m);
  morp::Rng rng(1);
  CHECK_THROWS_AS(morp::choose_rnd(m, {0, 0}, rng), morp::PreconditionError);

  morp::OccupancyMap one = fixture::open_room(6, 6);
  for (std::size_t i = 1; i < one.size(); ++i) one.explore(i);
  for (int k = 0; k < 20; ++k) CHECK(morp::choose_rnd(one, {5, 5}, rng) == Cell{0, 0});

  morp::OccupancyMap four = fixture::open_room(6, 6);
  explore_all(four);
  four.set_navigable({1, 1}, true);
  four.set_navigable({4, 1}, true);
  four.set_navigable({1, 4}, true);
  four.set_navigable({4, 4}, true);
  REQUIRE(four.explored_count() == 32);
  std::map<Cell, int> counts;
  const int draws = 10000;
  for (int k = 0; k < draws; ++k) ++counts[morp::choose_rnd(four, {0, 0}, rng)];
  REQUIRE(counts.size() == 4);
  const double sigma = std::sqrt(draws * 0.25 * 0.75);
  double chi2 = 0;
  for (const auto& [cell, n] : counts) {
    CHECK(std::abs(n - draws * 0.25) <= 3 * sigma);
    chi2 += std::pow(n - draws * 0.25, 2) / (draws * 0.25);
  }
  // 3 degrees of freedom, upper 0.3% point.
  CHECK(chi2 < 14.16);
}

TEST_CASE("random targets are limited to the reachable region") {
  morp::OccupancyMap m = morp::load_map("..#..\n..#..\n");
  m.explore(m.index({0, 0}));
  morp::Rng rng(2);
  for (int k = 0; k < 50; ++k) CHECK(morp::choose_rnd(m, {0, 0}, rng).x < 2);
}

TEST_CASE("policy strings") {
  CHECK(morp::ExplorePolicy::parse("rnd").kind == morp::ExplorePolicy::Kind::Rnd);
  CHECK(morp::ExplorePolicy::parse("wfbe-r").kind == morp::ExplorePolicy::Kind::WfbeR);
  const auto w = morp::ExplorePolicy::parse("wfbe-w:0.5");
  CHECK(w.kind == morp::ExplorePolicy::Kind::WfbeW);
  CHECK(w.w == 0.5);
  CHECK(w.name() == "wfbe-w:0.5");
  CHECK(morp::ExplorePolicy::parse(w.name()) == w);
  CHECK_THROWS_AS(morp::ExplorePolicy::parse("wfbe-w:2"), morp::ConfigError);
  CHECK_THROWS_AS(morp::ExplorePolicy::parse("greedy"), morp::ConfigError);
}
