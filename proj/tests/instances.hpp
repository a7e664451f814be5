#pragma once

// Random routing instances drawn from a fixed set of cells on one generated map.
// Pairwise distances come from the test-side Dijkstra so the library's path
// code is not involved.

#include <vector>

#include "morp/planner.hpp"
#include "morp/rng.hpp"
#include "oracles.hpp"

namespace fixture {

class InstancePool {
 public:
  InstancePool(std::uint64_t map_seed, int cells, std::uint64_t seed) {
    map_ = morp::generate_map(map_seed, morp::SizeClass::Medium);
    const auto nav = map_.navigable_cells();
    morp::Rng rng(seed);
    for (int i = 0; i < cells; ++i) cells_.push_back(nav[rng.index(nav.size())]);
    d_.assign(cells_.size() * cells_.size(), 0.0);
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      const auto field = oracle::dijkstra(map_, cells_[i]);
      for (std::size_t j = 0; j < cells_.size(); ++j) {
        d_[i * cells_.size() + j] = map_.resolution() * field[map_.index(cells_[j])].value();
      }
    }
  }

  const morp::OccupancyMap& map() const { return map_; }

  // n_s objects over n_r receptacles (type i % n_r); the first n_held are held.
  morp::CvrpInstance draw(morp::Rng& rng, int n_s, int capacity, int n_held, int n_r) const {
    const std::size_t n = cells_.size();
    std::vector<std::size_t> pick(static_cast<std::size_t>(2 * n_s + 1));
    std::vector<std::size_t> recs(static_cast<std::size_t>(n_r));
    for (auto& r : recs) r = rng.index(n);
    pick[0] = rng.index(n);
    for (int i = 0; i < n_s; ++i) {
      pick[static_cast<std::size_t>(2 * i + 1)] = i < n_held ? pick[0] : rng.index(n);
      pick[static_cast<std::size_t>(2 * i + 2)] = recs[static_cast<std::size_t>(i % n_r)];
    }
    morp::CvrpInstance inst;
    inst.n_s = n_s;
    inst.capacity = capacity;
    inst.held.assign(static_cast<std::size_t>(n_s), 0);
    for (int i = 0; i < n_held; ++i) inst.held[static_cast<std::size_t>(i)] = 1;
    inst.dist = morp::DistanceMatrix(pick.size());
    for (std::size_t a = 0; a < pick.size(); ++a) {
      inst.locations.push_back(cells_[pick[a]]);
      for (std::size_t b = a + 1; b < pick.size(); ++b) inst.dist.set(a, b, d_[pick[a] * n + pick[b]]);
    }
    return inst;
  }

 private:
  morp::OccupancyMap map_;
  std::vector<morp::Cell> cells_;
  std::vector<double> d_;
};

}  // namespace fixture
