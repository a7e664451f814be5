#pragma once

// Reference implementations used only by tests. None of this calls into the
// library code under test beyond plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "morp/gridmap.hpp"
#include "morp/planner.hpp"

namespace oracle {

// Exact octile cost as (straight, diagonal) step counts.
struct Octile {
  std::int64_t s = 0;
  std::int64_t d = 0;
  double value() const { return static_cast<double>(s) + static_cast<double>(d) * 1.4142135623730951; }
  bool operator==(const Octile&) const = default;
};

// a < b evaluated without rounding: a.s + a.d*r2 < b.s + b.d*r2.
inline bool less(const Octile& a, const Octile& b) {
  const std::int64_t ds = a.s - b.s;
  const std::int64_t dd = b.d - a.d;  // compare ds < dd * sqrt(2)
  if (ds < 0 && dd >= 0) return true;
  if (ds >= 0 && dd <= 0) return false;
  if (ds < 0) return ds * ds > 2 * dd * dd;  // both negative
  return ds * ds < 2 * dd * dd;              // both positive
}

inline bool free_cell(const morp::OccupancyMap& m, int x, int y) {
  return x >= 0 && y >= 0 && x < m.width() && y < m.height() && m.navigable(morp::Cell{x, y});
}

// Plain single-source Dijkstra over 8-neighbours with no corner cutting.
// Returns per-cell costs; unreachable cells have s = -1.
inline std::vector<Octile> dijkstra(const morp::OccupancyMap& m, morp::Cell src) {
  const int w = m.width();
  const int h = m.height();
  std::vector<Octile> dist(static_cast<std::size_t>(w) * h, Octile{-1, 0});
  std::vector<char> done(dist.size(), 0);
  struct Item {
    Octile c;
    int idx;
  };
  auto cmp = [](const Item& a, const Item& b) { return less(b.c, a.c); };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
  const int s = src.y * w + src.x;
  dist[s] = {0, 0};
  pq.push({{0, 0}, s});
  while (!pq.empty()) {
    const Item it = pq.top();
    pq.pop();
    if (done[it.idx]) continue;
    done[it.idx] = 1;
    const int x = it.idx % w;
    const int y = it.idx / w;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int nx = x + dx;
        const int ny = y + dy;
        if (!free_cell(m, nx, ny)) continue;
        const bool diag = dx != 0 && dy != 0;
        if (diag && (!free_cell(m, x + dx, y) || !free_cell(m, x, y + dy))) continue;
        Octile c = it.c;
        if (diag) {
          ++c.d;
        } else {
          ++c.s;
        }
        const int ni = ny * w + nx;
        if (dist[ni].s < 0 || less(c, dist[ni])) {
          dist[ni] = c;
          pq.push({c, ni});
        }
      }
    }
  }
  return dist;
}

// Number of 8-connected navigable components by flood fill.
inline int components8(const morp::OccupancyMap& m) {
  const int w = m.width();
  const int h = m.height();
  std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
  int count = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (seen[y * w + x] || !free_cell(m, x, y)) continue;
      ++count;
      std::vector<int> stack{y * w + x};
      seen[y * w + x] = 1;
      while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = i % w + dx;
            const int ny = i / w + dy;
            if (!free_cell(m, nx, ny) || seen[ny * w + nx]) continue;
            seen[ny * w + nx] = 1;
            stack.push_back(ny * w + nx);
          }
        }
      }
    }
  }
  return count;
}

// Route constraints checked directly from their definitions: start at 0, every
// location exactly once, pickup before dropoff, held pickups first, prefix load
// (held pickups included) never above capacity.
inline bool valid_route(const morp::CvrpInstance& inst, const std::vector<int>& order) {
  const int n = inst.n_s;
  const int locations = 2 * n + 1;
  if (static_cast<int>(order.size()) != locations || order.empty() || order[0] != 0) return false;
  std::vector<int> position(static_cast<std::size_t>(locations), -1);
  for (int k = 0; k < locations; ++k) {
    const int loc = order[static_cast<std::size_t>(k)];
    if (loc < 0 || loc >= locations || position[static_cast<std::size_t>(loc)] != -1) return false;
    position[static_cast<std::size_t>(loc)] = k;
  }
  int held = 0;
  for (int i = 0; i < n; ++i) held += inst.held[static_cast<std::size_t>(i)] ? 1 : 0;
  for (int i = 0; i < n; ++i) {
    const int p = position[static_cast<std::size_t>(2 * i + 1)];
    const int q = position[static_cast<std::size_t>(2 * i + 2)];
    if (q <= p) return false;
    if (inst.held[static_cast<std::size_t>(i)] && p > held) return false;
  }
  int load = 0;
  for (int k = 1; k < locations; ++k) {
    load += order[static_cast<std::size_t>(k)] % 2 == 1 ? 1 : -1;
    if (load > inst.capacity || load < 0) return false;
  }
  return true;
}

inline double route_sum(const morp::CvrpInstance& inst, const std::vector<int>& order) {
  double total = 0.0;
  for (std::size_t k = 1; k < order.size(); ++k) {
    total += inst.dist(static_cast<std::size_t>(order[k - 1]), static_cast<std::size_t>(order[k]));
  }
  return total;
}

struct BruteResult {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<int> order;
  long feasible = 0;
};

// Every permutation of 1..2n in lexicographic order; first strict minimum wins.
inline BruteResult brute_force(const morp::CvrpInstance& inst) {
  BruteResult best;
  std::vector<int> order(static_cast<std::size_t>(2 * inst.n_s + 1));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  do {
    if (!valid_route(inst, order)) continue;
    ++best.feasible;
    const double c = route_sum(inst, order);
    if (c < best.cost) {
      best.cost = c;
      best.order = order;
    }
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return best;
}

// Cells of an open disc of radius r (cells), by direct rasterisation.
inline int disc_count(int r) {
  int n = 0;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if (dx * dx + dy * dy <= r * r) ++n;
    }
  }
  return n;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
