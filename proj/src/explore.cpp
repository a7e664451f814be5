#include "morp/explore.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "morp/kernels.hpp"

namespace morp {

std::vector<Cell> detect_frontiers(const OccupancyMap& map) {
  std::vector<std::uint8_t> mask(map.size());
  kernels::frontier_mask(map.raw(), map.width(), map.height(), mask.data());
  std::vector<Cell> out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) out.push_back(map.cell_at(i));
  }
  return out;
}

namespace {

std::uint64_t hash_cells(const std::vector<Cell>& points) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Cell& c : points) {
    for (int v : {c.x, c.y}) {
      h ^= static_cast<std::uint32_t>(v);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

double sq_dist(const Cell& p, double cx, double cy) {
  const double dx = p.x - cx;
  const double dy = p.y - cy;
  return dx * dx + dy * dy;
}

constexpr int kMaxLloydIterations = 100;

}  // namespace

Clustering kmeans_cells(const std::vector<Cell>& points, int k) {
  Clustering out;
  const std::size_t n = points.size();
  if (n == 0 || k <= 0) return out;
  k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(k), n));

  Rng rng(hash_cells(points));
  std::vector<double> cx;
  std::vector<double> cy;
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t first = rng.index(n);
  cx.push_back(points[first].x);
  cy.push_back(points[first].y);
  while (static_cast<int>(cx.size()) < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], sq_dist(points[i], cx.back(), cy.back()));
      total += d2[i];
    }
    if (total <= 0.0) break;
    double target = rng.unit() * total;
    std::size_t pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      target -= d2[i];
      if (target < 0.0 && d2[i] > 0.0) {
        pick = i;
        break;
      }
    }
    cx.push_back(points[pick].x);
    cy.push_back(points[pick].y);
  }
  k = static_cast<int>(cx.size());

  std::vector<int> labels(n, -1);
  for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(points[i], cx[0], cy[0]);
      for (int c = 1; c < k; ++c) {
        const double d = sq_dist(points[i], cx[c], cy[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<double> sx(k, 0.0), sy(k, 0.0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sx[labels[i]] += points[i].x;
      sy[labels[i]] += points[i].y;
      ++count[labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (count[c] == 0) continue;
      cx[c] = sx[c] / static_cast<double>(count[c]);
      cy[c] = sy[c] / static_cast<double>(count[c]);
    }
  }

  // Compact away empty clusters.
  std::vector<int> remap(k, -1);
  for (std::size_t i = 0; i < n; ++i) remap[labels[i]] = 0;
  for (int c = 0; c < k; ++c) {
    if (remap[c] < 0) continue;
    remap[c] = out.k++;
    out.cx.push_back(cx[c]);
    out.cy.push_back(cy[c]);
  }
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.labels[i] = remap[labels[i]];
  return out;
}

namespace {

struct BitGrid {
  std::vector<std::uint64_t> words;
  explicit BitGrid(std::size_t bits) : words((bits + 63) / 64, 0) {}
  void set(std::size_t i) { words[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void clear() { std::fill(words.begin(), words.end(), 0); }
};

BitGrid unexplored_bits(const OccupancyMap& map) {
  BitGrid bits(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map.state_at(i) == CellState::UnexploredNavigable) bits.set(i);
  }
  return bits;
}

int gain_with(const OccupancyMap& map, const VisibilityTable& visibility, const GridPath& path, Heading start_heading,
              GainMode mode, const BitGrid& unexplored, BitGrid& covered, std::vector<std::uint32_t>& scratch) {
  covered.clear();
  if (path.cells.empty()) return 0;
  const std::size_t first = mode == GainMode::AtFrontier ? path.cells.size() - 1 : 0;
  Heading heading = start_heading;
  for (std::size_t i = 0; i < path.cells.size(); ++i) {
    if (i > 0) heading = heading_between(path.cells[i - 1], path.cells[i]);
    if (i < first) continue;
    visibility.visible(map.index(path.cells[i]), heading, scratch);
    for (std::uint32_t v : scratch) covered.set(v);
  }
  return static_cast<int>(kernels::popcount_and(covered.words.data(), unexplored.words.data(), covered.words.size()));
}

}  // namespace

int path_gain(const OccupancyMap& map, const VisibilityTable& visibility, const GridPath& path, Heading start_heading,
              GainMode mode) {
  const BitGrid unexplored = unexplored_bits(map);
  BitGrid covered(map.size());
  std::vector<std::uint32_t> scratch;
  return gain_with(map, visibility, path, start_heading, mode, unexplored, covered, scratch);
}

FrontierSet cluster_frontiers(const OccupancyMap& map, const VisibilityTable& visibility,
                              const std::vector<Cell>& frontiers, Pose agent, int k, GainMode mode) {
  if (frontiers.empty()) throw PreconditionError("cluster_frontiers: no frontiers");
  const Clustering clusters = kmeans_cells(frontiers, k);

  // Representative per cluster: member nearest the centroid, first in row-major order on ties.
  std::vector<std::size_t> rep(static_cast<std::size_t>(clusters.k), frontiers.size());
  std::vector<double> rep_d(static_cast<std::size_t>(clusters.k), std::numeric_limits<double>::infinity());
  std::vector<std::size_t> order(frontiers.size());
  for (std::size_t i = 0; i < frontiers.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return map.index(frontiers[a]) < map.index(frontiers[b]);
  });
  for (std::size_t i : order) {
    const int c = clusters.labels[i];
    const double d = sq_dist(frontiers[i], clusters.cx[c], clusters.cy[c]);
    if (d < rep_d[c]) {
      rep_d[c] = d;
      rep[c] = i;
    }
  }

  FrontierSet fs;
  const BitGrid unexplored = unexplored_bits(map);
  BitGrid covered(map.size());
  std::vector<std::uint32_t> scratch;
  for (int c = 0; c < clusters.k; ++c) {
    const Cell v = frontiers[rep[c]];
    std::optional<GridPath> path = shortest_path(map, agent.cell, v);
    if (!path || !(path->length_m > 0.0)) continue;
    FrontierCandidate cand;
    cand.cell = v;
    cand.distance_m = path->length_m;
    cand.gain = gain_with(map, visibility, *path, agent.heading, mode, unexplored, covered, scratch);
    cand.path = std::move(*path);
    fs.candidates.push_back(std::move(cand));
  }
  return fs;
}

namespace {

// Tie-break shared by both WFBE rules: smaller distance, then lower row-major index.
bool tie_prefer(const FrontierCandidate& a, const FrontierCandidate& b) {
  if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
  if (a.cell.y != b.cell.y) return a.cell.y < b.cell.y;
  return a.cell.x < b.cell.x;
}

}  // namespace

std::size_t choose_wfbe_r(const FrontierSet& fs) {
  if (fs.empty()) throw PreconditionError("choose_wfbe_r: empty frontier set");
  std::size_t best = 0;
  double best_ratio = -1.0;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const auto& c = fs.candidates[k];
    if (!(c.distance_m > 0.0)) throw PreconditionError("choose_wfbe_r: non-positive frontier distance");
    const double ratio = static_cast<double>(c.gain) / c.distance_m;
    if (ratio > best_ratio || (ratio == best_ratio && tie_prefer(c, fs.candidates[best]))) {
      best_ratio = ratio;
      best = k;
    }
  }
  return best;
}

std::size_t choose_wfbe_w(const FrontierSet& fs, double w) {
  if (fs.empty()) throw PreconditionError("choose_wfbe_w: empty frontier set");
  if (!(w >= 0.0 && w <= 1.0)) throw PreconditionError("choose_wfbe_w: w must be in [0, 1]");
  double sum_d = 0.0;
  double sum_g = 0.0;
  for (const auto& c : fs.candidates) {
    sum_d += c.distance_m;
    sum_g += c.gain;
  }
  std::size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const auto& c = fs.candidates[k];
    const double nd = sum_d > 0.0 ? c.distance_m / sum_d : 0.0;
    const double ng = sum_g > 0.0 ? c.gain / sum_g : 0.0;
    const double score = w * nd + (1.0 - w) * ng;
    if (score < best_score || (score == best_score && tie_prefer(c, fs.candidates[best]))) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

Cell choose_rnd(const OccupancyMap& map, Cell from, Rng& rng) {
  const std::vector<std::uint8_t> reach = reachable_mask(map, from);
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (reach[i] && map.state_at(i) == CellState::UnexploredNavigable) pool.push_back(i);
  }
  if (pool.empty()) throw PreconditionError("choose_rnd: no reachable unexplored cell");
  return map.cell_at(pool[rng.index(pool.size())]);
}

ExplorePolicy ExplorePolicy::parse(std::string_view text) {
  ExplorePolicy p;
  if (text == "rnd") {
    p.kind = Kind::Rnd;
    return p;
  }
  if (text == "wfbe-r") {
    p.kind = Kind::WfbeR;
    return p;
  }
  constexpr std::string_view prefix = "wfbe-w:";
  if (text.starts_with(prefix)) {
    const std::string_view num = text.substr(prefix.size());
    double w = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), w);
    if (ec != std::errc() || ptr != num.data() + num.size() || !(w >= 0.0 && w <= 1.0)) {
      throw ConfigError("bad WFBE weight in policy: " + std::string(text));
    }
    p.kind = Kind::WfbeW;
    p.w = w;
    return p;
  }
  throw ConfigError("unknown exploration policy: " + std::string(text));
}

std::string ExplorePolicy::name() const {
  switch (kind) {
    case Kind::Rnd: return "rnd";
    case Kind::WfbeR: return "wfbe-r";
    case Kind::WfbeW: {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof(buf), w);
      return "wfbe-w:" + std::string(buf, res.ptr);
    }
  }
  return "?";
}

}  // namespace morp
