#include <algorithm>
#include <cmath>
#include <memory>

#include "morp/gridmap.hpp"
#include "morp/rng.hpp"

namespace morp {

namespace {

constexpr int kCanvasWidth = 200;
constexpr int kCanvasHeight = 150;
constexpr int kMaxAttempts = 400;
// Internal acceptance band; tighter than the +-30% contract so the result stays inside it.
constexpr double kAreaBand = 0.25;

struct Rect {
  int x, y, w, h;
  Cell centre() const { return {x + w / 2, y + h / 2}; }
};

struct Layout {
  int region_w_min, region_w_max;
  int region_h_min, region_h_max;
  int leaf_max;
  int leaf_min;
};

Layout layout_for(SizeClass s) {
  switch (s) {
    case SizeClass::Small: return {10, 15, 9, 14, 1000, 1};
    case SizeClass::Medium: return {70, 92, 52, 70, 30, 12};
    case SizeClass::Large: return {110, 140, 82, 104, 30, 12};
  }
  return {};
}

struct Node {
  Rect area;
  std::unique_ptr<Node> left;
  std::unique_ptr<Node> right;
  Rect room{0, 0, 0, 0};
  bool leaf() const { return !left; }
};

void split(Node& node, const Layout& layout, Rng& rng) {
  const Rect a = node.area;
  const bool can_split_w = a.w > layout.leaf_max && a.w >= 2 * layout.leaf_min;
  const bool can_split_h = a.h > layout.leaf_max && a.h >= 2 * layout.leaf_min;
  if (!can_split_w && !can_split_h) return;
  bool vertical = can_split_w;
  if (can_split_w && can_split_h) vertical = a.w >= a.h;
  const int extent = vertical ? a.w : a.h;
  const int lo = std::max(layout.leaf_min, extent * 2 / 5);
  const int hi = std::min(extent - layout.leaf_min, extent * 3 / 5);
  const int cut = lo >= hi ? extent / 2 : rng.range(lo, hi);
  node.left = std::make_unique<Node>();
  node.right = std::make_unique<Node>();
  if (vertical) {
    node.left->area = {a.x, a.y, cut, a.h};
    node.right->area = {a.x + cut, a.y, a.w - cut, a.h};
  } else {
    node.left->area = {a.x, a.y, a.w, cut};
    node.right->area = {a.x, a.y + cut, a.w, a.h - cut};
  }
  split(*node.left, layout, rng);
  split(*node.right, layout, rng);
}

void carve_rect(OccupancyMap& map, const Rect& r) {
  for (int y = r.y; y < r.y + r.h; ++y) {
    for (int x = r.x; x < r.x + r.w; ++x) {
      if (map.in_bounds({x, y})) map.set_navigable({x, y}, true);
    }
  }
}

void place_rooms(Node& node, OccupancyMap& map, Rng& rng, bool single_room) {
  if (!node.leaf()) {
    place_rooms(*node.left, map, rng, single_room);
    place_rooms(*node.right, map, rng, single_room);
    return;
  }
  const Rect a = node.area;
  if (single_room) {
    node.room = a;
  } else {
    const int pad_l = rng.range(1, 3);
    const int pad_r = rng.range(1, 3);
    const int pad_t = rng.range(1, 3);
    const int pad_b = rng.range(1, 3);
    node.room = {a.x + pad_l, a.y + pad_t, std::max(3, a.w - pad_l - pad_r), std::max(3, a.h - pad_t - pad_b)};
  }
  carve_rect(map, node.room);
}

// A room from the subtree, chosen pseudo-randomly.
const Rect& pick_room(const Node& node, Rng& rng) {
  if (node.leaf()) return node.room;
  return rng.index(2) == 0 ? pick_room(*node.left, rng) : pick_room(*node.right, rng);
}

void carve_corridor(OccupancyMap& map, Cell a, Cell b, int width, bool horizontal_first) {
  auto horizontal = [&](int y, int x0, int x1) {
    carve_rect(map, {std::min(x0, x1), y, std::abs(x1 - x0) + width, width});
  };
  auto vertical = [&](int x, int y0, int y1) {
    carve_rect(map, {x, std::min(y0, y1), width, std::abs(y1 - y0) + width});
  };
  if (horizontal_first) {
    horizontal(a.y, a.x, b.x);
    vertical(b.x, a.y, b.y);
  } else {
    vertical(a.x, a.y, b.y);
    horizontal(b.y, a.x, b.x);
  }
}

void connect(const Node& node, OccupancyMap& map, Rng& rng) {
  if (node.leaf()) return;
  connect(*node.left, map, rng);
  connect(*node.right, map, rng);
  const Cell a = pick_room(*node.left, rng).centre();
  const Cell b = pick_room(*node.right, rng).centre();
  carve_corridor(map, a, b, rng.range(2, 3), rng.index(2) == 0);
}

OccupancyMap attempt(std::uint64_t seed, SizeClass size) {
  Rng rng(seed);
  const Layout layout = layout_for(size);
  const int w = rng.range(layout.region_w_min, layout.region_w_max);
  const int h = rng.range(layout.region_h_min, layout.region_h_max);
  // Keep one wall cell on every canvas border.
  const int x0 = rng.range(1, kCanvasWidth - w - 1);
  const int y0 = rng.range(1, kCanvasHeight - h - 1);

  OccupancyMap map(kCanvasWidth, kCanvasHeight, kDefaultResolution);
  Node root;
  root.area = {x0, y0, w, h};
  const bool single = size == SizeClass::Small;
  if (!single) split(root, layout, rng);
  place_rooms(root, map, rng, single);
  connect(root, map, rng);
  return map;
}

}  // namespace

OccupancyMap generate_map(std::uint64_t seed, SizeClass size) {
  const double target = size_class_target_area(size);
  for (int i = 0; i < kMaxAttempts; ++i) {
    OccupancyMap map = attempt(derive_seed({seed, static_cast<std::uint64_t>(size), static_cast<std::uint64_t>(i)}), size);
    const double area = map.nav_area_m2();
    if (std::abs(area - target) > kAreaBand * target) continue;
    if (count_components(map, false) != 1) continue;
    return map;
  }
  throw GenerationError("generate_map: no layout met the area/connectivity targets");
}

}  // namespace morp
