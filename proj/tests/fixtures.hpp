#pragma once

#include <memory>
#include <string>

#include "morp/gridmap.hpp"
#include "morp/sim.hpp"

namespace fixture {

// Fully navigable w x h room.
inline morp::OccupancyMap open_room(int w, int h) {
  morp::OccupancyMap m(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) m.set_navigable({x, y}, true);
  }
  return m;
}

// Room with an innavigable border ring.
inline morp::OccupancyMap walled_room(int w, int h) {
  morp::OccupancyMap m(w, h);
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) m.set_navigable({x, y}, true);
  }
  return m;
}

inline std::shared_ptr<const morp::VisibilityTable> table(const morp::OccupancyMap& m, const morp::FovSpec& fov = {}) {
  return std::make_shared<const morp::VisibilityTable>(m, fov);
}

}  // namespace fixture
