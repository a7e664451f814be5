#include "morp/types.hpp"

namespace morp {

Heading heading_between(Cell a, Cell b) {
  const int dx = b.x - a.x;
  const int dy = b.y - a.y;
  for (int i = 0; i < kHeadingCount; ++i) {
    if (kHeadingDx[i] == dx && kHeadingDy[i] == dy) return heading_from_index(i);
  }
  throw PreconditionError("heading_between: cells are not 8-neighbours");
}

std::string_view heading_name(Heading h) {
  static constexpr std::array<std::string_view, 8> names = {"N", "NE", "E", "SE", "S", "SW", "W", "NW"};
  return names[heading_index(h)];
}

std::string_view action_name(Action a) {
  switch (a) {
    case Action::Forward: return "forward";
    case Action::Left: return "left";
    case Action::Right: return "right";
    case Action::GrabDrop: return "grab_drop";
  }
  return "?";
}

}  // namespace morp
