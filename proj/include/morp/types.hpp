#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace morp {

// Grid coordinates: x is the column, y is the row (row 0 is the top / north edge).
struct Cell {
  int x = 0;
  int y = 0;

  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

// Eight headings, clockwise from north.
enum class Heading : std::uint8_t { N = 0, NE, E, SE, S, SW, W, NW };

inline constexpr int kHeadingCount = 8;

inline constexpr std::array<int, 8> kHeadingDx = {0, 1, 1, 1, 0, -1, -1, -1};
inline constexpr std::array<int, 8> kHeadingDy = {-1, -1, 0, 1, 1, 1, 0, -1};

constexpr int heading_index(Heading h) { return static_cast<int>(h); }
constexpr Heading heading_from_index(int i) { return static_cast<Heading>(((i % 8) + 8) % 8); }
constexpr Heading turned_left(Heading h) { return heading_from_index(heading_index(h) - 1); }
constexpr Heading turned_right(Heading h) { return heading_from_index(heading_index(h) + 1); }
constexpr bool is_diagonal(Heading h) { return heading_index(h) % 2 == 1; }

constexpr Cell step_cell(Cell c, Heading h) {
  return {c.x + kHeadingDx[heading_index(h)], c.y + kHeadingDy[heading_index(h)]};
}

// Heading of the unit move a -> b; b must be one of the 8 neighbours of a.
Heading heading_between(Cell a, Cell b);

std::string_view heading_name(Heading h);

struct Pose {
  Cell cell;
  Heading heading = Heading::N;

  friend constexpr bool operator==(const Pose&, const Pose&) = default;
};

enum class Action : std::uint8_t { Forward, Left, Right, GrabDrop };

std::string_view action_name(Action a);

// Error taxonomy. Every failure mode named by an operation contract maps to one of these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class DegenerateMapError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class SpecError : public Error {
 public:
  using Error::Error;
};

class StateError : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

class EmptyInstanceError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace morp
