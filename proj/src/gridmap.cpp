#include "morp/gridmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "morp/kernels.hpp"
#include "morp/pathfind.hpp"
#include "morp/rng.hpp"

namespace morp {

OccupancyMap::OccupancyMap(int width, int height, double resolution)
    : width_(width), height_(height), resolution_(resolution) {
  if (width <= 0 || height <= 0) throw FormatError("map dimensions must be positive");
  if (!(resolution > 0.0)) throw FormatError("map resolution must be positive");
  cells_.assign(static_cast<std::size_t>(width) * height, CellState::Innavigable);
}

void OccupancyMap::set_navigable(Cell c, bool navigable) {
  CellState& s = cells_[index(c)];
  if (s != CellState::Innavigable) --navigable_count_;
  if (s == CellState::ExploredNavigable) --explored_count_;
  s = navigable ? CellState::UnexploredNavigable : CellState::Innavigable;
  if (navigable) ++navigable_count_;
}

bool OccupancyMap::explore(std::size_t i) {
  if (cells_[i] != CellState::UnexploredNavigable) return false;
  cells_[i] = CellState::ExploredNavigable;
  ++explored_count_;
  return true;
}

void OccupancyMap::reset_exploration() {
  for (auto& s : cells_) {
    if (s == CellState::ExploredNavigable) s = CellState::UnexploredNavigable;
  }
  explored_count_ = 0;
}

double OccupancyMap::coverage() const {
  if (navigable_count_ == 0) return 0.0;
  return static_cast<double>(explored_count_) / static_cast<double>(navigable_count_);
}

std::vector<Cell> OccupancyMap::navigable_cells() const {
  std::vector<Cell> out;
  out.reserve(navigable_count_);
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i] != CellState::Innavigable) out.push_back(cell_at(i));
  }
  return out;
}

OccupancyMap load_map(std::string_view text) {
  std::vector<std::string_view> rows;
  double resolution = kDefaultResolution;
  std::size_t pos = 0;
  bool first = true;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    if (first && line.starts_with("# ")) {
      constexpr std::string_view key = "# resolution=";
      if (!line.starts_with(key)) throw FormatError("unknown map header line: " + std::string(line));
      try {
        resolution = std::stod(std::string(line.substr(key.size())));
      } catch (const std::exception&) {
        throw FormatError("bad resolution header: " + std::string(line));
      }
      if (!(resolution > 0.0)) throw FormatError("resolution must be positive");
      first = false;
      continue;
    }
    first = false;
    if (!line.empty()) rows.push_back(line);
    if (end == text.size()) break;
  }
  if (rows.empty()) throw FormatError("empty map");
  const std::size_t width = rows.front().size();
  for (const auto& row : rows) {
    if (row.size() != width) throw FormatError("ragged map rows");
  }

  OccupancyMap map(static_cast<int>(width), static_cast<int>(rows.size()), resolution);
  std::vector<std::size_t> explored;
  for (std::size_t y = 0; y < rows.size(); ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const Cell c{static_cast<int>(x), static_cast<int>(y)};
      switch (rows[y][x]) {
        case '#': break;
        case '.': map.set_navigable(c, true); break;
        case 'o':
          map.set_navigable(c, true);
          explored.push_back(map.index(c));
          break;
        default: throw FormatError(std::string("unexpected map character '") + rows[y][x] + "'");
      }
    }
  }
  if (map.navigable_count() == 0) throw DegenerateMapError("map has no navigable cell");
  for (std::size_t i : explored) map.explore(i);
  return map;
}

OccupancyMap load_map_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open map file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_map(ss.str());
}

std::string save_map(const OccupancyMap& map, bool with_exploration) {
  std::string out;
  out.reserve(map.size() + map.height() + 32);
  if (map.resolution() != kDefaultResolution) {
    std::ostringstream hdr;
    hdr.precision(17);
    hdr << "# resolution=" << map.resolution() << '\n';
    out += hdr.str();
  }
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      switch (map.state({x, y})) {
        case CellState::Innavigable: out += '#'; break;
        case CellState::UnexploredNavigable: out += '.'; break;
        case CellState::ExploredNavigable: out += with_exploration ? 'o' : '.'; break;
      }
    }
    out += '\n';
  }
  return out;
}

void save_map_file(const OccupancyMap& map, const std::string& path, bool with_exploration) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write map file: " + path);
  out << save_map(map, with_exploration);
  if (!out) throw IoError("failed writing map file: " + path);
}

std::string_view size_class_name(SizeClass s) {
  switch (s) {
    case SizeClass::Small: return "small";
    case SizeClass::Medium: return "medium";
    case SizeClass::Large: return "large";
  }
  return "?";
}

SizeClass parse_size_class(std::string_view name) {
  if (name == "small") return SizeClass::Small;
  if (name == "medium") return SizeClass::Medium;
  if (name == "large") return SizeClass::Large;
  throw ConfigError("unknown size class: " + std::string(name));
}

double size_class_target_area(SizeClass s) {
  switch (s) {
    case SizeClass::Small: return 1.38;
    case SizeClass::Medium: return 30.53;
    case SizeClass::Large: return 66.09;
  }
  return 0.0;
}

void FovSpec::validate() const {
  if (!(theta_deg > 0.0 && theta_deg <= 360.0)) throw PreconditionError("fov theta must be in (0, 360]");
  if (!(range_m > 0.0)) throw PreconditionError("fov range must be positive");
}

std::size_t mark_explored(OccupancyMap& map, std::span<const Cell> cells) {
  for (const Cell& c : cells) {
    if (!map.navigable(c)) throw PreconditionError("mark_explored: innavigable cell");
  }
  std::size_t flipped = 0;
  for (const Cell& c : cells) flipped += map.explore(map.index(c)) ? 1 : 0;
  return flipped;
}

std::size_t count_components(const OccupancyMap& map, bool eight_connected) {
  std::vector<std::uint8_t> seen(map.size(), 0);
  std::vector<std::size_t> stack;
  std::size_t components = 0;
  for (std::size_t start = 0; start < map.size(); ++start) {
    if (!map.navigable_at(start) || seen[start]) continue;
    ++components;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const Cell c = map.cell_at(stack.back());
      stack.pop_back();
      for (int h = 0; h < kHeadingCount; ++h) {
        if (!eight_connected && h % 2 == 1) continue;
        const Cell n{c.x + kHeadingDx[h], c.y + kHeadingDy[h]};
        if (!map.navigable(n)) continue;
        const std::size_t ni = map.index(n);
        if (seen[ni]) continue;
        seen[ni] = 1;
        stack.push_back(ni);
      }
    }
  }
  return components;
}

MapStats map_stats(const OccupancyMap& map, std::size_t sample_pairs, std::uint64_t seed) {
  if (map.navigable_count() < 2) throw DegenerateMapError("map_stats needs at least two navigable cells");
  MapStats stats;
  stats.nav_area = map.nav_area_m2();
  const std::vector<Cell> cells = map.navigable_cells();
  Rng rng(derive_seed({seed, 0x6d61707374617473ULL}));
  // Group samples by source so one single-source search serves several pairs.
  constexpr std::size_t kPairsPerSource = 16;
  double worst = 1.0;
  std::size_t done = 0;
  while (done < sample_pairs) {
    const Cell source = cells[rng.index(cells.size())];
    const DistanceField field = distance_field(map, source);
    for (std::size_t k = 0; k < kPairsPerSource && done < sample_pairs; ++k, ++done) {
      Cell target = cells[rng.index(cells.size())];
      if (target == source) continue;
      const double geo = field.distance_m(target);
      if (!std::isfinite(geo)) continue;
      const double dx = target.x - source.x;
      const double dy = target.y - source.y;
      const double euclid = std::sqrt(dx * dx + dy * dy) * map.resolution();
      worst = std::max(worst, geo / euclid);
    }
  }
  stats.nav_complexity = worst;
  return stats;
}

}  // namespace morp
