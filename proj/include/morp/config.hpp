#pragma once

#include <string>
#include <string_view>

#include "morp/bench.hpp"

namespace morp {

// JSON sweep configuration. Every SweepConfig field is optional and defaults as
// in the struct; unknown keys are rejected. Throws ConfigError.
SweepConfig parse_sweep_config(std::string_view json_text);
std::string sweep_config_to_json(const SweepConfig& config);
// Throws IoError when the file cannot be read.
SweepConfig load_sweep_config(const std::string& path);

// JSON episode spec:
//   {"map": {"size": "medium", "seed": 7} | {"file": "room.map"},
//    "objects": [{"type": 0, "cell": [x, y]}, ...],
//    "receptacles": [{"cell": [x, y]}, ...],     // type = position in the list
//    "spawn": {"cell": [x, y], "heading": "N"},
//    "capacity": 3, "max_t": 100, "max_dist": 10.0, "seed": 0,
//    "fov": {"theta_deg": 360, "range_m": 2.0}}
// Throws ConfigError.
EpisodeSpec parse_episode_spec(std::string_view json_text);
std::string episode_spec_to_json(const EpisodeSpec& spec);
EpisodeSpec load_episode_spec(const std::string& path);

// Layout for a spec's map reference. Relative map files resolve against base_dir.
OccupancyMap resolve_map(const MapRef& ref, const std::string& base_dir = "");

Heading parse_heading(std::string_view name);

}  // namespace morp
