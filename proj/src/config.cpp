#include "morp/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace morp {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path);
  return ss.str();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + key + "' in " + where + ": " + e.what());
  }
}

template <typename T>
void maybe(const json& j, const std::string& key, T& out, const std::string& where) {
  if (j.contains(key)) out = get<T>(j, key, where);
}

Cell get_cell(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ConfigError(where + ": cell must be [x, y]");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

FovSpec get_fov(const json& j, const std::string& where) {
  check_keys(j, {"theta_deg", "range_m"}, where);
  FovSpec fov;
  maybe(j, "theta_deg", fov.theta_deg, where);
  maybe(j, "range_m", fov.range_m, where);
  return fov;
}

json fov_json(const FovSpec& fov) { return {{"theta_deg", fov.theta_deg}, {"range_m", fov.range_m}}; }

}  // namespace

Heading parse_heading(std::string_view name) {
  for (int i = 0; i < 8; ++i) {
    if (heading_name(heading_from_index(i)) == name) return heading_from_index(i);
  }
  throw ConfigError("unknown heading: " + std::string(name));
}

SweepConfig parse_sweep_config(std::string_view json_text) {
  const json j = parse_json(json_text);
  const std::string where = "sweep config";
  check_keys(j,
             {"size_classes", "c_values", "n_o_values", "n_r_values", "policies", "episodes_per_cell", "seed", "max_t",
              "max_dist", "fov", "maps_per_class", "exact_bound", "oracle_exact_bound", "heuristic_budget",
              "low_step_cap"},
             where);
  SweepConfig c;
  if (j.contains("size_classes")) {
    c.size_classes.clear();
    for (const auto& name : get<std::vector<std::string>>(j, "size_classes", where)) {
      c.size_classes.push_back(parse_size_class(name));
    }
  }
  maybe(j, "c_values", c.c_values, where);
  maybe(j, "n_o_values", c.n_o_values, where);
  maybe(j, "n_r_values", c.n_r_values, where);
  maybe(j, "policies", c.policies, where);
  maybe(j, "episodes_per_cell", c.episodes_per_cell, where);
  maybe(j, "seed", c.seed, where);
  maybe(j, "max_t", c.max_t, where);
  maybe(j, "max_dist", c.max_dist, where);
  if (j.contains("fov")) c.fov = get_fov(j["fov"], "fov");
  maybe(j, "maps_per_class", c.maps_per_class, where);
  maybe(j, "exact_bound", c.exact_bound, where);
  maybe(j, "oracle_exact_bound", c.oracle_exact_bound, where);
  maybe(j, "heuristic_budget", c.heuristic_budget, where);
  maybe(j, "low_step_cap", c.low_step_cap, where);
  c.validate();
  return c;
}

std::string sweep_config_to_json(const SweepConfig& c) {
  json sizes = json::array();
  for (SizeClass s : c.size_classes) sizes.push_back(std::string(size_class_name(s)));
  json j;
  j["size_classes"] = sizes;
  j["c_values"] = c.c_values;
  j["n_o_values"] = c.n_o_values;
  j["n_r_values"] = c.n_r_values;
  j["policies"] = c.policies;
  j["episodes_per_cell"] = c.episodes_per_cell;
  j["seed"] = c.seed;
  j["max_t"] = c.max_t;
  j["max_dist"] = c.max_dist;
  j["fov"] = fov_json(c.fov);
  j["maps_per_class"] = c.maps_per_class;
  j["exact_bound"] = c.exact_bound;
  j["oracle_exact_bound"] = c.oracle_exact_bound;
  j["heuristic_budget"] = c.heuristic_budget;
  j["low_step_cap"] = c.low_step_cap;
  return j.dump(2);
}

SweepConfig load_sweep_config(const std::string& path) { return parse_sweep_config(read_file(path)); }

EpisodeSpec parse_episode_spec(std::string_view json_text) {
  const json j = parse_json(json_text);
  const std::string where = "episode spec";
  check_keys(j,
             {"map", "objects", "receptacles", "spawn", "capacity", "max_t", "max_dist", "low_step_cap", "seed", "fov"},
             where);
  EpisodeSpec spec;
  if (!j.contains("map")) throw ConfigError("episode spec needs a map");
  const json& m = j["map"];
  check_keys(m, {"size", "seed", "file"}, "map");
  if (m.contains("file")) {
    if (m.contains("size")) throw ConfigError("map: give either file or size, not both");
    spec.map_ref.file = get<std::string>(m, "file", "map");
  } else if (m.contains("size")) {
    spec.map_ref.size = parse_size_class(get<std::string>(m, "size", "map"));
    maybe(m, "seed", spec.map_ref.seed, "map");
  } else {
    throw ConfigError("map: needs file or size");
  }

  if (j.contains("receptacles")) {
    int type = 0;
    for (const json& r : j["receptacles"]) {
      check_keys(r, {"type", "cell"}, "receptacle");
      ReceptacleSpec rs;
      rs.type = type++;
      maybe(r, "type", rs.type, "receptacle");
      if (!r.contains("cell")) throw ConfigError("receptacle needs a cell");
      rs.cell = get_cell(r["cell"], "receptacle");
      spec.receptacles.push_back(rs);
    }
  }
  if (j.contains("objects")) {
    int id = 0;
    for (const json& o : j["objects"]) {
      check_keys(o, {"type", "cell"}, "object");
      ObjectSpec os;
      os.id = id++;
      os.type = get<int>(o, "type", "object");
      if (!o.contains("cell")) throw ConfigError("object needs a cell");
      os.start = get_cell(o["cell"], "object");
      spec.objects.push_back(os);
    }
  }
  if (!j.contains("spawn")) throw ConfigError("episode spec needs a spawn pose");
  const json& s = j["spawn"];
  check_keys(s, {"cell", "heading"}, "spawn");
  if (!s.contains("cell")) throw ConfigError("spawn needs a cell");
  spec.spawn.cell = get_cell(s["cell"], "spawn");
  if (s.contains("heading")) spec.spawn.heading = parse_heading(get<std::string>(s, "heading", "spawn"));

  maybe(j, "capacity", spec.capacity, where);
  maybe(j, "max_t", spec.max_t, where);
  maybe(j, "max_dist", spec.max_dist, where);
  maybe(j, "low_step_cap", spec.low_step_cap, where);
  maybe(j, "seed", spec.seed, where);
  if (j.contains("fov")) spec.fov = get_fov(j["fov"], "fov");
  return spec;
}

std::string episode_spec_to_json(const EpisodeSpec& spec) {
  json j;
  if (spec.map_ref.size) {
    j["map"] = {{"size", std::string(size_class_name(*spec.map_ref.size))}, {"seed", spec.map_ref.seed}};
  } else {
    j["map"] = {{"file", spec.map_ref.file}};
  }
  j["objects"] = json::array();
  for (const ObjectSpec& o : spec.objects) j["objects"].push_back({{"type", o.type}, {"cell", {o.start.x, o.start.y}}});
  j["receptacles"] = json::array();
  for (const ReceptacleSpec& r : spec.receptacles) {
    j["receptacles"].push_back({{"type", r.type}, {"cell", {r.cell.x, r.cell.y}}});
  }
  j["spawn"] = {{"cell", {spec.spawn.cell.x, spec.spawn.cell.y}}, {"heading", std::string(heading_name(spec.spawn.heading))}};
  j["capacity"] = spec.capacity;
  j["max_t"] = spec.max_t;
  j["max_dist"] = spec.max_dist;
  j["low_step_cap"] = spec.low_step_cap;
  j["seed"] = spec.seed;
  j["fov"] = fov_json(spec.fov);
  return j.dump(2);
}

EpisodeSpec load_episode_spec(const std::string& path) {
  EpisodeSpec spec = parse_episode_spec(read_file(path));
  if (!spec.map_ref.file.empty()) {
    const std::filesystem::path file(spec.map_ref.file);
    if (file.is_relative()) spec.map_ref.file = (std::filesystem::path(path).parent_path() / file).string();
  }
  return spec;
}

OccupancyMap resolve_map(const MapRef& ref, const std::string& base_dir) {
  if (ref.size) return generate_map(ref.seed, *ref.size);
  std::filesystem::path file(ref.file);
  if (file.is_relative() && !base_dir.empty()) file = std::filesystem::path(base_dir) / file;
  return load_map_file(file.string());
}

}  // namespace morp
