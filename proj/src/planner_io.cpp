#include <json.hpp>

#include "morp/planner.hpp"

namespace morp {

std::string dump_instance(const CvrpInstance& inst) {
  nlohmann::json j;
  j["n_s"] = inst.n_s;
  j["capacity"] = inst.capacity;
  j["held"] = inst.held;
  j["object_ids"] = inst.object_ids;
  auto& locs = j["locations"] = nlohmann::json::array();
  for (const Cell& c : inst.locations) locs.push_back({c.x, c.y});
  auto& dist = j["dist"] = nlohmann::json::array();
  for (std::size_t r = 0; r < inst.dist.size(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < inst.dist.size(); ++c) row.push_back(inst.dist(r, c));
    dist.push_back(std::move(row));
  }
  return j.dump(2);
}

CvrpInstance load_instance(const std::string& text) {
  CvrpInstance inst;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    inst.n_s = j.at("n_s").get<int>();
    inst.capacity = j.at("capacity").get<int>();
    inst.held = j.at("held").get<std::vector<std::uint8_t>>();
    if (j.contains("object_ids")) inst.object_ids = j.at("object_ids").get<std::vector<int>>();
    for (const auto& c : j.at("locations")) inst.locations.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
    const auto& dist = j.at("dist");
    inst.dist = DistanceMatrix(dist.size());
    for (std::size_t r = 0; r < dist.size(); ++r) {
      if (dist[r].size() != dist.size()) throw FormatError("instance distance matrix is not square");
      for (std::size_t c = 0; c < dist.size(); ++c) {
        const double v = dist[r][c].get<double>();
        if (v != dist[c][r].get<double>()) throw FormatError("instance distance matrix is not symmetric");
        inst.dist.set(r, c, v);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad instance file: ") + e.what());
  }
  inst.validate();
  return inst;
}

}  // namespace morp
