#include "morp/report.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "morp/config.hpp"

#ifndef MORP_BUILD_ID
#define MORP_BUILD_ID "unknown"
#endif

namespace morp {

using nlohmann::json;

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw ConfigError("unknown report format: " + std::string(name));
}

std::string_view build_id() { return MORP_BUILD_ID; }

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("error writing " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename onto " + path);
  }
}

namespace {

constexpr std::string_view kEpisodeHeader =
    "policy,c,n_o,n_r,index,seed,size,map_seed,nav_area,status,stuck,es,ror,sor,mc,espl,path_length,oracle_z,"
    "oracle_exact,high_actions,low_steps,n_objects,initially_seen,discovered_in_plan,discovered_in_explore,"
    "first_object_path";
constexpr std::string_view kCellHeader = "policy,c,n_o,n_r,episodes,es,ror,sor,mc,espl,discovery_in_plan,stuck";

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text, std::string_view header) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != header) throw FormatError("unexpected CSV header");
  const std::size_t columns = split(header, ',').size();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(split(line, ','));
    if (rows.back().size() != columns) throw FormatError("wrong column count in CSV row");
  }
  return rows;
}

template <typename T>
T parse_number(const std::string& s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("bad number in CSV: " + s);
  return v;
}

json cell_json(const CellKey& k) { return {{"policy", k.policy}, {"c", k.c}, {"n_o", k.n_o}, {"n_r", k.n_r}}; }

CellKey cell_from_json(const json& j) {
  return {j.at("policy").get<std::string>(), j.at("c").get<int>(), j.at("n_o").get<int>(), j.at("n_r").get<int>()};
}

// nlohmann serializes doubles in shortest round-trip form.
json num(double v) { return v; }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory " + dir);
}

std::string join(const std::string& dir, const char* name) { return (std::filesystem::path(dir) / name).string(); }

}  // namespace

std::string episodes_csv(const std::vector<EpisodeRow>& rows) {
  std::string out(kEpisodeHeader);
  out += '\n';
  for (const EpisodeRow& r : rows) {
    out += r.cell.policy + ',' + std::to_string(r.cell.c) + ',' + std::to_string(r.cell.n_o) + ',' +
           std::to_string(r.cell.n_r) + ',' + std::to_string(r.index) + ',' + std::to_string(r.seed) + ',' +
           std::string(size_class_name(r.size)) + ',' + std::to_string(r.map_seed) + ',' + format_double(r.nav_area) +
           ',' + r.status + ',' + (r.stuck ? "1" : "0") + ',' + format_double(r.es) + ',' + format_double(r.ror) + ',' +
           format_double(r.sor) + ',' + format_double(r.mc) + ',' + format_double(r.espl) + ',' +
           format_double(r.path_length) + ',' + format_double(r.oracle_z) + ',' + (r.oracle_exact ? "1" : "0") + ',' +
           std::to_string(r.high_actions) + ',' + std::to_string(r.low_steps) + ',' + std::to_string(r.n_objects) + ',' +
           std::to_string(r.initially_seen) + ',' + std::to_string(r.discovered_in_plan) + ',' +
           std::to_string(r.discovered_in_explore) + ',' + format_double(r.first_object_path) + '\n';
  }
  return out;
}

std::vector<EpisodeRow> parse_episodes_csv(std::string_view text) {
  std::vector<EpisodeRow> rows;
  for (const auto& f : parse_csv(text, kEpisodeHeader)) {
    EpisodeRow r;
    std::size_t i = 0;
    r.cell.policy = f[i++];
    r.cell.c = parse_number<int>(f[i++]);
    r.cell.n_o = parse_number<int>(f[i++]);
    r.cell.n_r = parse_number<int>(f[i++]);
    r.index = parse_number<int>(f[i++]);
    r.seed = parse_number<std::uint64_t>(f[i++]);
    r.size = parse_size_class(f[i++]);
    r.map_seed = parse_number<std::uint64_t>(f[i++]);
    r.nav_area = parse_number<double>(f[i++]);
    r.status = f[i++];
    r.stuck = f[i++] == "1";
    r.es = parse_number<double>(f[i++]);
    r.ror = parse_number<double>(f[i++]);
    r.sor = parse_number<double>(f[i++]);
    r.mc = parse_number<double>(f[i++]);
    r.espl = parse_number<double>(f[i++]);
    r.path_length = parse_number<double>(f[i++]);
    r.oracle_z = parse_number<double>(f[i++]);
    r.oracle_exact = f[i++] == "1";
    r.high_actions = parse_number<int>(f[i++]);
    r.low_steps = parse_number<std::int64_t>(f[i++]);
    r.n_objects = parse_number<int>(f[i++]);
    r.initially_seen = parse_number<int>(f[i++]);
    r.discovered_in_plan = parse_number<int>(f[i++]);
    r.discovered_in_explore = parse_number<int>(f[i++]);
    r.first_object_path = parse_number<double>(f[i++]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string cells_csv(const std::vector<CellAggregate>& cells) {
  std::string out(kCellHeader);
  out += '\n';
  for (const CellAggregate& a : cells) {
    out += a.cell.policy + ',' + std::to_string(a.cell.c) + ',' + std::to_string(a.cell.n_o) + ',' +
           std::to_string(a.cell.n_r) + ',' + std::to_string(a.episodes) + ',' + format_double(a.es) + ',' +
           format_double(a.ror) + ',' + format_double(a.sor) + ',' + format_double(a.mc) + ',' + format_double(a.espl) +
           ',' + format_double(a.discovery_in_plan) + ',' + std::to_string(a.stuck) + '\n';
  }
  return out;
}

std::vector<CellAggregate> parse_cells_csv(std::string_view text) {
  std::vector<CellAggregate> cells;
  for (const auto& f : parse_csv(text, kCellHeader)) {
    CellAggregate a;
    a.cell = {f[0], parse_number<int>(f[1]), parse_number<int>(f[2]), parse_number<int>(f[3])};
    a.episodes = parse_number<int>(f[4]);
    a.es = parse_number<double>(f[5]);
    a.ror = parse_number<double>(f[6]);
    a.sor = parse_number<double>(f[7]);
    a.mc = parse_number<double>(f[8]);
    a.espl = parse_number<double>(f[9]);
    a.discovery_in_plan = parse_number<double>(f[10]);
    a.stuck = parse_number<int>(f[11]);
    cells.push_back(std::move(a));
  }
  return cells;
}

std::string scatter_csv(const std::vector<EpisodeRow>& rows) {
  std::string out = "policy,c,n_o,n_r,index,size,nav_area,espl\n";
  for (const EpisodeRow& r : rows) {
    out += r.cell.policy + ',' + std::to_string(r.cell.c) + ',' + std::to_string(r.cell.n_o) + ',' +
           std::to_string(r.cell.n_r) + ',' + std::to_string(r.index) + ',' + std::string(size_class_name(r.size)) +
           ',' + format_double(r.nav_area) + ',' + format_double(r.espl) + '\n';
  }
  return out;
}

std::string sweep_meta_json(const SweepResult& result) {
  json j;
  j["build_id"] = std::string(build_id());
  j["config"] = json::parse(sweep_config_to_json(result.config));
  j["seed"] = result.config.seed;
  j["episodes"] = result.rows.size();
  j["cells"] = result.cells.size();
  return j.dump(2) + "\n";
}

std::string sweep_json(const SweepResult& result) {
  json j;
  j["build_id"] = std::string(build_id());
  j["config"] = json::parse(sweep_config_to_json(result.config));
  j["cells"] = json::array();
  for (const CellAggregate& a : result.cells) {
    j["cells"].push_back({{"cell", cell_json(a.cell)},
                          {"episodes", a.episodes},
                          {"es", num(a.es)},
                          {"ror", num(a.ror)},
                          {"sor", num(a.sor)},
                          {"mc", num(a.mc)},
                          {"espl", num(a.espl)},
                          {"discovery_in_plan", num(a.discovery_in_plan)},
                          {"stuck", a.stuck}});
  }
  j["episodes"] = json::array();
  for (const EpisodeRow& r : result.rows) {
    j["episodes"].push_back({{"cell", cell_json(r.cell)},
                             {"index", r.index},
                             {"seed", r.seed},
                             {"size", std::string(size_class_name(r.size))},
                             {"map_seed", r.map_seed},
                             {"nav_area", num(r.nav_area)},
                             {"status", r.status},
                             {"stuck", r.stuck},
                             {"es", num(r.es)},
                             {"ror", num(r.ror)},
                             {"sor", num(r.sor)},
                             {"mc", num(r.mc)},
                             {"espl", num(r.espl)},
                             {"path_length", num(r.path_length)},
                             {"oracle_z", num(r.oracle_z)},
                             {"oracle_exact", r.oracle_exact},
                             {"high_actions", r.high_actions},
                             {"low_steps", r.low_steps},
                             {"n_objects", r.n_objects},
                             {"initially_seen", r.initially_seen},
                             {"discovered_in_plan", r.discovered_in_plan},
                             {"discovered_in_explore", r.discovered_in_explore},
                             {"first_object_path", num(r.first_object_path)}});
  }
  return j.dump(2) + "\n";
}

SweepResult parse_sweep_json(std::string_view text) {
  SweepResult result;
  try {
    const json j = json::parse(text);
    result.config = parse_sweep_config(j.at("config").dump());
    for (const json& c : j.at("cells")) {
      CellAggregate a;
      a.cell = cell_from_json(c.at("cell"));
      a.episodes = c.at("episodes").get<int>();
      a.es = c.at("es").get<double>();
      a.ror = c.at("ror").get<double>();
      a.sor = c.at("sor").get<double>();
      a.mc = c.at("mc").get<double>();
      a.espl = c.at("espl").get<double>();
      a.discovery_in_plan = c.at("discovery_in_plan").get<double>();
      a.stuck = c.at("stuck").get<int>();
      result.cells.push_back(std::move(a));
    }
    for (const json& e : j.at("episodes")) {
      EpisodeRow r;
      r.cell = cell_from_json(e.at("cell"));
      r.index = e.at("index").get<int>();
      r.seed = e.at("seed").get<std::uint64_t>();
      r.size = parse_size_class(e.at("size").get<std::string>());
      r.map_seed = e.at("map_seed").get<std::uint64_t>();
      r.nav_area = e.at("nav_area").get<double>();
      r.status = e.at("status").get<std::string>();
      r.stuck = e.at("stuck").get<bool>();
      r.es = e.at("es").get<double>();
      r.ror = e.at("ror").get<double>();
      r.sor = e.at("sor").get<double>();
      r.mc = e.at("mc").get<double>();
      r.espl = e.at("espl").get<double>();
      r.path_length = e.at("path_length").get<double>();
      r.oracle_z = e.at("oracle_z").get<double>();
      r.oracle_exact = e.at("oracle_exact").get<bool>();
      r.high_actions = e.at("high_actions").get<int>();
      r.low_steps = e.at("low_steps").get<std::int64_t>();
      r.n_objects = e.at("n_objects").get<int>();
      r.initially_seen = e.at("initially_seen").get<int>();
      r.discovered_in_plan = e.at("discovered_in_plan").get<int>();
      r.discovered_in_explore = e.at("discovered_in_explore").get<int>();
      r.first_object_path = e.at("first_object_path").get<double>();
      result.rows.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad sweep report: ") + e.what());
  }
  return result;
}

void emit_report(const SweepResult& result, const std::string& dir, ReportFormat format) {
  ensure_dir(dir);
  if (format == ReportFormat::Json) {
    write_file_atomic(join(dir, "report.json"), sweep_json(result));
    return;
  }
  write_file_atomic(join(dir, "episodes.csv"), episodes_csv(result.rows));
  write_file_atomic(join(dir, "cells.csv"), cells_csv(result.cells));
  write_file_atomic(join(dir, "scatter.csv"), scatter_csv(result.rows));
  write_file_atomic(join(dir, "meta.json"), sweep_meta_json(result));
}

std::string explore_rows_csv(const std::vector<ExploreRow>& rows) {
  std::string out = "policy,n_o,index,seed,nav_area,found_all,total_path,first_object_path\n";
  for (const ExploreRow& r : rows) {
    out += r.policy + ',' + std::to_string(r.n_o) + ',' + std::to_string(r.index) + ',' + std::to_string(r.seed) + ',' +
           format_double(r.nav_area) + ',' + (r.found_all ? "1" : "0") + ',' + format_double(r.total_path) + ',' +
           format_double(r.first_object_path) + '\n';
  }
  return out;
}

std::string explore_summary_csv(const std::vector<ExploreSummary>& summary) {
  std::string out = "policy,n_o,episodes,mean_total_path,mean_first_object_path,found_all_fraction\n";
  for (const ExploreSummary& s : summary) {
    out += s.policy + ',' + std::to_string(s.n_o) + ',' + std::to_string(s.episodes) + ',' +
           format_double(s.mean_total_path) + ',' + format_double(s.mean_first_object_path) + ',' +
           format_double(s.found_all_fraction) + '\n';
  }
  return out;
}

void emit_explore_report(const ExploreResult& result, const std::string& dir, ReportFormat format) {
  ensure_dir(dir);
  json meta;
  meta["build_id"] = std::string(build_id());
  meta["config"] = json::parse(sweep_config_to_json(result.config));
  meta["seed"] = result.config.seed;
  if (format == ReportFormat::Json) {
    json j = meta;
    j["summary"] = json::array();
    for (const ExploreSummary& s : result.summary) {
      j["summary"].push_back({{"policy", s.policy},
                              {"n_o", s.n_o},
                              {"episodes", s.episodes},
                              {"mean_total_path", num(s.mean_total_path)},
                              {"mean_first_object_path", num(s.mean_first_object_path)},
                              {"found_all_fraction", num(s.found_all_fraction)}});
    }
    j["episodes"] = json::array();
    for (const ExploreRow& r : result.rows) {
      j["episodes"].push_back({{"policy", r.policy},
                               {"n_o", r.n_o},
                               {"index", r.index},
                               {"seed", r.seed},
                               {"nav_area", num(r.nav_area)},
                               {"found_all", r.found_all},
                               {"total_path", num(r.total_path)},
                               {"first_object_path", num(r.first_object_path)}});
    }
    write_file_atomic(join(dir, "explore_report.json"), j.dump(2) + "\n");
    return;
  }
  write_file_atomic(join(dir, "explore_episodes.csv"), explore_rows_csv(result.rows));
  write_file_atomic(join(dir, "explore_summary.csv"), explore_summary_csv(result.summary));
  write_file_atomic(join(dir, "meta.json"), meta.dump(2) + "\n");
}

}  // namespace morp
