#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "morp/bench.hpp"
#include "morp/config.hpp"
#include "morp/kernels.hpp"
#include "morp/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitOther = 1;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  morp::write_file_atomic(path, text);
}

int cmd_gen_maps(const std::vector<std::string>& sizes, int count, std::uint64_t seed, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw morp::IoError("cannot create " + out_dir);
  std::string index = "file,size,seed,nav_area,nav_complexity\n";
  for (const std::string& name : sizes) {
    const morp::SizeClass size = morp::parse_size_class(name);
    for (int i = 0; i < count; ++i) {
      const std::uint64_t map_seed = morp::derive_seed({seed, static_cast<std::uint64_t>(size), static_cast<std::uint64_t>(i)});
      const morp::OccupancyMap map = morp::generate_map(map_seed, size);
      const std::string file = name + "_" + std::to_string(i) + ".map";
      morp::write_file_atomic((std::filesystem::path(out_dir) / file).string(), morp::save_map(map, false));
      const morp::MapStats stats = morp::map_stats(map);
      index += file + ',' + name + ',' + std::to_string(map_seed) + ',' + morp::format_double(stats.nav_area) + ',' +
               morp::format_double(stats.nav_complexity) + '\n';
    }
  }
  morp::write_file_atomic((std::filesystem::path(out_dir) / "maps.csv").string(), index);
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, const std::string& format, int threads) {
  const morp::ReportFormat fmt = morp::parse_report_format(format);
  const morp::SweepConfig config = morp::load_sweep_config(config_path);
  const morp::SweepResult result = morp::run_sweep(config, threads);
  morp::emit_report(result, out_dir, fmt);
  std::cout << morp::cells_csv(result.cells);
  return kExitOk;
}

int cmd_explore(const std::string& config_path, const std::string& out_dir, const std::string& format, int threads) {
  const morp::ReportFormat fmt = morp::parse_report_format(format);
  const morp::SweepConfig config = morp::load_sweep_config(config_path);
  const morp::ExploreResult result = morp::run_exploration_benchmark(config, threads);
  morp::emit_explore_report(result, out_dir, fmt);
  std::cout << morp::explore_summary_csv(result.summary);
  return kExitOk;
}

int cmd_timing(const morp::TimingSweepConfig& config, const std::string& out) {
  const std::vector<morp::TimingRow> rows = morp::solver_timing_sweep(config);
  std::ostringstream ss;
  morp::write_timing_csv(ss, rows);
  write_text(out, ss.str());
  return kExitOk;
}

int cmd_episode(const std::string& spec_path, const std::string& agent, const std::string& trace_path) {
  const morp::EpisodeSpec spec = morp::load_episode_spec(spec_path);
  const morp::OccupancyMap layout = morp::resolve_map(spec.map_ref);
  try {
    spec.validate(layout);
  } catch (const morp::SpecError& e) {
    throw morp::ConfigError(e.what());
  }
  auto visibility = std::make_shared<const morp::VisibilityTable>(layout, spec.fov);
  morp::RunOptions options;
  options.keep_trace = !trace_path.empty();

  morp::EpisodeResult result;
  constexpr std::string_view prefix = "heuristic:";
  if (agent == "oracle") {
    result = morp::run_oracle_episode(spec, layout, visibility, options);
  } else if (agent.starts_with(prefix)) {
    morp::AgentConfig config;
    config.policy = morp::ExplorePolicy::parse(std::string_view(agent).substr(prefix.size()));
    result = morp::run_episode(spec, layout, visibility, config, options);
  } else {
    throw morp::ConfigError("agent must be 'oracle' or 'heuristic:<policy>', got '" + agent + "'");
  }

  if (!trace_path.empty()) {
    std::ostringstream ss;
    morp::write_trace_csv(ss, result.trace);
    write_text(trace_path, ss.str());
  }
  nlohmann::json j;
  j["status"] = std::string(morp::status_name(result.status));
  j["es"] = result.metrics.es;
  j["ror"] = result.metrics.ror;
  j["sor"] = result.metrics.sor;
  j["mc"] = result.metrics.mc;
  j["espl"] = result.metrics.espl;
  j["path_length"] = result.path_length;
  j["oracle_z"] = result.oracle_z;
  j["oracle_exact"] = result.oracle_exact;
  j["high_actions"] = result.high_actions;
  j["low_steps"] = result.low_steps;
  j["stuck"] = result.stuck;
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-object rearrangement simulator, planners and benchmarks"};
  app.require_subcommand(1);
  std::string isa = "auto";
  app.add_option("--isa", isa, "Kernel variant: auto, scalar or avx2")->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  std::vector<std::string> sizes{"small", "medium", "large"};
  int count = 4;
  std::uint64_t map_seed = 0;
  std::string maps_out = "maps";
  auto* gen = app.add_subcommand("gen-maps", "Generate map files and a stats index");
  gen->add_option("--size", sizes, "Size classes")->check(CLI::IsMember({"small", "medium", "large"}));
  gen->add_option("--count", count, "Maps per size class")->check(CLI::PositiveNumber);
  gen->add_option("--seed", map_seed, "Base seed");
  gen->add_option("--out", maps_out, "Output directory");

  std::string config_path;
  std::string out_dir = "report";
  std::string format = "csv";
  int threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Run a benchmark sweep");
  sweep->add_option("--config", config_path, "Sweep config (JSON)")->required();
  sweep->add_option("--out", out_dir, "Report directory");
  sweep->add_option("--format", format, "csv or json");
  sweep->add_option("--threads", threads, "Worker threads (MORP_THREADS overrides)");

  auto* explore = app.add_subcommand("explore-bench", "Exploration-only benchmark");
  explore->add_option("--config", config_path, "Sweep config (JSON)")->required();
  explore->add_option("--out", out_dir, "Report directory");
  explore->add_option("--format", format, "csv or json");
  explore->add_option("--threads", threads, "Worker threads (MORP_THREADS overrides)");

  morp::TimingSweepConfig timing;
  std::string timing_out;
  auto* solver = app.add_subcommand("solver-timing", "Exact vs heuristic solver timing sweep");
  solver->add_option("--n-o", timing.n_o_values, "Object counts");
  solver->add_option("--c", timing.c_values, "Capacities");
  solver->add_option("--instances", timing.instances_per_cell, "Instances per cell")->check(CLI::PositiveNumber);
  solver->add_option("--seed", timing.seed, "Seed");
  solver->add_option("--exact-bound", timing.exact_bound, "Exact solver bound");
  solver->add_option("--out", timing_out, "CSV output (stdout if omitted)");

  std::string spec_path;
  std::string agent;
  std::string trace_path;
  auto* episode = app.add_subcommand("episode", "Run one episode");
  episode->add_option("--spec", spec_path, "Episode spec (JSON)")->required();
  episode->add_option("--agent", agent, "oracle or heuristic:<rnd|wfbe-r|wfbe-w:W>")->required();
  episode->add_option("--trace", trace_path, "Trace CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (isa == "scalar") morp::kernels::set_isa(morp::kernels::Isa::Scalar);
    if (isa == "avx2") morp::kernels::set_isa(morp::kernels::Isa::Avx2);
    if (*gen) return cmd_gen_maps(sizes, count, map_seed, maps_out);
    if (*sweep) return cmd_sweep(config_path, out_dir, format, threads);
    if (*explore) return cmd_explore(config_path, out_dir, format, threads);
    if (*solver) return cmd_timing(timing, timing_out);
    if (*episode) return cmd_episode(spec_path, agent, trace_path);
  } catch (const morp::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const morp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const morp::SpecError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const morp::CapacityError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const morp::FormatError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
  return kExitOther;
}
