#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "morp/bench.hpp"

namespace morp {

enum class ReportFormat { Csv, Json };

ReportFormat parse_report_format(std::string_view name);

// Build identifier baked in at configure time (git describe).
std::string_view build_id();

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// Writes via a temporary file and rename. Throws IoError.
void write_file_atomic(const std::string& path, std::string_view content);

std::string episodes_csv(const std::vector<EpisodeRow>& rows);
std::string cells_csv(const std::vector<CellAggregate>& cells);
// (nav_area m^2, ESPL) per episode, tagged with the cell.
std::string scatter_csv(const std::vector<EpisodeRow>& rows);
std::string sweep_meta_json(const SweepResult& result);
std::string sweep_json(const SweepResult& result);

std::vector<EpisodeRow> parse_episodes_csv(std::string_view text);
std::vector<CellAggregate> parse_cells_csv(std::string_view text);
SweepResult parse_sweep_json(std::string_view text);

// csv: episodes.csv, cells.csv, scatter.csv, meta.json; json: report.json.
// Creates `dir` if missing. Throws IoError.
void emit_report(const SweepResult& result, const std::string& dir, ReportFormat format);

std::string explore_rows_csv(const std::vector<ExploreRow>& rows);
std::string explore_summary_csv(const std::vector<ExploreSummary>& summary);
// csv: explore_episodes.csv, explore_summary.csv, meta.json; json: explore_report.json.
void emit_explore_report(const ExploreResult& result, const std::string& dir, ReportFormat format);

}  // namespace morp
