#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "symreg/experiment.hpp"

namespace symreg {

std::string rows_csv(const RiskReport& r);
std::string aggregates_csv(const RiskReport& r);
std::string slopes_csv(const RiskReport& r);
std::string selections_csv(const RiskReport& r);

/// Log-log plot of mean risk against n for one scenario, with CI whiskers and
/// the fitted slopes in the legend. Empty string when the scenario has no aggregates.
std::string scenario_svg(const RiskReport& r, const std::string& scenario);

/// Writes rows.csv, aggregates.csv, slopes.csv, selections.csv and one
/// <scenario>.svg per scenario into `dir` (created if missing). Returns the paths
/// written. Throws IoError with the failing path.
std::vector<std::filesystem::path> emit_report(const RiskReport& r, const std::filesystem::path& dir);

/// Parses rows.csv text back into rows. Throws IoError on malformed lines.
std::vector<RiskRow> parse_rows_csv(const std::string& text);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace symreg
