#pragma once

/// Command-line front end: option parsing helpers, report writers and the
/// forward / inverse / validate / study commands.
///
/// Exit codes: 0 ok, 1 audit mismatch, 2 configuration error, 3 numerical failure.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heatseries/experiments.hpp"
#include "heatseries/profile.hpp"

namespace heatseries::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAudit = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Bad user input (flags, profile strings, config files, data files).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

enum class Format { Csv, Json };

std::string to_string(Format f);
Format parse_format(const std::string& s);

/// `gaussian:a=1,center=0,amp=1`, `mixture:[a=1,center=0,amp=1;a=2]`,
/// `bump:center=0,radius=1,amp=1`, `mode:order=2,a=1`, `poly:[1;0;2]`.
/// Missing keys take the defaults shown; `a` is required for gaussian and mode.
AnalyticProfile parse_profile(const std::string& spec, Geometry g);

Geometry parse_geometry(const std::string& s);

/// `a:b:n`, n >= 1 uniform points (n = 1 gives a).
std::vector<double> parse_eval_grid(const std::string& s);

/// Flat `key = value` lines under `[study]`, `[grid]`, `[sweep]`; `#` comments.
/// Errors name the offending line.
StudyConfig parse_study_config(const std::string& text);

/// 17 significant digits.
std::string format_double(double v);

/// Output table: metadata echo, column names, rows of preformatted cells.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  /// Extra JSON arrays (name, objects as key/value lists); CSV writes them as
  /// `# name: k=v ...` lines after the metadata.
  std::vector<std::pair<std::string, std::vector<std::vector<std::pair<std::string, std::string>>>>> sections;
};

/// CSV: `# key = value` lines, header row, data rows.
void write_csv(std::ostream& os, const Table& t);
/// JSON: {"metadata": {...}, "columns": [...], "rows": [[...]], <sections>}.
/// Cells that parse as numbers are written as numbers.
void write_json(std::ostream& os, const Table& t);

std::string render(const Table& t, Format f);

/// Writes via a temporary file in the same directory and a rename.
void write_atomic(const std::string& path, const std::string& content);

Table study_table(const StudyReport& report, bool timing);

/// Entry point used by tools/heatseries; returns the exit code.
int run(int argc, char** argv);

}  // namespace heatseries::cli
