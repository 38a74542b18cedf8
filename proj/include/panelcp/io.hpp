#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "panelcp/analysis.hpp"

namespace panelcp {

inline constexpr std::string_view kResultFormat = "panelcp-result";
inline constexpr std::string_view kThresholdFormat = "panelcp-thresholds";
inline constexpr int kFormatVersion = 1;

/// Everything needed to re-run a detection: where the panel came from and
/// the full analysis configuration.
struct RunInfo {
  std::string command;
  std::string recipe;
  std::string input;
  std::string franchise_map;
  AnalysisConfig config;
};

struct ResultDocument {
  RunInfo run;
  std::vector<Analysis> analyses;
};

struct ThresholdEntry {
  std::string label;
  std::uint64_t panel_fingerprint = 0;
  AnalysisThresholds thresholds;
};

struct ThresholdDocument {
  RunInfo run;
  std::vector<ThresholdEntry> entries;

  /// Entry for `label`. Throws ConfigError when absent.
  const ThresholdEntry& at(std::string_view label) const;
};

/// Pretty-printed JSON with a trailing newline. Identical inputs give
/// identical bytes.
std::string dump_result(const ResultDocument& doc);
std::string dump_thresholds(const ThresholdDocument& doc);

/// Inverse of the dump functions. Panels are rebuilt from the embedded
/// values and checked against their fingerprints. Throws MalformedResult.
ResultDocument parse_result(std::string_view text);
ThresholdDocument parse_thresholds(std::string_view text);

std::string read_text_file(const std::string& path);
/// Writes to a temporary file beside `path`, then renames it into place.
/// Throws IoError.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace panelcp
