#pragma once

#include "apu/metrics.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace apu {

/// Fixed 9-significant-digit rendering; "NA" for missing values.
std::string format_number(double value);
std::string format_number(const std::optional<double>& value);

using MetricValues = std::vector<std::pair<std::string, std::optional<double>>>;

/// Scalar aggregates in the stable metrics.csv column order (after strategy, seed).
MetricValues metric_values(const MetricsReport& report);

/// Writes metrics.csv, accuracy.csv, energy.csv, flows.csv and beacons.csv into `dir`,
/// each headed by the scenario JSON and seed as comment lines.
void emit_report(const MetricsReport& report, const std::filesystem::path& dir);

/// One metrics.csv-style row per report.
void write_comparison(const std::vector<MetricsReport>& reports, const std::filesystem::path& file);

/// Rows of a CSV written by this module ('#' comment lines skipped), keyed by header.
std::vector<std::map<std::string, std::string>> read_csv(const std::filesystem::path& file);

}  // namespace apu
