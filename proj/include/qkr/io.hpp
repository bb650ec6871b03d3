#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "qkr/bloch_state.hpp"
#include "qkr/observable_series.hpp"
#include "qkr/sqr.hpp"

namespace qkr::io {

/// Column-major numeric table written as CSV with a header row.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
};

/// "%.17g": shortest form that round-trips every double.
std::string format_double(double value);

void write_csv(std::ostream& out, const Table& table);
void write_csv(const std::filesystem::path& path, const Table& table);

/// t plus every non-empty column among p_mean, e_mean, norm. Column names can
/// be overridden (e.g. p_mean_avg) by passing a prefix-free suffix.
Table series_table(const ObservableSeries& series, const std::string& suffix = "");

nlohmann::json snapshot_json(const BlochWaveState& state);
BlochWaveState snapshot_from_json(const nlohmann::json& j);

/// Little-endian raw dump: "QKRS", u64 N, f64 beta, f64 drift, then N (re, im) pairs.
void write_raw_snapshot(const std::filesystem::path& path, const BlochWaveState& state);
BlochWaveState read_raw_snapshot(const std::filesystem::path& path);

nlohmann::json classification_json(const SqrRegime& regime, double slope);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace qkr::io
