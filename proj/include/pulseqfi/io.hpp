#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pulseqfi::io {

/// Fixed 12-significant-digit rendering; identical inputs give identical bytes.
std::string format_number(double v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> metadata;  // '#'-prefixed key: value lines
};

void write_csv(const std::filesystem::path& path, const Table& table);
Table read_csv(const std::filesystem::path& path);

/// Sidecar <stem>.json with the full parameter echo and the code version.
void write_json_sidecar(const std::filesystem::path& csv_path,
                        const std::map<std::string, std::string>& params);

enum class RegressionStatus { Pass, Fail, NoBaseline };

struct RegressionEntry {
  std::string file;
  RegressionStatus status = RegressionStatus::Pass;
  double max_rel_dev = 0.0;
  std::string worst_cell;  // "row R, column NAME"
  double tolerance = 0.0;
};

struct RegressionReport {
  std::vector<RegressionEntry> entries;
  bool ok() const;
};

/// Compare every CSV in `current` against `baseline`. A file fails when any
/// cell deviates by more than the tolerance (default 1e-6 relative, overridden
/// per table via a "tolerance" metadata line). Missing baselines are reported
/// as NoBaseline, not failures.
RegressionReport regression_check(const std::filesystem::path& baseline,
                                  const std::filesystem::path& current, double tol = 1e-6);

}  // namespace pulseqfi::io
