#include "pulseqfi/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pulseqfi/common.hpp"
#include "pulseqfi/version.hpp"

namespace pulseqfi::io {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path.string());
  for (const auto& [k, v] : table.metadata) out << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw io_error("write_csv: row width mismatch in " + path.string());
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_number(row[i]);
    out << "\n";
  }
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read " + path.string());
  Table t;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        std::string key = line.substr(1, colon - 1);
        std::string val = line.substr(colon + 1);
        auto trim = [](std::string& s) {
          s.erase(0, s.find_first_not_of(" \t"));
          s.erase(s.find_last_not_of(" \t") + 1);
        };
        trim(key);
        trim(val);
        t.metadata[key] = val;
      }
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (!header_seen) {
      while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
      header_seen = true;
    } else {
      std::vector<double> row;
      while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

void write_json_sidecar(const std::filesystem::path& csv_path,
                        const std::map<std::string, std::string>& params) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["output"] = csv_path.filename().string();
  j["parameters"] = params;
  std::filesystem::path p = csv_path;
  p.replace_extension(".json");
  std::ofstream out(p);
  if (!out) throw io_error("cannot write " + p.string());
  out << j.dump(2) << "\n";
}

bool RegressionReport::ok() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const RegressionEntry& e) { return e.status != RegressionStatus::Fail; });
}

RegressionReport regression_check(const std::filesystem::path& baseline,
                                  const std::filesystem::path& current, double tol) {
  RegressionReport report;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(current))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  for (const auto& file : files) {
    RegressionEntry e;
    e.file = file.filename().string();
    const auto base_file = baseline / file.filename();
    if (!std::filesystem::exists(base_file)) {
      e.status = RegressionStatus::NoBaseline;
      report.entries.push_back(e);
      continue;
    }
    const Table cur = read_csv(file);
    const Table base = read_csv(base_file);
    e.tolerance = tol;
    if (auto it = cur.metadata.find("tolerance"); it != cur.metadata.end())
      e.tolerance = std::stod(it->second);
    if (base.columns != cur.columns || base.rows.size() != cur.rows.size()) {
      e.status = RegressionStatus::Fail;
      e.worst_cell = "table layout changed";
      e.max_rel_dev = std::numeric_limits<double>::infinity();
      report.entries.push_back(e);
      continue;
    }
    for (std::size_t r = 0; r < cur.rows.size(); ++r)
      for (std::size_t c = 0; c < cur.rows[r].size(); ++c) {
        const double a = base.rows[r][c], b = cur.rows[r][c];
        const double rel = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-9});
        if (rel > e.max_rel_dev) {
          e.max_rel_dev = rel;
          e.worst_cell = "row " + std::to_string(r) + ", column " + cur.columns[c];
        }
      }
    e.status = e.max_rel_dev > e.tolerance ? RegressionStatus::Fail : RegressionStatus::Pass;
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace pulseqfi::io
