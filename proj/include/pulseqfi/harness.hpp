#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pulseqfi::harness {

/// Flat key-value text with [section] headers, '#' comments, 'key = value'
/// lines; keys flatten to "section.key".
using KeyValueMap = std::map<std::string, std::string>;

KeyValueMap parse_config_file(const std::filesystem::path& path);

std::vector<double> parse_double_list(const std::string& csv);
std::vector<double> logspace(double lo, double hi, int n);

struct RunConfig {
  std::string command;  // single-photon | jc | km-validate | biphoton | sodium | figure | regression-check
  std::string figure;   // fig2 | fig3 | fig4 | fig5 | fig7 | fig8
  std::string out_dir = ".";

  std::string shape = "gaussian";
  double duration = 1.0;
  double arrival = 0.0;
  std::string shape_csv;  // sampled amplitude data

  double gamma_T = 1.0;
  double gamma_perp_ratio = 0.0;
  int points_per_unit = 64;
  double t_end_over_T = 10.0;

  std::vector<double> gamma_T_grid;  // sweep grid; defaults to 20 log-spaced in [0.05, 10]
  std::string state = "fock:1";

  double sigma_p = 1.0 / 0.15;  // biphoton pump width (inverse time units)
  double t_qent = 2.09;         // entanglement time (same time units)

  std::string baseline_dir, current_dir;  // regression-check
  double tolerance = 1e-6;

  /// Build from flattened keys; unknown keys and malformed values throw
  /// std::invalid_argument naming the offending field.
  static RunConfig from_map(const KeyValueMap& kv);
};

struct RunResult {
  int exit_code = 0;
  std::vector<std::filesystem::path> outputs;
  std::vector<std::string> report_lines;  // regression-check findings and similar
};

/// Dispatch a validated config to the owning module, writing CSV tables and
/// JSON sidecars under out_dir. Module errors propagate as exceptions.
RunResult run(const RunConfig& cfg);

}  // namespace pulseqfi::harness
