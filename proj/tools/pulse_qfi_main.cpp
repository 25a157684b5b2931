// pulse-qfi: precision-bound tables for pulsed-light dipole estimation.
//
// Subcommands map onto the library modules; every flag has a config-file twin
// (flat key = value with [section] headers) and command-line values win.

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>

#include "pulseqfi/common.hpp"
#include "pulseqfi/harness.hpp"
#include "pulseqfi/version.hpp"

namespace {

int fail(int code, const std::string& kind, const std::string& message) {
  nlohmann::json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pulse-qfi: Fisher-information bounds for pulsed quantum light spectroscopy"};
  app.set_version_flag("--version", pulseqfi::kVersion);
  app.require_subcommand(1);

  std::string config_file, out_dir, shape, state, figure, grid_list, shape_csv;
  std::string baseline_dir, current_dir;
  double duration = 0, arrival = 0, gamma_T = 0, ratio = -1, t_end = 0, sigma_p = 0, t_qent = 0;
  double tolerance = 0;
  int ppu = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_file, "config file (flat key = value with [section]s)");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--shape", shape, "pulse shape name");
    cmd->add_option("--T", duration, "pulse duration parameter");
    cmd->add_option("--arrival", arrival, "pulse arrival time");
    cmd->add_option("--shape-csv", shape_csv, "sampled amplitude CSV (time, amplitude)");
    cmd->add_option("--gammaT", grid_list, "Gamma*T value or comma list");
    cmd->add_option("--gamma-perp-ratio", ratio, "Gamma_perp / Gamma");
    cmd->add_option("--points-per-unit", ppu, "grid density per shortest time scale");
    cmd->add_option("--t-end", t_end, "evaluation end time, units of T past arrival");
    cmd->add_option("--state", state, "pulse state: fock:N | coherent:A | squeezed:R");
    cmd->add_option("--sigma-p", sigma_p, "biphoton pump spectral width");
    cmd->add_option("--t-qent", t_qent, "biphoton entanglement time");
  };

  CLI::App* c_single = app.add_subcommand("single-photon", "asymptotic single-photon sweep");
  CLI::App* c_jc = app.add_subcommand("jc", "short-pulse Jaynes-Cummings QFI");
  CLI::App* c_km = app.add_subcommand("km-validate", "cascaded-mode master-equation validation");
  CLI::App* c_biph = app.add_subcommand("biphoton", "Gaussian-JSA Schmidt data");
  CLI::App* c_na = app.add_subcommand("sodium", "sodium D2 derived quantities (SI)");
  CLI::App* c_fig = app.add_subcommand("figure", "reproduce a named figure table");
  c_fig->add_option("name", figure, "fig2|fig3|fig4|fig5|fig7|fig8")->required();
  CLI::App* c_reg = app.add_subcommand("regression-check", "compare CSV directories");
  c_reg->add_option("baseline", baseline_dir, "baseline directory")->required();
  c_reg->add_option("current", current_dir, "current directory")->required();
  c_reg->add_option("--tolerance", tolerance, "relative tolerance (default 1e-6)");
  for (CLI::App* c : {c_single, c_jc, c_km, c_biph, c_na, c_fig, c_reg}) add_common(c);

  CLI11_PARSE(app, argc, argv);

  try {
    pulseqfi::harness::KeyValueMap kv;
    if (!config_file.empty()) kv = pulseqfi::harness::parse_config_file(config_file);

    // command-line overrides
    kv["run.command"] = app.get_subcommands().front()->get_name();
    if (!figure.empty()) kv["run.figure"] = figure;
    if (!out_dir.empty()) kv["run.out"] = out_dir;
    if (!shape.empty()) kv["shape.kind"] = shape;
    if (duration > 0) kv["shape.duration"] = std::to_string(duration);
    if (arrival != 0) kv["shape.arrival"] = std::to_string(arrival);
    if (!shape_csv.empty()) kv["shape.csv"] = shape_csv;
    if (!grid_list.empty()) kv["sweep.gamma_T_grid"] = grid_list;
    if (ratio >= 0) kv["coupling.gamma_perp_ratio"] = std::to_string(ratio);
    if (ppu > 0) kv["coupling.points_per_unit"] = std::to_string(ppu);
    if (t_end > 0) kv["coupling.t_end_over_T"] = std::to_string(t_end);
    if (!state.empty()) kv["jc.state"] = state;
    if (sigma_p > 0) kv["biphoton.sigma_p"] = std::to_string(sigma_p);
    if (t_qent > 0) kv["biphoton.t_qent"] = std::to_string(t_qent);
    if (!baseline_dir.empty()) kv["regression.baseline"] = baseline_dir;
    if (!current_dir.empty()) kv["regression.current"] = current_dir;
    if (tolerance > 0) kv["regression.tolerance"] = std::to_string(tolerance);

    const auto cfg = pulseqfi::harness::RunConfig::from_map(kv);
    const auto result = pulseqfi::harness::run(cfg);
    for (const auto& line : result.report_lines) std::cout << line << "\n";
    for (const auto& p : result.outputs) std::cout << "wrote " << p.string() << "\n";
    return result.exit_code;
  } catch (const std::invalid_argument& e) {
    return fail(2, "invalid-config", e.what());
  } catch (const pulseqfi::io_error& e) {
    return fail(2, "io", e.what());
  } catch (const pulseqfi::resolution_error& e) {
    return fail(3, "resolution", e.what());
  } catch (const pulseqfi::regime_error& e) {
    return fail(3, "regime", e.what());
  } catch (const pulseqfi::truncation_error& e) {
    return fail(3, "truncation", e.what());
  } catch (const pulseqfi::cutoff_error& e) {
    return fail(3, "cutoff", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
}
