#include "pulseqfi/harness.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pulseqfi/biphoton.hpp"
#include "pulseqfi/casestudy.hpp"
#include "pulseqfi/common.hpp"
#include "pulseqfi/io.hpp"
#include "pulseqfi/jcshort.hpp"
#include "pulseqfi/kmsim.hpp"
#include "pulseqfi/onephoton.hpp"
#include "pulseqfi/pulses.hpp"

namespace pulseqfi::harness {

namespace {

std::string trim(std::string s) {
  s.erase(0, s.find_first_not_of(" \t\r"));
  s.erase(s.find_last_not_of(" \t\r") + 1);
  return s;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("field '" + key + "': not a number: '" + v + "'");
  }
}

jcshort::FockCoefficients parse_state(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "fock") return jcshort::FockCoefficients::fock(arg.empty() ? 1 : std::stoi(arg));
  if (kind == "coherent")
    return jcshort::FockCoefficients::coherent(arg.empty() ? 1.0 : std::stod(arg));
  if (kind == "squeezed")
    return jcshort::FockCoefficients::squeezed_vacuum(arg.empty() ? 1.0 : std::stod(arg));
  throw std::invalid_argument("field 'jc.state': unknown state '" + spec + "'");
}

pulses::PulseShape make_shape(const RunConfig& cfg) {
  if (!cfg.shape_csv.empty()) return pulses::PulseShape::from_csv(cfg.shape_csv);
  try {
    return pulses::PulseShape::by_name(cfg.shape, cfg.duration, cfg.arrival);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("field 'shape.kind': " + std::string(e.what()));
  }
}

std::map<std::string, std::string> echo_params(const RunConfig& cfg) {
  std::map<std::string, std::string> p;
  p["command"] = cfg.command;
  if (!cfg.figure.empty()) p["figure"] = cfg.figure;
  p["shape"] = cfg.shape;
  p["duration"] = io::format_number(cfg.duration);
  p["arrival"] = io::format_number(cfg.arrival);
  if (!cfg.shape_csv.empty()) p["shape_csv"] = cfg.shape_csv;
  p["gamma_T"] = io::format_number(cfg.gamma_T);
  p["gamma_perp_ratio"] = io::format_number(cfg.gamma_perp_ratio);
  p["points_per_unit"] = std::to_string(cfg.points_per_unit);
  p["t_end_over_T"] = io::format_number(cfg.t_end_over_T);
  p["state"] = cfg.state;
  p["sigma_p"] = io::format_number(cfg.sigma_p);
  p["t_qent"] = io::format_number(cfg.t_qent);
  return p;
}

std::filesystem::path emit(const RunConfig& cfg, const std::string& name, io::Table table) {
  std::filesystem::create_directories(cfg.out_dir);
  const std::filesystem::path path = std::filesystem::path(cfg.out_dir) / name;
  io::write_csv(path, table);
  io::write_json_sidecar(path, echo_params(cfg));
  return path;
}

std::vector<double> sweep_grid(const RunConfig& cfg) {
  return cfg.gamma_T_grid.empty() ? logspace(0.05, 10.0, 20) : cfg.gamma_T_grid;
}

io::Table sweep_table(pulses::ShapeKind kind, double ratio, const std::vector<double>& grid,
                      int ppu) {
  io::Table t;
  t.columns = {"gamma_T", "gamma2_Q_total", "gamma2_C_classical", "gamma2_Q_quantum",
               "gamma2_C_orig", "max_pe"};
  for (const auto& row : onephoton::asymptotic_sweep(kind, ratio, grid, ppu))
    t.rows.push_back({row.gamma_T, row.q_total, row.c_classical, row.q_quantum, row.c_orig,
                      row.max_pe});
  return t;
}

RunResult run_single_photon(const RunConfig& cfg) {
  const auto shape = make_shape(cfg);
  io::Table t = sweep_table(shape.kind(), cfg.gamma_perp_ratio, sweep_grid(cfg),
                            cfg.points_per_unit);
  t.metadata["shape"] = pulses::to_string(shape.kind());
  t.metadata["gamma_perp_ratio"] = io::format_number(cfg.gamma_perp_ratio);
  RunResult r;
  r.outputs.push_back(emit(cfg, "single_photon_sweep.csv", std::move(t)));
  return r;
}

RunResult run_jc(const RunConfig& cfg) {
  const auto shape = make_shape(cfg);
  const auto state = parse_state(cfg.state);
  const double T = shape.duration();
  const double gamma = cfg.gamma_T / T;
  io::Table t;
  t.columns = {"t_over_T", "F_t", "gamma2_Q", "gamma2_Q_bound"};
  const int n = 200;
  for (int i = 0; i <= n; ++i) {
    const double x = -6.0 + (cfg.t_end_over_T + 6.0) * i / n;
    const double G = shape.cumulative(shape.arrival() + x * T);
    const double q = jcshort::jc_qfi(state, gamma, G);
    const double b = jcshort::atom_pure_qfi_bound(state, gamma, G);
    t.rows.push_back({x, G / std::sqrt(T), gamma * gamma * q, gamma * gamma * b});
  }
  t.metadata["state"] = cfg.state;
  t.metadata["gamma_T"] = io::format_number(cfg.gamma_T);
  RunResult r;
  r.outputs.push_back(emit(cfg, "jc_qfi.csv", std::move(t)));
  return r;
}

RunResult run_km_validate(const RunConfig& cfg) {
  const auto state = parse_state(cfg.state);
  io::Table t;
  t.columns = {"gamma_T", "trace_distance_10T", "max_aux_occupation", "max_pe"};
  for (double gT : sweep_grid(cfg)) {
    const auto shape = make_shape(cfg);
    const double T = shape.duration();
    const double gamma = gT / T;
    const double t_end = shape.arrival() + cfg.t_end_over_T * T;
    kmsim::KMOptions opts;
    const auto traj =
        kmsim::km_evolve(state, shape, gamma, cfg.gamma_perp_ratio * gamma, t_end, opts);
    const auto rho_km = kmsim::reduced_pulse_state(traj.final_state);
    const auto rho_jc = kmsim::jc_reduced_state(state, gamma, shape.cumulative(t_end),
                                                traj.final_state.dim_pulse);
    double max_pe = 0.0;
    for (const auto& s : traj.samples) max_pe = std::max(max_pe, s.p_e);
    t.rows.push_back(
        {gT, kmsim::trace_distance(rho_km, rho_jc), traj.max_aux_occupation, max_pe});
  }
  t.metadata["state"] = cfg.state;
  RunResult r;
  r.outputs.push_back(emit(cfg, "km_validate.csv", std::move(t)));
  return r;
}

RunResult run_biphoton(const RunConfig& cfg) {
  const auto jsa = biphoton::build_jsa(cfg.sigma_p, cfg.t_qent);
  const auto spec = biphoton::schmidt_decompose(jsa);
  RunResult r;

  io::Table s;
  s.columns = {"n", "weight_sq"};
  for (int n = 0; n <= spec.n_max(); ++n)
    s.rows.push_back({double(n), std::norm(spec.weights(n))});
  s.metadata["w"] = io::format_number(spec.w);
  s.metadata["k_S"] = io::format_number(spec.k_S);
  s.metadata["k_I"] = io::format_number(spec.k_I);
  s.metadata["entropy_nat"] = io::format_number(biphoton::entanglement_entropy(spec));
  s.metadata["entropy_bits"] = io::format_number(biphoton::entanglement_entropy(spec, 2.0));
  r.outputs.push_back(emit(cfg, "schmidt_spectrum.csv", std::move(s)));

  const auto grid = biphoton::jsa_grid(jsa);
  io::Table g;
  for (int j = 0; j < grid.cols(); ++j) g.columns.push_back("c" + std::to_string(j));
  for (int i = 0; i < grid.rows(); ++i) {
    std::vector<double> row(grid.cols());
    for (int j = 0; j < grid.cols(); ++j) row[j] = grid(i, j);
    g.rows.push_back(std::move(row));
  }
  r.outputs.push_back(emit(cfg, "jsa_intensity.csv", std::move(g)));
  return r;
}

RunResult run_sodium(const RunConfig& cfg) {
  const auto atom = casestudy::sodium_defaults();
  const double T = 0.15e-12;
  const auto jsa = biphoton::build_jsa(1.0 / T, 2.09e-12);
  const auto spec = biphoton::schmidt_decompose(jsa);
  io::Table t;
  t.columns = {"gamma_per_s",     "gamma_perp_per_s", "gamma_perp_over_gamma",
               "lifetime_ns",     "gamma_T_at_0p15ps", "pdc_entropy_bits",
               "quant_area_m2"};
  t.rows.push_back({atom.gamma(), atom.gamma_perp(), atom.perp_ratio(),
                    1e9 / atom.gamma_tot, atom.gamma() * T,
                    biphoton::entanglement_entropy(spec, 2.0), atom.quantization_area});
  t.metadata["units"] = "SI";
  RunResult r;
  r.outputs.push_back(emit(cfg, "sodium.csv", std::move(t)));
  return r;
}

RunResult run_figure(const RunConfig& cfg) {
  RunResult r;
  const int ppu = cfg.points_per_unit;
  if (cfg.figure == "fig2") {
    // asymptotic QFI, max excitation and C_orig/Q ratio vs Gamma T_sigma, all shapes
    io::Table t;
    t.columns = {"shape_id", "gamma_T_sigma", "gamma2_Q_total", "max_pe", "ratio_Corig_over_Q"};
    const auto kinds = {pulses::ShapeKind::Gaussian, pulses::ShapeKind::Rectangular,
                        pulses::ShapeKind::DecayingExp, pulses::ShapeKind::RisingExp,
                        pulses::ShapeKind::SymmetricExp};
    int id = 0;
    for (auto kind : kinds) {
      // convert the requested Gamma T_sigma grid to the shape's duration parameter
      const double ts_over_T = [&] {
        switch (kind) {
          case pulses::ShapeKind::Rectangular: return 1.0 / std::sqrt(12.0);
          case pulses::ShapeKind::SymmetricExp: return 1.0 / std::sqrt(2.0);
          default: return 1.0;
        }
      }();
      std::vector<double> grid;
      for (double gts : sweep_grid(cfg)) grid.push_back(gts / ts_over_T);
      const auto rows = onephoton::asymptotic_sweep(kind, cfg.gamma_perp_ratio, grid, ppu);
      for (const auto& row : rows)
        t.rows.push_back({double(id), row.gamma_T * ts_over_T, row.q_total, row.max_pe,
                          row.c_orig / row.q_total});
      ++id;
    }
    t.metadata["shape_ids"] = "0=gaussian,1=rectangular,2=decaying-exp,3=rising-exp,4=symmetric-exp";
    r.outputs.push_back(emit(cfg, "fig2_asymptotic_qfi.csv", std::move(t)));
  } else if (cfg.figure == "fig3") {
    for (const auto& [name, gT] : {std::pair<std::string, double>{"fig3a_gammaT2.csv", 2.0},
                                   {"fig3b_gammaT0p05.csv", 0.05}}) {
      const auto shape = pulses::PulseShape::rectangular(1.0);
      onephoton::CouplingConfig cc;
      cc.gamma_T = gT;
      cc.points_per_unit = ppu;
      const auto sol = onephoton::solve(shape, cc);
      io::Table t;
      t.columns = {"t_times_gamma", "gamma2_C_classical", "gamma2_Q_quantum", "gamma2_Q_total",
                   "gamma2_C_orig"};
      const std::size_t stride = std::max<std::size_t>(1, sol.grid().n / 400);
      for (std::size_t k = 0; k <= sol.grid().n; k += stride) {
        const auto f = sol.qfi_at_node(k);
        t.rows.push_back({sol.grid().node(k) * gT, f.classical, f.quantum, f.total,
                          sol.cfi_original_at_node(k)});
      }
      t.metadata["gamma_T"] = io::format_number(gT);
      r.outputs.push_back(emit(cfg, name, std::move(t)));
    }
  } else if (cfg.figure == "fig4") {
    for (const auto& [name, ratio] : {std::pair<std::string, double>{"fig4a_ratio0p5.csv", 0.5},
                                      {"fig4b_ratio10.csv", 10.0}}) {
      io::Table t = sweep_table(pulses::ShapeKind::Rectangular, ratio, sweep_grid(cfg), ppu);
      t.metadata["gamma_perp_ratio"] = io::format_number(ratio);
      r.outputs.push_back(emit(cfg, name, std::move(t)));
    }
  } else if (cfg.figure == "fig5") {
    io::Table t;
    t.columns = {"gamma_T", "gamma2_Q_perfect", "gamma2_C_orig_perfect", "gamma2_Q_free",
                 "gamma2_C_orig_free"};
    const auto grid = sweep_grid(cfg);
    const auto perfect = onephoton::asymptotic_sweep(pulses::ShapeKind::Rectangular, 0.0, grid, ppu);
    const auto free_space =
        onephoton::asymptotic_sweep(pulses::ShapeKind::Rectangular, 10.0, grid, ppu);
    for (std::size_t i = 0; i < grid.size(); ++i)
      t.rows.push_back({grid[i], perfect[i].q_total, perfect[i].c_orig, free_space[i].q_total,
                        free_space[i].c_orig});
    r.outputs.push_back(emit(cfg, "fig5_free_space.csv", std::move(t)));
  } else if (cfg.figure == "fig7") {
    const casestudy::SodiumFigureParams p;
    std::vector<double> ts;
    for (int i = 0; i <= 200; ++i) ts.push_back(-4.0 * p.T + 14.0 * p.T * i / 200.0);
    io::Table t;
    t.columns = {"t_s", "Qmu_fock1", "Qmu_coherent1", "Qmu_squeezed1", "Qmu_biphoton",
                 "Qmu_schmidt0"};
    for (const auto& row : casestudy::figure7(ts, p))
      t.rows.push_back({row.t, row.fock1, row.coherent1, row.squeezed1, row.biphoton,
                        row.schmidt0});
    t.metadata["units"] = "SI (1/(C m))^2";
    r.outputs.push_back(emit(cfg, "fig7_sodium_states.csv", std::move(t)));
  } else if (cfg.figure == "fig8") {
    const casestudy::SodiumFigureParams p;
    std::vector<double> tq;
    for (int i = 0; i <= 120; ++i) tq.push_back(50e-15 + (3e-12 - 50e-15) * i / 120.0);
    io::Table t;
    t.columns = {"t_qent_s", "Qmu_biphoton", "Qmu_pump_photon", "Qmu_schmidt0", "entropy_nat",
                 "entropy_bits", "w"};
    for (const auto& row : casestudy::figure8(tq, p))
      t.rows.push_back({row.t_qent, row.biphoton, row.pump_photon, row.schmidt0, row.entropy_nat,
                        row.entropy_bits, row.w});
    t.metadata["units"] = "SI (1/(C m))^2";
    r.outputs.push_back(emit(cfg, "fig8_sodium_tqent.csv", std::move(t)));
  } else {
    throw std::invalid_argument("field 'run.figure': unknown figure '" + cfg.figure + "'");
  }
  return r;
}

RunResult run_regression(const RunConfig& cfg) {
  if (cfg.baseline_dir.empty() || cfg.current_dir.empty())
    throw std::invalid_argument("field 'regression.baseline/current': both directories required");
  const auto report = io::regression_check(cfg.baseline_dir, cfg.current_dir, cfg.tolerance);
  RunResult r;
  for (const auto& e : report.entries) {
    std::string line = e.file + ": ";
    switch (e.status) {
      case io::RegressionStatus::Pass:
        line += "pass (max rel dev " + io::format_number(e.max_rel_dev) + ")";
        break;
      case io::RegressionStatus::Fail:
        line += "FAIL at " + e.worst_cell + " (max rel dev " + io::format_number(e.max_rel_dev) +
                ", tolerance " + io::format_number(e.tolerance) + ")";
        break;
      case io::RegressionStatus::NoBaseline:
        line += "no baseline";
        break;
    }
    r.report_lines.push_back(std::move(line));
  }
  r.exit_code = report.ok() ? 0 : 1;
  return r;
}

}  // namespace

KeyValueMap parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path.string());
  KeyValueMap kv;
  std::string line, section;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not 'key = value': " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    kv[section.empty() ? key : section + "." + key] = val;
  }
  return kv;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    if (!cell.empty()) out.push_back(std::stod(cell));
  }
  return out;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i)
    out.push_back(lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / (n - 1)));
  return out;
}

RunConfig RunConfig::from_map(const KeyValueMap& kv) {
  RunConfig cfg;
  for (const auto& [key, val] : kv) {
    if (key == "run.command") cfg.command = val;
    else if (key == "run.figure") cfg.figure = val;
    else if (key == "run.out") cfg.out_dir = val;
    else if (key == "shape.kind") cfg.shape = val;
    else if (key == "shape.duration") cfg.duration = to_double(key, val);
    else if (key == "shape.arrival") cfg.arrival = to_double(key, val);
    else if (key == "shape.csv") cfg.shape_csv = val;
    else if (key == "coupling.gamma_T") cfg.gamma_T = to_double(key, val);
    else if (key == "coupling.gamma_perp_ratio") cfg.gamma_perp_ratio = to_double(key, val);
    else if (key == "coupling.points_per_unit")
      cfg.points_per_unit = static_cast<int>(to_double(key, val));
    else if (key == "coupling.t_end_over_T") cfg.t_end_over_T = to_double(key, val);
    else if (key == "sweep.gamma_T_grid") cfg.gamma_T_grid = parse_double_list(val);
    else if (key == "jc.state") cfg.state = val;
    else if (key == "biphoton.sigma_p") cfg.sigma_p = to_double(key, val);
    else if (key == "biphoton.t_qent") cfg.t_qent = to_double(key, val);
    else if (key == "regression.baseline") cfg.baseline_dir = val;
    else if (key == "regression.current") cfg.current_dir = val;
    else if (key == "regression.tolerance") cfg.tolerance = to_double(key, val);
    else
      throw std::invalid_argument("field '" + key + "': unknown configuration key");
  }
  if (cfg.command.empty())
    throw std::invalid_argument("field 'run.command': required");
  if (!(cfg.duration > 0.0))
    throw std::invalid_argument("field 'shape.duration': must be positive");
  for (double g : cfg.gamma_T_grid)
    if (!(g > 0.0))
      throw std::invalid_argument("field 'sweep.gamma_T_grid': entries must be positive");
  return cfg;
}

RunResult run(const RunConfig& cfg) {
  if (cfg.command == "single-photon") return run_single_photon(cfg);
  if (cfg.command == "jc") return run_jc(cfg);
  if (cfg.command == "km-validate") return run_km_validate(cfg);
  if (cfg.command == "biphoton") return run_biphoton(cfg);
  if (cfg.command == "sodium") return run_sodium(cfg);
  if (cfg.command == "figure") return run_figure(cfg);
  if (cfg.command == "regression-check") return run_regression(cfg);
  throw std::invalid_argument("field 'run.command': unknown command '" + cfg.command + "'");
}

}  // namespace pulseqfi::harness
