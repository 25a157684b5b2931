// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <future>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "pulseqfi/biphoton.hpp"
#include "pulseqfi/casestudy.hpp"
#include "pulseqfi/fisher.hpp"
#include "pulseqfi/jcshort.hpp"
#include "pulseqfi/kmsim.hpp"
#include "pulseqfi/onephoton.hpp"
#include "pulseqfi/pulses.hpp"

using namespace pulseqfi;
using pulses::PulseShape;
using pulses::ShapeKind;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << what;
    }
  }
};

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return g;
}

// ---- Table I closed forms --------------------------------------------------
double q_rect(double x) { return 8.0 * (2.0 - std::exp(-x / 2) * (x + 2.0)) / x; }
double q_exp(double x) { return 8.0 * x / ((1.0 + x) * (1.0 + x)); }
double q_sym(double x) { return 64.0 * x / std::pow(x + 2.0, 3); }
double c_rect(double x) {
  const double e = std::exp(x / 2);
  const double n = x - 2.0 * e + 2.0;
  return 2.0 * n * n / ((e - 1.0) * (e * (x - 2.0) + 2.0));
}
double c_exp(double x) { return 4.0 * x / ((1.0 + x) * (1.0 + x)); }
double c_sym(double x) { return 64.0 * x / ((x + 2.0) * (x + 2.0) * (x + 4.0)); }

double pe_rect(double x, double t) {
  if (t <= 0.0) return 0.0;
  const double b = std::exp(x * std::min(t, 1.0) / 2) - 1.0;
  return 4.0 * std::exp(-x * t) * b * b / x;
}
double pe_rising(double x, double t) {
  return t <= 0.0 ? 4.0 * x * std::exp(t) / ((1.0 + x) * (1.0 + x))
                  : 4.0 * x * std::exp(-x * t) / ((1.0 + x) * (1.0 + x));
}
double pe_decaying(double x, double t) {
  if (t <= 0.0) return 0.0;
  const double d = x - 1.0;
  if (std::abs(d) < 1e-7) return x * x * t * t * std::exp(-x * t) / 4.0 * std::exp(d * t / 2);
  const double b = std::exp(t * d / 2) - 1.0;
  return 4.0 * x * std::exp(-x * t) * b * b / (d * d);
}
double pe_sym(double x, double t) {
  if (t <= 0.0) return 4.0 * x * std::exp(2.0 * t) / ((x + 2.0) * (x + 2.0));
  const double d = x * x - 4.0;
  const double b = (x + 2.0) * std::exp(0.5 * t * (x - 2.0)) - 4.0;
  return 4.0 * x * std::exp(-x * t) * b * b / (d * d);
}

bool criterion1(Check& c) {
  struct Row {
    ShapeKind kind;
    double (*q)(double);
    double (*cf)(double);
    double (*pe)(double, double);
    const char* name;
  };
  const Row rows[] = {{ShapeKind::Rectangular, q_rect, c_rect, pe_rect, "rectangular"},
                      {ShapeKind::RisingExp, q_exp, c_exp, pe_rising, "rising-exp"},
                      {ShapeKind::DecayingExp, q_exp, c_exp, pe_decaying, "decaying-exp"},
                      {ShapeKind::SymmetricExp, q_sym, c_sym, pe_sym, "symmetric-exp"}};
  const auto grid = logspace(0.05, 10.0, 20);
  double worst_q = 0.0, worst_c = 0.0, worst_pe = 0.0;
  for (const auto& row : rows) {
    for (double x : grid) {
      const auto shape = PulseShape::by_name(row.name, 1.0);
      onephoton::CouplingConfig cfg;
      cfg.gamma_T = x;
      const auto sol = onephoton::solve(shape, cfg);
      const auto f = sol.qfi_at_node(sol.grid().n);
      worst_q = std::max(worst_q, std::abs(f.total / row.q(x) - 1.0));
      worst_c =
          std::max(worst_c, std::abs(sol.cfi_original_at_node(sol.grid().n) / row.cf(x) - 1.0));
      for (std::size_t k = 0; k <= sol.grid().n; k += std::max<std::size_t>(sol.grid().n / 40, 1)) {
        const double t = sol.grid().node(k);
        const double ref = row.pe(x, t);
        if (ref > 1e-10) {
          const double pe = sol.psi_e()[k] * sol.psi_e()[k];
          worst_pe = std::max(worst_pe, std::abs(pe / ref - 1.0));
        }
      }
    }
  }
  c.detail << "max rel err: p_e " << worst_pe << ", QFI " << worst_q << ", CFI " << worst_c;
  c.require(worst_pe < 1e-4 && worst_q < 1e-4 && worst_c < 1e-4, "above 1e-4 relative");
  return c.ok;
}

bool criterion2(Check& c) {
  double worst = 0.0;
  for (double x : logspace(0.05, 10.0, 10)) {
    for (const char* name : {"rising-exp", "decaying-exp"}) {
      const auto shape = PulseShape::by_name(name, 1.0);
      onephoton::CouplingConfig cfg;
      cfg.gamma_T = x;
      cfg.points_per_unit = 128;
      const auto sol = onephoton::solve(shape, cfg);
      const double ratio = sol.cfi_original_at_node(sol.grid().n) /
                           sol.qfi_at_node(sol.grid().n).total;
      worst = std::max(worst, std::abs(ratio - 0.5));
    }
  }
  c.detail << "max |ratio - 1/2| = " << worst;
  c.require(worst <= 1e-6, "ratio deviates beyond 1e-6");
  return c.ok;
}

bool criterion3(Check& c) {
  const auto q_of = [](double x) {
    onephoton::CouplingConfig cfg;
    cfg.gamma_T = x;
    cfg.points_per_unit = 256;
    cfg.asymptotic_decay = 24.0;
    const auto sol = onephoton::solve(PulseShape::rising_exp(1.0), cfg);
    return sol.qfi_at_node(sol.grid().n).total;
  };
  // golden-section search on the computed curve
  double a = 0.7, b = 1.4;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = q_of(x1), f2 = q_of(x2);
  for (int it = 0; it < 40 && (b - a) > 1e-5; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = q_of(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = q_of(x1);
    }
  }
  const double xstar = 0.5 * (a + b), qstar = q_of(xstar);
  c.detail << "max Q = " << qstar << " at Gamma T = " << xstar;
  c.require(std::abs(qstar - 2.0) <= 1e-6, "max differs from 2 beyond 1e-6");
  c.require(std::abs(xstar - 1.0) <= 1e-3, "argmax differs from 1 beyond 1e-3");
  return c.ok;
}

bool criterion4(Check& c) {
  for (auto kind : {ShapeKind::Rectangular, ShapeKind::RisingExp, ShapeKind::DecayingExp,
                    ShapeKind::SymmetricExp, ShapeKind::Gaussian}) {
    const double grid[] = {0.01};
    const auto rows = onephoton::asymptotic_sweep(kind, 0.0, grid);
    const double ratio = rows[0].c_orig / rows[0].q_total;
    c.detail << pulses::to_string(kind) << " " << ratio << "  ";
    c.require(ratio >= 0.48 && ratio <= 0.52, "ratio outside [0.48, 0.52]");
  }
  return c.ok;
}

bool criterion5(Check& c) {
  std::mt19937 rng(424242);
  std::uniform_int_distribution<int> dims(4, 32);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = dims(rng);
    Eigen::VectorXcd pe(dim), pg(dim), de(dim), dg(dim);
    for (int i = 0; i < dim; ++i) {
      pe(i) = std::complex<double>(nd(rng), nd(rng));
      pg(i) = std::complex<double>(nd(rng), nd(rng));
      de(i) = std::complex<double>(nd(rng), nd(rng));
      dg(i) = std::complex<double>(nd(rng), nd(rng));
    }
    const double nrm = std::sqrt(pe.squaredNorm() + pg.squaredNorm());
    pe /= nrm;
    pg /= nrm;
    dg -= ((pe.dot(de) + pg.dot(dg)).real() / pg.squaredNorm()) * pg;

    fisher::GramMatrix4 gm;
    const Eigen::VectorXcd* basis[4] = {&pe, &pg, &de, &dg};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) gm.g(i, j) = basis[i]->dot(*basis[j]);
    const double q_gram = fisher::qfi_rank2_gram(gm);

    const Eigen::MatrixXcd rho = pe * pe.adjoint() + pg * pg.adjoint();
    const Eigen::MatrixXcd drho = de * pe.adjoint() + pe * de.adjoint() + dg * pg.adjoint() +
                                  pg * dg.adjoint();
    const double q_eig = fisher::qfi_eigen(rho, drho);
    worst = std::max(worst, std::abs(q_gram - q_eig) / (1.0 + q_eig));
  }
  c.detail << "max |gram - eigen| / (1 + value) = " << worst;
  c.require(worst <= 1e-8, "oracle disagreement above 1e-8");
  return c.ok;
}

bool criterion6(Check& c) {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> ud(0.05, 2.5);
  double worst = 0.0;
  for (int n = 1; n <= 10; ++n)
    for (int t = 0; t < 10; ++t) {
      const double gamma = ud(rng), G = ud(rng);
      const double q = jcshort::jc_qfi(jcshort::FockCoefficients::fock(n), gamma, G);
      const double ref = n * G * G / gamma;
      worst = std::max(worst, std::abs(q - ref) / (1.0 + ref));
    }
  c.detail << "Fock max rel dev " << worst;
  c.require(worst <= 1e-9, "Fock exactness above 1e-9");

  const auto shape = PulseShape::gaussian(1.0);
  onephoton::CouplingConfig cfg;
  cfg.gamma_T = 1e-3;
  cfg.t_end_over_T = 10.0;
  const auto sol = onephoton::solve(shape, cfg);
  const double exact = onephoton::qfi_decomposition(sol, 10.0).total;
  const double F = shape.scale_invariant_F(10.0);
  const double jc = 1e-3 * F * F;  // Gamma^2 * (T F^2 / Gamma) at Gamma T = 1e-3
  c.detail << "; short-time match " << std::abs(exact / jc - 1.0);
  c.require(std::abs(exact / jc - 1.0) <= 0.02, "short-time consistency beyond 2%");
  return c.ok;
}

bool criterion7(Check& c) {
  const auto atom = casestudy::sodium_defaults();
  const double T = 0.15e-12;
  const auto pump = PulseShape::gaussian(T);
  const double G = pump.cumulative(10.0 * T);
  const double gamma = atom.gamma();
  const double q_fock = jcshort::jc_qfi(jcshort::FockCoefficients::fock(1), gamma, G);
  const double q_coh = jcshort::jc_qfi(jcshort::FockCoefficients::coherent(1.0), gamma, G);
  const double q_sq =
      jcshort::jc_qfi(jcshort::FockCoefficients::squeezed_vacuum(std::asinh(1.0)), gamma, G);
  c.detail << "coh/fock = " << q_coh / q_fock << ", |sq-fock|/fock = "
           << std::abs(q_sq - q_fock) / q_fock;
  c.require(q_coh <= 0.1 * q_fock, "coherent above 0.1 x Fock");
  c.require(std::abs(q_sq - q_fock) / q_fock <= 0.05, "squeezed beyond 5% of Fock");
  return c.ok;
}

bool criterion8(Check& c) {
  using jcshort::FockCoefficients;
  // single-photon populations vs the exact dynamics
  for (double gT : {0.01, 0.05}) {
    for (double ratio : {0.0, 10.0}) {
      const auto shape = PulseShape::gaussian(1.0);
      onephoton::CouplingConfig cfg;
      cfg.gamma_T = gT;
      cfg.gamma_perp_ratio = ratio;
      cfg.t_end_over_T = 10.0;
      const auto exact = onephoton::solve(shape, cfg);
      kmsim::KMOptions opts;
      opts.t_start = shape.support_lo();
      opts.dt_over_T = 1e-3;
      const auto traj =
          kmsim::km_evolve(FockCoefficients::fock(1), shape, gT, ratio * gT, 10.0, opts);
      double worst = 0.0;
      for (const auto& s : traj.samples)
        worst = std::max(worst, std::abs(s.p_e - exact.psi_e_at(s.t) * exact.psi_e_at(s.t)));
      c.require(worst < 1e-3, "single-photon population error above 1e-3");
    }
  }

  // JC convergence: trace distance strictly decreasing along the pulse lengths
  auto distance = [](const FockCoefficients& state, double gT) {
    const auto shape = PulseShape::gaussian(1.0);
    kmsim::KMOptions opts;
    opts.t_start = -6.0;
    opts.dt_over_T = 4e-3;  // RK4 well converged at this step for these scans
    const auto traj = kmsim::km_evolve(state, shape, gT, 0.0, 10.0, opts);
    const auto rho_km = kmsim::reduced_pulse_state(traj.final_state);
    const auto rho_jc =
        kmsim::jc_reduced_state(state, gT, shape.cumulative(10.0), traj.final_state.dim_pulse);
    return kmsim::trace_distance(rho_km, rho_jc);
  };
  const auto fock5 = FockCoefficients::fock(5);
  // squeezed vacuum truncated at n = 20 (tail ~3e-5); monotonicity is far above
  // that scale and the full state would dominate the suite's runtime
  const auto squeezed = [] {
    Eigen::VectorXcd c = FockCoefficients::squeezed_vacuum(0.75).coeffs().head(21);
    c.normalize();
    return FockCoefficients::custom(c);
  }();
  for (const auto* state : {&fock5, &squeezed}) {
    std::vector<std::future<double>> futs;
    for (double gT : {0.02, 0.01, 0.005})
      futs.push_back(std::async(std::launch::async, distance, *state, gT));
    const double d1 = futs[0].get(), d2 = futs[1].get(), d3 = futs[2].get();
    c.detail << (state == &fock5 ? "fock5 d=" : "squeezed d=") << d1 << "," << d2 << "," << d3
             << "  ";
    c.require(d1 > d2 && d2 > d3, "trace distance not strictly decreasing");
  }

  if (std::getenv("PULSEQFI_NIGHTLY")) {
    kmsim::KMOptions opts;
    opts.t_start = -6.0;
    opts.aux_dim = 4;
    opts.dt_over_T = 1e-3;
    opts.sample_target = 60;
    const auto traj =
        kmsim::km_evolve(FockCoefficients::fock(80), PulseShape::gaussian(1.0), 0.02, 0.0, 8.0,
                         opts);
    c.detail << "fock80 aux max = " << traj.max_aux_occupation;
    c.require(traj.max_aux_occupation < 0.01, "Fock-80 auxiliary occupation above 0.01");
  } else {
    c.detail << "(Fock-80 check skipped; set PULSEQFI_NIGHTLY=1)";
  }
  return c.ok;
}

bool criterion9(Check& c) {
  const auto atom = casestudy::sodium_defaults();
  const double ratio = atom.perp_ratio();
  const double lifetime_ns = 1e9 / atom.gamma_tot;
  const double gT = atom.gamma() * 0.15e-12;
  const auto spec = biphoton::schmidt_decompose(biphoton::build_jsa(1.0 / 0.15e-12, 2.09e-12));
  const double S_bits = biphoton::entanglement_entropy(spec, 2.0);
  c.detail << "ratio " << ratio << ", lifetime " << lifetime_ns << " ns, GammaT " << gT
           << ", S2 " << S_bits << " (base-2 convention; natural log gives "
           << biphoton::entanglement_entropy(spec) << ")";
  c.require(std::abs(ratio - 11.56) <= 0.01, "Gamma_perp/Gamma not 11.56 +- 0.01");
  c.require(std::abs(lifetime_ns - 16.249) <= 5e-4, "lifetime not 16.249 ns");
  c.require(std::abs(gT - 7.35e-7) / 7.35e-7 <= 1e-3, "Gamma T off by more than 0.1%");
  c.require(std::abs(S_bits - 0.62) <= 0.02, "PDC entropy not 0.62 +- 0.02 (base 2)");
  return c.ok;
}

bool criterion10(Check& c) {
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> sig(2.0, 12.0), tq(0.05, 3.0);
  const double gamma = 1e-5, t = 1.5;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = biphoton::schmidt_decompose(biphoton::build_jsa(sig(rng), tq(rng)));
    const double q_biph = biphoton::biphoton_qfi_short(spec, gamma, t);
    const double F0 = biphoton::hermite_gauss_cumulative(0, t / spec.k_S);
    const double q0 = spec.k_S * F0 * F0 / gamma;
    c.require(q_biph <= q0 * (1.0 + 1e-12), "biphoton above the 0-th Schmidt mode");
    if (std::abs(spec.w) > 1e-6)
      c.require(q_biph < q0, "bound not strict at nonzero entanglement");
    worst_gap = std::max(worst_gap, q_biph / q0);
  }
  // figure-8 grid
  for (double tqv : {0.05, 0.5, 1.0, 2.09, 3.0}) {
    const auto spec = biphoton::schmidt_decompose(biphoton::build_jsa(1.0 / 0.15, tqv));
    const double q_biph = biphoton::biphoton_qfi_short(spec, gamma, t);
    const double F0 = biphoton::hermite_gauss_cumulative(0, t / spec.k_S);
    c.require(q_biph < spec.k_S * F0 * F0 / gamma, "figure-8 grid point violates the bound");
  }
  // weighted-sum identity through the exact per-mode pipeline
  double worst_id = 0.0;
  for (double tqv : {0.6, 2.09}) {
    const auto spec = biphoton::schmidt_decompose(biphoton::build_jsa(1.0 / 0.15, tqv));
    const double g2 = 2e-3;
    const double q = biphoton::biphoton_qfi_exact_nocoupling_loss(spec, g2, t);
    double q_sum = 0.0, covered = 0.0;
    for (int k = 0; k <= spec.n_max() && covered < 1.0 - 1e-8; ++k) {
      const double pk = std::norm(spec.weights(k));
      covered += pk;
      if (pk == 0.0) continue;
      const auto mode = biphoton::schmidt_mode_shape(spec, k);
      onephoton::CouplingConfig cfg;
      cfg.t_end_over_T = (t - mode.arrival()) / mode.duration();
      const auto sol = onephoton::solve_absolute(mode, g2, 0.0, cfg);
      q_sum += pk * onephoton::qfi_decomposition(sol, t).total / (g2 * g2);
    }
    worst_id = std::max(worst_id, std::abs(q / q_sum - 1.0));
  }
  c.detail << "max biph/mode0 = " << worst_gap << ", weighted-sum identity dev = " << worst_id;
  c.require(worst_id <= 1e-6, "weighted-sum identity beyond 1e-6");
  return c.ok;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<bool(Check&)> fn;
  };
  const Entry entries[] = {
      {1, "Table-I closed forms (p_e, QFI, CFI) within 1e-4 over Gamma T in [0.05, 10]",
       criterion1},
      {2, "rising/decaying CFI/QFI ratio = 1/2 within 1e-6", criterion2},
      {3, "rising-exp optimum: max Q = 2.000000 at Gamma T = 1.000", criterion3},
      {4, "short-pulse universality: CFI/QFI in [0.48, 0.52] at Gamma T = 0.01", criterion4},
      {5, "rank-2 Gram QFI vs eigendecomposition on 200 random instances", criterion5},
      {6, "JC Fock exactness to 1e-9 and short-time single-photon consistency", criterion6},
      {7, "state ranking at the sodium figure parameters", criterion7},
      {8, "cascaded-mode master-equation validation", criterion8},
      {9, "sodium derived numbers", criterion9},
      {10, "no advantage from biphoton entanglement", criterion10},
  };
  int failures = 0;
  for (const auto& e : entries) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = e.fn(c);
    } catch (const std::exception& ex) {
      c.ok = false;
      c.detail << "exception: " << ex.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (ok && c.ok ? "[PASS]" : "[FAIL]") << " criterion " << e.id << ": " << e.name
              << "  (" << c.detail.str() << ")  [" << secs << " s]" << std::endl;
    if (!(ok && c.ok)) ++failures;
  }
  return failures;
}
