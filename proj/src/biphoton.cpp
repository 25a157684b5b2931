#include "pulseqfi/biphoton.hpp"

#include <cmath>
#include <stdexcept>

#include "pulseqfi/common.hpp"
#include "pulseqfi/fisher.hpp"
#include "pulseqfi/onephoton.hpp"

namespace pulseqfi::biphoton {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kWeightTailTol = 1e-12;
}  // namespace

GaussianJSA build_jsa(double sigma_p, double T_qent, double splitS, double splitI) {
  if (!(sigma_p > 0.0)) throw std::invalid_argument("build_jsa: sigma_p must be positive");
  if (T_qent < 0.0) throw std::invalid_argument("build_jsa: T_qent must be non-negative");
  GaussianJSA j;
  j.sigma_p = sigma_p;
  j.T_S = splitS * T_qent;
  j.T_I = splitI * T_qent;
  const double k = 1.0 / (2.0 * sigma_p * sigma_p);
  j.a = k + kGammaPM * j.T_S * j.T_S;
  j.b = k + kGammaPM * j.T_S * j.T_I;
  j.c = k + kGammaPM * j.T_I * j.T_I;
  if (T_qent > 0.0 && !(j.a * j.c - j.b * j.b > 0.0))
    throw std::invalid_argument("build_jsa: ac <= b^2, JSA not normalizable");
  return j;
}

SchmidtSpectrum schmidt_decompose(const GaussianJSA& jsa, int n_max) {
  SchmidtSpectrum s;
  if (jsa.b == 0.0) {
    s.w = 0.0;  // separable limit
  } else {
    const double ac = jsa.a * jsa.c;
    const double disc = ac - jsa.b * jsa.b;
    if (!(disc > 0.0))
      throw std::invalid_argument("schmidt_decompose: degenerate JSA (|w| -> 1)");
    s.w = (-std::sqrt(ac) + std::sqrt(disc)) / jsa.b;
  }
  if (!(std::abs(s.w) < 1.0))
    throw std::invalid_argument("schmidt_decompose: weight ratio |w| >= 1");
  const double w2 = s.w * s.w;
  s.k_S = std::sqrt(2.0 * jsa.a * (1.0 - w2) / (1.0 + w2));
  s.k_I = std::sqrt(2.0 * jsa.c * (1.0 - w2) / (1.0 + w2));

  int n = n_max;
  // geometric tail: sum_{k>n} w^{2k}(1-w^2) = w^{2(n+1)}
  while (n < 8192 && std::pow(w2, n + 1) > kWeightTailTol) n *= 2;
  if (std::pow(w2, n + 1) > kWeightTailTol)
    throw std::invalid_argument("schmidt_decompose: |w| too close to 1 for the cutoff budget");
  s.weights.resize(n + 1);
  const complexd mi(0.0, -1.0);
  double norm2 = 0.0;
  double wn = 1.0;
  for (int k = 0; k <= n; ++k) {
    s.weights(k) = mi * wn * std::sqrt(1.0 - w2);
    norm2 += std::norm(s.weights(k));
    wn *= s.w;
  }
  s.weights /= std::sqrt(norm2);
  return s;
}

double entanglement_entropy(const SchmidtSpectrum& spec, double log_base) {
  double S = 0.0;
  for (int k = 0; k <= spec.n_max(); ++k) {
    const double p = std::norm(spec.weights(k));
    if (p > 0.0) S -= p * std::log(p);
  }
  if (log_base > 0.0) S /= std::log(log_base);
  return S;
}

double hermite_gauss(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_gauss: n must be non-negative");
  const double h0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (n == 0) return h0;
  double hm = h0, h = std::sqrt(2.0) * x * h0;
  for (int k = 2; k <= n; ++k) {
    const double next = x * std::sqrt(2.0 / k) * h - std::sqrt((k - 1.0) / k) * hm;
    hm = h;
    h = next;
  }
  return h;
}

double hermite_gauss_cumulative(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_gauss_cumulative: n must be non-negative");
  const double h0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  double F0 = std::pow(kPi, -0.25) * std::sqrt(0.5 * kPi) * (1.0 + std::erf(x / std::sqrt(2.0)));
  if (n == 0) return F0;
  double F1 = -std::sqrt(2.0) * h0;
  if (n == 1) return F1;
  // F_{k+1} = sqrt(k/(k+1)) F_{k-1} - sqrt(2/(k+1)) h_k(x), interleaved with the
  // h recurrence.
  double hm = h0, h = std::sqrt(2.0) * x * h0;
  for (int k = 1; k < n; ++k) {
    const double Fnext = std::sqrt(k / (k + 1.0)) * F0 - std::sqrt(2.0 / (k + 1.0)) * h;
    F0 = F1;
    F1 = Fnext;
    const double hnext = x * std::sqrt(2.0 / (k + 1.0)) * h - std::sqrt(k / (k + 1.0)) * hm;
    hm = h;
    h = hnext;
  }
  return F1;
}

pulses::PulseShape schmidt_mode_shape(const SchmidtSpectrum& spec, int k, int min_samples) {
  if (!(spec.k_S > 0.0)) throw std::invalid_argument("schmidt_mode_shape: invalid spectrum");
  const double half = (std::sqrt(2.0 * k + 1.0) + 9.0) * spec.k_S;
  const int n = std::max(min_samples, 1024);
  std::vector<double> ts(n), vs(n);
  const double dt = 2.0 * half / (n - 1);
  const double scale = 1.0 / std::sqrt(spec.k_S);
  for (int i = 0; i < n; ++i) {
    ts[i] = -half + dt * i;
    vs[i] = scale * hermite_gauss(k, ts[i] / spec.k_S);
  }
  return pulses::PulseShape::sampled(std::move(ts), std::move(vs));
}

double biphoton_qfi_short(const SchmidtSpectrum& spec, double gamma, double t, double guard) {
  if (!(gamma > 0.0)) throw std::invalid_argument("biphoton_qfi_short: gamma must be positive");
  const double x = t / spec.k_S;
  const double F0 = hermite_gauss_cumulative(0, x);
  if (!(std::sqrt(gamma * spec.k_S) * std::abs(F0) < guard))
    throw regime_error("biphoton_qfi_short: outside the short-pulse regime");
  double q = 0.0;
  for (int k = 0; k <= spec.n_max(); ++k) {
    const double Fk = hermite_gauss_cumulative(k, x);
    q += std::norm(spec.weights(k)) * Fk * Fk;
  }
  return spec.k_S * q / gamma;
}

double biphoton_qfi_exact_nocoupling_loss(const SchmidtSpectrum& spec, double gamma, double t,
                                          int points_per_unit, double weight_tail) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("biphoton_qfi_exact: gamma must be positive");
  double q = 0.0, covered = 0.0;
  for (int k = 0; k <= spec.n_max(); ++k) {
    const double pk = std::norm(spec.weights(k));
    if (covered >= 1.0 - weight_tail) break;
    covered += pk;
    if (pk == 0.0) continue;
    const pulses::PulseShape mode = schmidt_mode_shape(spec, k);
    onephoton::CouplingConfig cfg;
    cfg.points_per_unit = points_per_unit;
    cfg.t_end_over_T = (t - mode.arrival()) / mode.duration();
    const auto sol = onephoton::solve_absolute(mode, gamma, 0.0, cfg);
    const auto ov = sol.branch_overlaps(t);
    q += pk * fisher::orthogonal_rank2(ov.norm_e, ov.norm_g, ov.dd_e, ov.dd_g, ov.ds_e, ov.ds_g);
  }
  return q;
}

Eigen::MatrixXd jsa_grid(const GaussianJSA& jsa, int n, double span_sigmas) {
  Eigen::MatrixXd out(n, n);
  const double sx = span_sigmas / std::sqrt(2.0 * jsa.a);
  const double sy = span_sigmas / std::sqrt(2.0 * jsa.c);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = -sx + 2.0 * sx * i / (n - 1);
      const double y = -sy + 2.0 * sy * j / (n - 1);
      const double e = -jsa.a * x * x - 2.0 * jsa.b * x * y - jsa.c * y * y;
      out(i, j) = std::exp(2.0 * e);  // |JSA|^2
    }
  out /= out.maxCoeff();
  return out;
}

}  // namespace pulseqfi::biphoton
