#pragma once

#include <Eigen/Dense>
#include <complex>

#include "pulseqfi/pulses.hpp"

namespace pulseqfi::biphoton {

using complexd = std::complex<double>;

/// Gaussian phase-matching constant for the sinc approximation.
inline constexpr double kGammaPM = 0.04822;

/// Two-dimensional Gaussian joint spectral amplitude
///   exp(-a w_S^2 - 2 b w_S w_I - c w_I^2)
/// (frequencies relative to the carriers; anticorrelated cross term).
struct GaussianJSA {
  double sigma_p = 0.0;  // pump spectral width
  double T_S = 0.0, T_I = 0.0;
  double a = 0.0, b = 0.0, c = 0.0;
};

/// JSA from pump width and entanglement time, with the group-delay split
/// T_S = splitS * T_qent, T_I = splitI * T_qent. Throws on ac <= b^2.
GaussianJSA build_jsa(double sigma_p, double T_qent, double splitS = 0.12, double splitI = 1.12);

/// Schmidt data of a Gaussian JSA via Mehler's formula. Signal/idler Schmidt
/// modes are Hermite-Gauss with frequency scales k_S, k_I (equal to the
/// temporal scales of the corresponding time-domain modes).
struct SchmidtSpectrum {
  double w = 0.0;        // weight ratio, |w| < 1 (negative for anticorrelated JSA)
  double k_S = 0.0, k_I = 0.0;
  Eigen::VectorXcd weights;  // normalized r_n = -i w^n sqrt(1-w^2)

  int n_max() const { return static_cast<int>(weights.size()) - 1; }
};

/// Weight-tail cutoff 1e-12; n_max grows automatically when 64 is not enough.
SchmidtSpectrum schmidt_decompose(const GaussianJSA& jsa, int n_max = 64);

/// S = -sum |r_n|^2 log |r_n|^2 / log(base). Natural log by default; pass 2.0
/// for bits (the convention that matches the published sodium case study).
double entanglement_entropy(const SchmidtSpectrum& spec, double log_base = 0.0);

/// Orthonormal Hermite-Gauss function h_n(x) and its cumulative integral.
double hermite_gauss(int n, double x);
double hermite_gauss_cumulative(int n, double x);

/// Temporal profile of the k-th signal Schmidt mode, h_k(t/k_S)/sqrt(k_S),
/// materialized as a Sampled pulse shape (peaked at t = 0).
pulses::PulseShape schmidt_mode_shape(const SchmidtSpectrum& spec, int k, int min_samples = 4096);

/// Short-time biphoton QFI  Q = (k_S / Gamma) sum_k |r_k|^2 F_k(t/k_S)^2
/// (raw Q_Gamma units). Guarded by the linear-absorption condition.
double biphoton_qfi_short(const SchmidtSpectrum& spec, double gamma, double t,
                          double guard = 0.1);

/// Exact biphoton QFI for perfect coupling (Gamma_perp = 0): per-Schmidt-mode
/// single-photon dynamics combined through the orthogonal rank-2 expression.
/// `weight_tail` bounds the neglected Schmidt mass; raw Q_Gamma units.
double biphoton_qfi_exact_nocoupling_loss(const SchmidtSpectrum& spec, double gamma, double t,
                                          int points_per_unit = 64, double weight_tail = 1e-8);

/// |JSA|^2 on an n x n grid spanning +-span_sigmas marginal widths, normalized
/// to unit peak (for CSV export / plotting).
Eigen::MatrixXd jsa_grid(const GaussianJSA& jsa, int n = 41, double span_sigmas = 3.0);

}  // namespace pulseqfi::biphoton
