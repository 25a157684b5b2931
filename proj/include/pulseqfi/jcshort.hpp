#pragma once

#include <Eigen/Dense>
#include <complex>

namespace pulseqfi::jcshort {

using complexd = std::complex<double>;

enum class StateKind { Fock, Coherent, SqueezedVacuum, Custom };

/// Fock-basis coefficients of a single-temporal-mode pulse state, with the
/// cutoff policies of the short-pulse model baked into the factories.
class FockCoefficients {
 public:
  static FockCoefficients fock(int n);
  /// Cutoff at ceil(|alpha|^2 + 10 sqrt(|alpha|^2 + 1)); Poisson tail < 1e-10.
  static FockCoefficients coherent(complexd alpha);
  /// Even Fock ladder, extended until the raw tail mass drops below 1e-10.
  static FockCoefficients squeezed_vacuum(complexd r);
  /// Caller-provided coefficients, must already be normalized to 1e-10.
  static FockCoefficients custom(Eigen::VectorXcd coeffs);

  const Eigen::VectorXcd& coeffs() const { return c_; }
  StateKind kind() const { return kind_; }
  int cutoff() const { return static_cast<int>(c_.size()) - 1; }
  double mean_photons() const;
  /// Upper bound on the photon-number mass above the stored cutoff.
  double tail_bound() const { return tail_; }

 private:
  FockCoefficients(StateKind k, Eigen::VectorXcd c, double tail);
  StateKind kind_;
  Eigen::VectorXcd c_;
  double tail_ = 0.0;
};

/// Amplitudes of |e>|n> and |g>|n> after the time-dependent JC evolution:
/// excited_n = -i sin(sqrt(Gamma) G_t sqrt(n+1)) psi_{n+1},
/// ground_n  =    cos(sqrt(Gamma) G_t sqrt(n))   psi_n.
struct JCBranches {
  Eigen::VectorXcd excited;
  Eigen::VectorXcd ground;
};

JCBranches jc_evolve(const FockCoefficients& state, double gamma, double G_t);

/// QFI of the reduced field state (units 1/Gamma^2 x dimensionless, i.e. raw
/// Q_Gamma). Branch overlaps and their analytic Gamma-derivatives feed the
/// rank-2 Gram pipeline; orthogonal-branch states (Fock, squeezed vacuum) use
/// the simpler orthogonal-subspace expression, which is exact.
double jc_qfi(const FockCoefficients& state, double gamma, double G_t);

/// Joint atom-field pure-state QFI nbar G_t^2 / Gamma; upper bound for jc_qfi.
double atom_pure_qfi_bound(const FockCoefficients& state, double gamma, double G_t);

struct LinearAbsorptionResult {
  double p_e;
  double dimensionless_qfi;  // Gamma^2 Q for a Fock pulse; equals p_e
};

/// Linear-absorption regime formulas, valid for sqrt(Gamma T) |F_t| sqrt(nbar) < guard.
LinearAbsorptionResult linear_absorption_probe(const FockCoefficients& state, double gamma,
                                               double T, double F_t, double guard = 0.1);

}  // namespace pulseqfi::jcshort
