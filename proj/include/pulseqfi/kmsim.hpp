#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>
#include <vector>

#include "pulseqfi/jcshort.hpp"
#include "pulseqfi/pulses.hpp"

namespace pulseqfi::kmsim {

using complexd = std::complex<double>;

struct KMOptions {
  int pulse_dim = 0;            // 0 = auto: state cutoff + 3
  int aux_dim = 4;              // auxiliary-mode dimension, grown on retry
  double dt_over_T = 5e-4;      // RK4 step, fraction of the pulse duration
  std::optional<double> t_start;  // default: shape.support_lo()
  int sample_target = 200;        // approximate number of recorded samples
  double tail_tol = 1e-6;         // max allowed top-level population per mode
  double positivity_tol = 1e-5;   // max allowed negative-eigenvalue drift
  double clamp_eps = 1e-12;       // f1,f2 -> 0 when min(I, 1-I) below this
  std::vector<double> store_states_at;  // times whose full state is kept
};

struct TripartiteState {
  Eigen::MatrixXcd rho;  // (atom 2) x (pulse mode) x (aux mode), row = column basis
  double time = 0.0;
  int dim_pulse = 0;
  int dim_aux = 0;
};

struct KMSample {
  double t;
  double p_e;
  double n_pulse;
  double n_aux;
  double trace;
  double min_eig;
};

struct KMTrajectory {
  std::vector<KMSample> samples;
  std::vector<TripartiteState> stored;  // at the requested times, in request order
  TripartiteState final_state;
  double max_aux_occupation = 0.0;
  double max_positivity_violation = 0.0;
  double max_tail_pulse = 0.0;
  double max_tail_aux = 0.0;
};

/// Integrate the interaction-picture cascaded-mode master equation
///   drho/dt = -(i/hbar)[H(t), rho] + Gperp D[sm] rho + D[L(t)] rho,
///   H(t) = i hbar sqrt(G) xi(t) (ax^+ sm - sp ax) + (i hbar/2) sqrt(G) f1(t) (av^+ sm - sp av),
///   L(t) = sqrt(G) sm - f2(t) av,
/// with f1 = (1-2I) xi / sqrt((1-I) I), f2 = xi / sqrt((1-I) I), I = int xi^2.
/// Truncation failures (tail population or positivity drift) retry once with
/// enlarged cutoffs, then raise truncation_error.
KMTrajectory km_evolve(const jcshort::FockCoefficients& initial,
                       const pulses::PulseShape& shape, double gamma, double gamma_perp,
                       double t_end, KMOptions opts = {});

/// Partial trace over atom and auxiliary mode.
Eigen::MatrixXcd reduced_pulse_state(const TripartiteState& state);

/// (1/2) || rho - sigma ||_1 via the eigenvalues of the Hermitian difference.
double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);

/// <av^+ av>(t) along the sampled trajectory.
std::vector<double> auxiliary_occupation(const KMTrajectory& traj);

/// Trace distance between final reduced pulse states at dt and dt/2 (diagnostic).
double step_halving_deviation(const jcshort::FockCoefficients& initial,
                              const pulses::PulseShape& shape, double gamma, double gamma_perp,
                              double t_end, KMOptions opts = {});

/// Reduced JC field state at the same cutoff, for KM-vs-JC comparisons.
Eigen::MatrixXcd jc_reduced_state(const jcshort::FockCoefficients& state, double gamma,
                                  double G_t, int dim);

}  // namespace pulseqfi::kmsim
