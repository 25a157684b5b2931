#pragma once

#include <optional>
#include <vector>

#include "pulseqfi/fisher.hpp"
#include "pulseqfi/grid.hpp"
#include "pulseqfi/pulses.hpp"

namespace pulseqfi::onephoton {

/// Dimensionless coupling configuration. All dynamics depend on the pair
/// (Gamma*T, Gamma_perp/Gamma); the grid controls pick the integration mesh.
struct CouplingConfig {
  double gamma_T = 1.0;          // Gamma * duration
  double gamma_perp_ratio = 0.0; // Gamma_perp / Gamma
  int points_per_unit = 64;      // nodes per min(T, 1/Gamma_tot); >= 32 required
  double asymptotic_decay = 16.0;          // t_end = support_hi + this / Gamma_tot
  std::optional<double> t_end_over_T;      // explicit end, units of T past arrival
};

/// Exact atom-pulse-environment single-photon dynamics on a shared grid.
///
/// Stores the node arrays needed by every downstream Fisher quantity:
/// the exponentially-weighted pulse integral A(t) (psi_e = -sqrt(Gamma) A),
/// its Gamma-derivative kernel B(t), and the cumulative products of the
/// Appendix-style explicit integrands. Immutable after solve().
class SinglePhotonSolution {
 public:
  const TimeGrid& grid() const { return grid_; }
  double gamma() const { return gamma_; }
  double gamma_perp() const { return gamma_perp_; }
  const pulses::PulseShape& shape() const { return shape_; }

  const std::vector<double>& psi_e() const { return psi_e_; }
  const std::vector<double>& env_norm_sq() const { return env_; }
  const std::vector<double>& p_loss() const { return p_; }

  double psi_e_at(double t) const { return psi_e_[grid_.nearest_node(t)]; }
  double p_loss_at(double t) const { return p_[grid_.nearest_node(t)]; }

  /// Amplitude of the perturbed wavepacket, xi(tau) + sqrt(Gamma) Theta(t-tau) psi_e(tau).
  double wavepacket(double t, double tau) const;

  /// Max over nodes of |p_e + <psi_P|psi_P> + <psi_E|psi_E> - 1|.
  double unit_norm_violation() const;

  /// Overlaps of the two branches (atom-excited amplitude, pulse wavepacket)
  /// and their analytic Gamma-derivatives, for the rank-2 QFI expressions.
  struct BranchOverlaps {
    double norm_e, norm_g;
    double dd_e, dd_g;
    fisher::complexd ds_e, ds_g;
  };
  BranchOverlaps branch_overlaps(double t) const;

  // Gamma^2-scaled Fisher pieces at a node index.
  fisher::FisherDecomposition qfi_at_node(std::size_t k) const;
  double cfi_original_at_node(std::size_t k) const;
  double p_orig_at_node(std::size_t k) const;

 private:
  friend SinglePhotonSolution solve(const pulses::PulseShape&, const CouplingConfig&);
  friend SinglePhotonSolution solve_absolute(const pulses::PulseShape&, double, double,
                                             const CouplingConfig&);

  TimeGrid grid_;
  double gamma_ = 0.0, gamma_perp_ = 0.0;
  pulses::PulseShape shape_ = pulses::PulseShape::rectangular(1.0);
  std::vector<double> psi_e_, env_, p_;
  std::vector<double> A_, B_;                  // node values
  std::vector<double> cumA2_, cumAB_, cumD2_;  // int A^2, int A B, int (A + Gamma B)^2
  std::vector<double> cumFA_, cumFB_;          // int xi A, int xi B
};

/// Integrate the exact dynamics; gamma, gamma_perp taken from cfg and the
/// shape's duration. Throws resolution_error when cfg underresolves.
SinglePhotonSolution solve(const pulses::PulseShape& shape, const CouplingConfig& cfg);

/// Same, with the couplings given in absolute rate units.
SinglePhotonSolution solve_absolute(const pulses::PulseShape& shape, double gamma,
                                    double gamma_perp, const CouplingConfig& cfg);

/// {classical, quantum, total} Gamma^2-scaled QFI decomposition at time t.
fisher::FisherDecomposition qfi_decomposition(const SinglePhotonSolution& sol, double t);
fisher::FisherDecomposition qfi_decomposition(const pulses::PulseShape& shape,
                                              const CouplingConfig& cfg, double t);

/// Gamma^2-scaled CFI of photodetection in the original temporal mode at time t.
double cfi_original_mode(const SinglePhotonSolution& sol, double t);
double cfi_original_mode(const pulses::PulseShape& shape, const CouplingConfig& cfg, double t);

/// Relative change of the asymptotic total QFI under grid doubling (diagnostic).
double convergence_estimate(const pulses::PulseShape& shape, const CouplingConfig& cfg);

struct SweepRow {
  double gamma_T;
  double q_total;
  double c_classical;
  double q_quantum;
  double c_orig;
  double max_pe;
};

/// Asymptotic (t -> infinity) sweep over Gamma*T values for one shape family.
std::vector<SweepRow> asymptotic_sweep(pulses::ShapeKind kind, double gamma_perp_ratio,
                                       std::span<const double> gamma_T_grid,
                                       int points_per_unit = 64);

}  // namespace pulseqfi::onephoton
