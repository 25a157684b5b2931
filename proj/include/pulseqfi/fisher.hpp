#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

namespace pulseqfi::fisher {

using complexd = std::complex<double>;

/// {classical, quantum, total} dimensionless Gamma^2-scaled Fisher values,
/// with total = classical + quantum.
struct FisherDecomposition {
  double classical = 0.0;
  double quantum = 0.0;
  double total = 0.0;
};

/// Fisher information of a two-outcome distribution {p, 1-p}: dp^2 / (p(1-p)).
/// At p in {0,1}: returns 0 for dp == 0, +infinity otherwise (callers relying
/// on analytic limits should not hit this branch).
double cfi_binary(double p, double dp);

/// Pure-state QFI 4(<dpsi|dpsi> - |<dpsi|psi>|^2) from the two scalar overlaps.
double qfi_pure(double inner_dd, complexd inner_ds);

/// 4x4 Gram matrix of the (generally non-orthogonal) basis
/// {psi_e, psi_g, d_psi_e, d_psi_g} of a rank-2 mixture psi_e psi_e^+ + psi_g psi_g^+.
struct GramMatrix4 {
  Eigen::Matrix4cd g;

  /// Hermiticity within 1e-10 and Delta = G11 G22 - |G12|^2 > 0 (up to roundoff).
  void validate() const;
  double delta() const;
};

/// QFI of the rank-2 mixture from its Gram matrix, by solving the SLD Lyapunov
/// equation in the non-orthogonal basis. Exactly degenerate bases (derivatives
/// collinear with the states, as for Fock pulses) are fine; the solve residual
/// guards against genuinely ill-conditioned input, raising ill_conditioned_error
/// so callers can fall back to qfi_eigen.
double qfi_rank2_gram(const GramMatrix4& gram);

/// Rank-2 QFI when the two branches live in orthogonal subspaces:
/// sum_x [ 4<dpsi_x|dpsi_x> - 4 Im(<psi_x|dpsi_x>)^2 / <psi_x|psi_x> ].
double orthogonal_rank2(double norm_e, double norm_g, double dd_e, double dd_g, complexd ds_e,
                        complexd ds_g);

/// Spectral QFI  sum_{ij} 2|<i|drho|j>|^2/(lambda_i+lambda_j)  over pairs with
/// lambda_i + lambda_j > threshold. rho must be Hermitian PSD with unit trace,
/// drho Hermitian traceless, dimension <= 512.
double qfi_eigen(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& drho,
                 double eig_threshold = 1e-12);

/// Right-hand side of the extended convexity bound: CFI of the mixing
/// distribution plus the probability-weighted mean of the component QFIs.
double extended_convexity_rhs(std::span<const double> probs, std::span<const double> dprobs,
                              std::span<const double> qfis);

}  // namespace pulseqfi::fisher
