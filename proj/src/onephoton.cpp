#include "pulseqfi/onephoton.hpp"

#include <cmath>
#include <stdexcept>

#include "pulseqfi/common.hpp"

namespace pulseqfi::onephoton {

using pulses::PulseShape;

namespace {

// A(t)   = int^t exp(-Gtot (t-t')/2) xi(t') dt'      (psi_e = -sqrt(Gamma) A)
// B(t)   = int^t ((t'-t)/2) exp(-Gtot (t-t')/2) xi(t') dt'   (= d A / d Gamma)
// Both satisfy one-step shift rules, so a single left-to-right pass with
// half-interval Simpson panels gives O(h^4) accuracy while staying stable for
// arbitrarily large Gtot * t (no growing exponentials are ever formed).
struct KernelPass {
  std::vector<double> A, B;    // node values
  std::vector<double> Am, Bm;  // midpoint values (per interval)
};

KernelPass integrate_kernels(const PulseShape& shape, const TimeGrid& g, double g_tot) {
  const std::size_t n = g.n;
  KernelPass out;
  out.A.assign(n + 1, 0.0);
  out.B.assign(n + 1, 0.0);
  out.Am.assign(n, 0.0);
  out.Bm.assign(n, 0.0);

  const double h = g.h, d = 0.5 * h;
  const double wh = std::exp(-g_tot * d / 2.0);   // decay across a half interval
  const double wq = std::exp(-g_tot * d / 4.0);   // decay across a quarter interval

  for (std::size_t k = 0; k < n; ++k) {
    const double t0 = g.node(k);
    // endpoints come from the node formula so breakpoints stay exact
    const double fL = shape.amplitude_right(t0);
    const double f1 = shape.amplitude_right(t0 + 0.25 * h);
    const double fM = shape.amplitude_right(t0 + 0.5 * h);
    const double f3 = shape.amplitude_left(t0 + 0.75 * h);
    const double fR = shape.amplitude_left(g.node(k + 1));

    // advance node -> midpoint
    double qA = d / 6.0 * (wh * fL + 4.0 * wq * f1 + fM);
    double qB = d / 6.0 * (wh * (-d / 2.0) * fL + 4.0 * wq * (-d / 4.0) * f1);
    out.Am[k] = wh * out.A[k] + qA;
    out.Bm[k] = wh * (out.B[k] - (d / 2.0) * out.A[k]) + qB;

    // midpoint -> next node
    qA = d / 6.0 * (wh * fM + 4.0 * wq * f3 + fR);
    qB = d / 6.0 * (wh * (-d / 2.0) * fM + 4.0 * wq * (-d / 4.0) * f3);
    out.A[k + 1] = wh * out.Am[k] + qA;
    out.B[k + 1] = wh * (out.Bm[k] - (d / 2.0) * out.Am[k]) + qB;
  }
  return out;
}

}  // namespace

SinglePhotonSolution solve(const PulseShape& shape, const CouplingConfig& cfg) {
  const double gamma = cfg.gamma_T / shape.duration();
  return solve_absolute(shape, gamma, cfg.gamma_perp_ratio * gamma, cfg);
}

SinglePhotonSolution solve_absolute(const PulseShape& shape, double gamma, double gamma_perp,
                                    const CouplingConfig& cfg) {
  if (gamma < 0.0 || gamma_perp < 0.0)
    throw std::invalid_argument("solve: negative coupling rate");
  if (cfg.points_per_unit < 32)
    throw resolution_error("solve: grid must resolve T and 1/Gamma_tot with >= 32 points");

  const double g_tot = gamma + gamma_perp;
  double t_end_req;
  if (cfg.t_end_over_T)
    t_end_req = shape.arrival() + *cfg.t_end_over_T * shape.duration();
  else
    t_end_req = shape.support_hi() + (g_tot > 0.0 ? cfg.asymptotic_decay / g_tot : 0.0);

  SinglePhotonSolution sol;
  sol.shape_ = shape;
  sol.gamma_ = gamma;
  sol.gamma_perp_ = gamma_perp;
  sol.grid_ = pulses::make_aligned_grid(shape, g_tot, cfg.points_per_unit, t_end_req);
  const TimeGrid& g = sol.grid_;
  const std::size_t n = g.n;

  KernelPass kp = integrate_kernels(shape, g, g_tot);
  sol.A_ = kp.A;
  sol.B_ = kp.B;

  // Per-interval samples of the outer integrands (one-sided xi at the nodes).
  std::vector<double> a2L(n), a2M(n), a2R(n), abL(n), abM(n), abR(n);
  std::vector<double> d2L(n), d2M(n), d2R(n), faL(n), faM(n), faR(n), fbL(n), fbM(n), fbR(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t0 = g.node(k);
    const double fL = shape.amplitude_right(t0);
    const double fM = shape.amplitude_right(g.mid(k));
    const double fR = shape.amplitude_left(g.node(k + 1));
    const double AL = kp.A[k], AM = kp.Am[k], AR = kp.A[k + 1];
    const double BL = kp.B[k], BM = kp.Bm[k], BR = kp.B[k + 1];
    a2L[k] = AL * AL; a2M[k] = AM * AM; a2R[k] = AR * AR;
    abL[k] = AL * BL; abM[k] = AM * BM; abR[k] = AR * BR;
    const double dL = AL + gamma * BL, dM = AM + gamma * BM, dR = AR + gamma * BR;
    d2L[k] = dL * dL; d2M[k] = dM * dM; d2R[k] = dR * dR;
    faL[k] = fL * AL; faM[k] = fM * AM; faR[k] = fR * AR;
    fbL[k] = fL * BL; fbM[k] = fM * BM; fbR[k] = fR * BR;
  }
  sol.cumA2_ = cumulative_simpson(a2L, a2M, a2R, g.h);
  sol.cumAB_ = cumulative_simpson(abL, abM, abR, g.h);
  sol.cumD2_ = cumulative_simpson(d2L, d2M, d2R, g.h);
  sol.cumFA_ = cumulative_simpson(faL, faM, faR, g.h);
  sol.cumFB_ = cumulative_simpson(fbL, fbM, fbR, g.h);

  sol.psi_e_.assign(n + 1, 0.0);
  sol.env_.assign(n + 1, 0.0);
  sol.p_.assign(n + 1, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    sol.psi_e_[k] = -std::sqrt(gamma) * kp.A[k];
    sol.env_[k] = gamma_perp * gamma * sol.cumA2_[k];
    sol.p_[k] = gamma * kp.A[k] * kp.A[k] + sol.env_[k];
  }
  return sol;
}

double SinglePhotonSolution::wavepacket(double t, double tau) const {
  double v = shape_.kind() == pulses::ShapeKind::Sampled &&
                     (tau < shape_.support_lo() || tau > shape_.support_hi())
                 ? 0.0
                 : shape_.amplitude_right(tau);
  if (tau <= t) v += std::sqrt(gamma_) * psi_e_[grid_.nearest_node(tau)];
  return v;
}

double SinglePhotonSolution::unit_norm_violation() const {
  // <psi_P|psi_P>(t) = 1 + Gamma^2 int A^2 - 2 Gamma int xi A
  double worst = 0.0;
  for (std::size_t k = 0; k <= grid_.n; ++k) {
    const double pulse_norm =
        1.0 + gamma_ * gamma_ * cumA2_[k] - 2.0 * gamma_ * cumFA_[k];
    const double total = gamma_ * A_[k] * A_[k] + pulse_norm + env_[k];
    worst = std::max(worst, std::abs(total - 1.0));
  }
  return worst;
}

fisher::FisherDecomposition SinglePhotonSolution::qfi_at_node(std::size_t k) const {
  const double g = gamma_, q = gamma_perp_;
  const double A = A_[k], B = B_[k];
  const double p = p_[k];
  // s = Gamma * dp/dGamma, with Gamma_perp held fixed.
  const double s = g * (A * A + 2.0 * g * A * B) + q * g * (cumA2_[k] + 2.0 * g * cumAB_[k]);

  double classical_over_1mp;  // Gamma^2 (dp)^2 / p, no (1-p) factor yet
  if (q == 0.0) {
    // exact algebraic limit of s^2/p as p -> 0 (p = Gamma A^2)
    const double r = A + 2.0 * g * B;
    classical_over_1mp = g * r * r;
  } else {
    classical_over_1mp = p > 1e-280 ? s * s / p : 0.0;
  }
  const double quantum_part = 4.0 * g * g * cumD2_[k];  // Gamma^2 4<dpsi|dpsi>

  fisher::FisherDecomposition out;
  out.total = classical_over_1mp + quantum_part;
  out.classical = (p < 1.0) ? classical_over_1mp / (1.0 - p) : classical_over_1mp;
  out.quantum = out.total - out.classical;
  return out;
}

double SinglePhotonSolution::p_orig_at_node(std::size_t k) const {
  const double ov = 1.0 - gamma_ * cumFA_[k];
  return ov * ov;
}

double SinglePhotonSolution::cfi_original_at_node(std::size_t k) const {
  const double g = gamma_;
  const double one_minus_ov = g * cumFA_[k];  // 1 - <xi|psi_P>
  const double ov = 1.0 - one_minus_ov;
  const double dov = -(g * cumFA_[k] + g * g * cumFB_[k]);  // Gamma d<xi|psi_P>/dGamma
  const double p = ov * ov;
  const double one_minus_p = one_minus_ov * (1.0 + ov);  // 1 - p without cancellation
  if (p <= 0.0 || one_minus_p <= 0.0) return 0.0;
  const double dp = 2.0 * ov * dov;
  return dp * dp / (p * one_minus_p);
}

SinglePhotonSolution::BranchOverlaps SinglePhotonSolution::branch_overlaps(double t) const {
  if (!(gamma_ > 0.0))
    throw std::invalid_argument("branch_overlaps: requires gamma > 0");
  const std::size_t k = grid_.nearest_node(t);
  const double g = gamma_;
  const double A = A_[k], B = B_[k];
  const double dpsi_e = -(A / (2.0 * std::sqrt(g)) + std::sqrt(g) * B);
  BranchOverlaps ov;
  ov.norm_e = g * A * A;
  ov.norm_g = 1.0 + g * g * cumA2_[k] - 2.0 * g * cumFA_[k];
  ov.dd_e = dpsi_e * dpsi_e;
  ov.dd_g = cumD2_[k];
  ov.ds_e = -std::sqrt(g) * A * dpsi_e;
  ov.ds_g = -cumFA_[k] - g * cumFB_[k] + g * cumA2_[k] + g * g * cumAB_[k];
  return ov;
}

fisher::FisherDecomposition qfi_decomposition(const SinglePhotonSolution& sol, double t) {
  return sol.qfi_at_node(sol.grid().nearest_node(t));
}

fisher::FisherDecomposition qfi_decomposition(const PulseShape& shape, const CouplingConfig& cfg,
                                              double t) {
  return qfi_decomposition(solve(shape, cfg), t);
}

double cfi_original_mode(const SinglePhotonSolution& sol, double t) {
  return sol.cfi_original_at_node(sol.grid().nearest_node(t));
}

double cfi_original_mode(const PulseShape& shape, const CouplingConfig& cfg, double t) {
  return cfi_original_mode(solve(shape, cfg), t);
}

double convergence_estimate(const PulseShape& shape, const CouplingConfig& cfg) {
  CouplingConfig fine = cfg;
  fine.points_per_unit = 2 * cfg.points_per_unit;
  const auto a = solve(shape, cfg);
  const auto b = solve(shape, fine);
  const double qa = a.qfi_at_node(a.grid().n).total;
  const double qb = b.qfi_at_node(b.grid().n).total;
  return std::abs(qa - qb) / std::max(std::abs(qb), 1e-300);
}

std::vector<SweepRow> asymptotic_sweep(pulses::ShapeKind kind, double gamma_perp_ratio,
                                       std::span<const double> gamma_T_grid,
                                       int points_per_unit) {
  std::vector<SweepRow> rows;
  rows.reserve(gamma_T_grid.size());
  for (double gT : gamma_T_grid) {
    if (!(gT > 0.0)) throw std::invalid_argument("asymptotic_sweep: gamma_T must be positive");
    PulseShape shape = [&] {
      switch (kind) {
        case pulses::ShapeKind::Rectangular: return PulseShape::rectangular(1.0);
        case pulses::ShapeKind::RisingExp: return PulseShape::rising_exp(1.0);
        case pulses::ShapeKind::DecayingExp: return PulseShape::decaying_exp(1.0);
        case pulses::ShapeKind::SymmetricExp: return PulseShape::symmetric_exp(1.0);
        case pulses::ShapeKind::Gaussian: return PulseShape::gaussian(1.0);
        default: throw std::invalid_argument("asymptotic_sweep: sampled shapes not supported");
      }
    }();
    CouplingConfig cfg;
    cfg.gamma_T = gT;
    cfg.gamma_perp_ratio = gamma_perp_ratio;
    cfg.points_per_unit = points_per_unit;
    const auto sol = solve(shape, cfg);
    const std::size_t last = sol.grid().n;
    const auto f = sol.qfi_at_node(last);
    double max_pe = 0.0;
    for (double pe_amp : sol.psi_e()) max_pe = std::max(max_pe, pe_amp * pe_amp);
    rows.push_back({gT, f.total, f.classical, f.quantum, sol.cfi_original_at_node(last), max_pe});
  }
  return rows;
}

}  // namespace pulseqfi::onephoton
