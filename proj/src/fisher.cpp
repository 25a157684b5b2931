#include "pulseqfi/fisher.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pulseqfi/common.hpp"

namespace pulseqfi::fisher {

namespace {
double sq_im(complexd z) { return z.imag() * z.imag(); }
}  // namespace

double cfi_binary(double p, double dp) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("cfi_binary: p outside [0,1]");
  if (p == 0.0 || p == 1.0) {
    if (dp == 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  return dp * dp / (p * (1.0 - p));
}

double qfi_pure(double inner_dd, complexd inner_ds) {
  const double ds2 = std::norm(inner_ds);
  if (inner_dd < ds2 - 1e-9)
    throw std::invalid_argument("qfi_pure: <dpsi|dpsi> < |<dpsi|psi>|^2 beyond tolerance");
  return std::max(4.0 * (inner_dd - ds2), 0.0);
}

void GramMatrix4::validate() const {
  const double scale = std::max(g.cwiseAbs().maxCoeff(), 1e-300);
  if (((g - g.adjoint()).cwiseAbs().maxCoeff()) > 1e-10 * scale)
    throw std::invalid_argument("GramMatrix4: not Hermitian within 1e-10");
  if (delta() < -1e-10 * scale * scale)
    throw std::invalid_argument("GramMatrix4: leading block not positive semidefinite");
}

double GramMatrix4::delta() const {
  return g(0, 0).real() * g(1, 1).real() - std::norm(g(0, 1));
}

double qfi_rank2_gram(const GramMatrix4& gram) {
  gram.validate();
  const Eigen::Matrix4cd& G = gram.g;

  // Balance the basis: b'_i = b_i / d_i with d_i = sqrt(G_ii). In the scaled
  // basis rho^B = diag(d1^2, d2^2, 0, 0) and drho^B carries d_i d_j factors at
  // the (state, derivative) slots. This keeps the 16x16 solve well scaled even
  // when the four vectors have very different magnitudes.
  Eigen::Vector4d d;
  for (int i = 0; i < 4; ++i) {
    const double gii = G(i, i).real();
    d(i) = gii > 0.0 ? std::sqrt(gii) : 1.0;
  }
  Eigen::Matrix4cd Gs;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) Gs(i, j) = G(i, j) / (d(i) * d(j));

  Eigen::Matrix4cd rhoB = Eigen::Matrix4cd::Zero();
  rhoB(0, 0) = d(0) * d(0);
  rhoB(1, 1) = d(1) * d(1);
  Eigen::Matrix4cd drhoB = Eigen::Matrix4cd::Zero();
  drhoB(0, 2) = drhoB(2, 0) = d(0) * d(2);
  drhoB(1, 3) = drhoB(3, 1) = d(1) * d(3);

  // 2 drho = L G rho + rho G L  (all in the scaled-basis representation),
  // vectorized column-major: [ (G rho)^T (x) I + I (x) (rho G) ] vec(L) = 2 vec(drho).
  const Eigen::Matrix4cd GR = Gs * rhoB;
  const Eigen::Matrix4cd RG = rhoB * Gs;
  Eigen::Matrix<complexd, 16, 16> M = Eigen::Matrix<complexd, 16, 16>::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        M(4 * j + i, 4 * k + i) += GR(k, j);  // (GR)^T (x) I
        M(4 * j + i, 4 * j + k) += RG(i, k);  // I (x) RG
      }
  Eigen::Matrix<complexd, 16, 1> b;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) b(4 * j + i) = 2.0 * drhoB(i, j);

  Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix<complexd, 16, 16>> cod(M);
  cod.setThreshold(1e-13);
  const Eigen::Matrix<complexd, 16, 1> lv = cod.solve(b);

  const double bnorm = b.norm();
  if (bnorm > 0.0 && (M * lv - b).norm() > 1e-7 * bnorm)
    throw ill_conditioned_error(
        "qfi_rank2_gram: SLD equation inconsistent at this conditioning; "
        "fall back to qfi_eigen");

  Eigen::Matrix4cd L;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) L(i, j) = lv(4 * j + i);

  const complexd q = (L * Gs * drhoB * Gs).trace();
  return std::max(q.real(), 0.0);
}

double orthogonal_rank2(double norm_e, double norm_g, double dd_e, double dd_g, complexd ds_e,
                        complexd ds_g) {
  if (norm_e < 0.0 || norm_g < 0.0) throw std::domain_error("orthogonal_rank2: negative norm");
  double q = 4.0 * (dd_e + dd_g);
  if (norm_e > 0.0) q -= 4.0 * sq_im(ds_e) / norm_e;
  if (norm_g > 0.0) q -= 4.0 * sq_im(ds_g) / norm_g;
  return std::max(q, 0.0);
}

double qfi_eigen(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& drho,
                 double eig_threshold) {
  const auto n = rho.rows();
  if (rho.cols() != n || drho.rows() != n || drho.cols() != n)
    throw std::domain_error("qfi_eigen: dimension mismatch");
  if (n > 512) throw std::domain_error("qfi_eigen: dimension > 512");
  const double scale = std::max(rho.cwiseAbs().maxCoeff(), 1e-300);
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::domain_error("qfi_eigen: rho not Hermitian");
  const double dscale = std::max(drho.cwiseAbs().maxCoeff(), 1e-300);
  if ((drho - drho.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * dscale)
    throw std::domain_error("qfi_eigen: drho not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-8 || std::abs(rho.trace().imag()) > 1e-10)
    throw std::domain_error("qfi_eigen: trace(rho) != 1");
  if (std::abs(drho.trace()) > 1e-8 * std::max(dscale, 1.0))
    throw std::domain_error("qfi_eigen: trace(drho) != 0");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()));
  const Eigen::VectorXd lam = es.eigenvalues();
  const Eigen::MatrixXcd D = es.eigenvectors().adjoint() * drho * es.eigenvectors();
  double q = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double s = lam(i) + lam(j);
      if (s > eig_threshold) q += 2.0 * std::norm(D(i, j)) / s;
    }
  return q;
}

double extended_convexity_rhs(std::span<const double> probs, std::span<const double> dprobs,
                              std::span<const double> qfis) {
  if (probs.size() != dprobs.size() || probs.size() != qfis.size())
    throw std::domain_error("extended_convexity_rhs: length mismatch");
  double psum = 0.0, dsum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    psum += probs[i];
    dsum += dprobs[i];
  }
  if (std::abs(psum - 1.0) > 1e-9)
    throw std::domain_error("extended_convexity_rhs: probabilities do not sum to 1");
  if (std::abs(dsum) > 1e-9)
    throw std::domain_error("extended_convexity_rhs: dprobs do not sum to 0");
  double out = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0)
      out += dprobs[i] * dprobs[i] / probs[i] + probs[i] * qfis[i];
    else if (dprobs[i] != 0.0)
      return std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace pulseqfi::fisher
