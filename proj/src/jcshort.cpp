#include "pulseqfi/jcshort.hpp"

#include <cmath>
#include <stdexcept>

#include "pulseqfi/common.hpp"
#include "pulseqfi/fisher.hpp"

namespace pulseqfi::jcshort {

namespace {
constexpr double kTailTol = 1e-10;
}

FockCoefficients::FockCoefficients(StateKind k, Eigen::VectorXcd c, double tail)
    : kind_(k), c_(std::move(c)), tail_(tail) {
  const double norm2 = c_.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-10)
    throw std::invalid_argument("FockCoefficients: coefficients not normalized to 1e-10");
}

FockCoefficients FockCoefficients::fock(int n) {
  if (n < 0) throw std::invalid_argument("fock: n must be non-negative");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n + 1);
  c(n) = 1.0;
  return FockCoefficients(StateKind::Fock, std::move(c), 0.0);
}

FockCoefficients FockCoefficients::coherent(complexd alpha) {
  const double n2 = std::norm(alpha);
  const int ncut = static_cast<int>(std::ceil(n2 + 10.0 * std::sqrt(n2 + 1.0)));
  Eigen::VectorXcd c(ncut + 1);
  // c_n = e^{-|a|^2/2} a^n / sqrt(n!) built by recurrence
  c(0) = std::exp(-0.5 * n2);
  for (int n = 1; n <= ncut; ++n) c(n) = c(n - 1) * alpha / std::sqrt(double(n));
  const double tail = std::max(1.0 - c.squaredNorm(), 0.0);
  if (tail > kTailTol) throw cutoff_error("coherent: tail mass above 1e-10 at computed cutoff");
  c /= c.norm();
  return FockCoefficients(StateKind::Coherent, std::move(c), tail);
}

FockCoefficients FockCoefficients::squeezed_vacuum(complexd r) {
  const double rr = std::abs(r);
  if (rr == 0.0) return FockCoefficients(StateKind::SqueezedVacuum, Eigen::VectorXcd::Ones(1), 0.0);
  const complexd phase = r / rr;
  const double ch = std::cosh(rr);
  const complexd ratio = phase * std::tanh(rr) * 0.5;  // s/(2c)
  // c_{2n} = (s/2c)^n sqrt((2n)!)/n! / sqrt(cosh r)
  std::vector<complexd> even;
  complexd term = 1.0 / std::sqrt(ch);
  even.push_back(term);
  double mass = std::norm(term);
  for (int n = 1; n < 600; ++n) {
    term *= ratio * std::sqrt(double(2 * n) * double(2 * n - 1)) / double(n);
    even.push_back(term);
    mass += std::norm(term);
    if (1.0 - mass < kTailTol && n > 4) break;
  }
  const double tail = std::max(1.0 - mass, 0.0);
  if (tail > kTailTol)
    throw cutoff_error("squeezed_vacuum: tail mass above 1e-10 within cutoff budget");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * (even.size() - 1) + 1);
  for (std::size_t n = 0; n < even.size(); ++n) c(2 * n) = even[n];
  c /= c.norm();
  return FockCoefficients(StateKind::SqueezedVacuum, std::move(c), tail);
}

FockCoefficients FockCoefficients::custom(Eigen::VectorXcd coeffs) {
  return FockCoefficients(StateKind::Custom, std::move(coeffs), 0.0);
}

double FockCoefficients::mean_photons() const {
  double nbar = 0.0;
  for (int n = 0; n < c_.size(); ++n) nbar += n * std::norm(c_(n));
  return nbar;
}

JCBranches jc_evolve(const FockCoefficients& state, double gamma, double G_t) {
  if (!(gamma > 0.0)) throw std::invalid_argument("jc_evolve: gamma must be positive");
  if (state.tail_bound() > kTailTol)
    throw cutoff_error("jc_evolve: state tail mass above cutoff tolerance");
  const Eigen::VectorXcd& c = state.coeffs();
  const auto N = c.size();
  const double th = std::sqrt(gamma) * G_t;
  JCBranches out;
  out.excited = Eigen::VectorXcd::Zero(N);
  out.ground = Eigen::VectorXcd::Zero(N);
  const complexd mi(0.0, -1.0);
  for (Eigen::Index n = 0; n < N; ++n) {
    out.ground(n) = std::cos(th * std::sqrt(double(n))) * c(n);
    if (n + 1 < N) out.excited(n) = mi * std::sin(th * std::sqrt(double(n + 1))) * c(n + 1);
  }
  return out;
}

namespace {

struct BranchDerivatives {
  Eigen::VectorXcd de, dg;  // d/dGamma of the two branch amplitude vectors
};

BranchDerivatives jc_derivatives(const FockCoefficients& state, double gamma, double G_t) {
  const Eigen::VectorXcd& c = state.coeffs();
  const auto N = c.size();
  const double th = std::sqrt(gamma) * G_t;
  // d theta_n / d Gamma = G_t sqrt(n) / (2 sqrt(Gamma))
  BranchDerivatives out;
  out.de = Eigen::VectorXcd::Zero(N);
  out.dg = Eigen::VectorXcd::Zero(N);
  const complexd mi(0.0, -1.0);
  for (Eigen::Index n = 0; n < N; ++n) {
    const double rn = std::sqrt(double(n));
    out.dg(n) = -std::sin(th * rn) * (G_t * rn / (2.0 * std::sqrt(gamma))) * c(n);
    if (n + 1 < N) {
      const double rn1 = std::sqrt(double(n + 1));
      out.de(n) = mi * std::cos(th * rn1) * (G_t * rn1 / (2.0 * std::sqrt(gamma))) * c(n + 1);
    }
  }
  return out;
}

}  // namespace

double jc_qfi(const FockCoefficients& state, double gamma, double G_t) {
  const JCBranches br = jc_evolve(state, gamma, G_t);
  const BranchDerivatives d = jc_derivatives(state, gamma, G_t);

  const complexd eg = br.excited.dot(br.ground);    // <e|g>
  const complexd edg = br.excited.dot(d.dg);        // <e|dg>
  const complexd gde = br.ground.dot(d.de);         // <g|de>
  const double scale = std::max({br.excited.squaredNorm(), br.ground.squaredNorm(), 1e-300});

  if (std::abs(eg) < 1e-13 * scale && std::abs(edg) < 1e-13 && std::abs(gde) < 1e-13) {
    return fisher::orthogonal_rank2(br.excited.squaredNorm(), br.ground.squaredNorm(),
                                    d.de.squaredNorm(), d.dg.squaredNorm(),
                                    br.excited.dot(d.de), br.ground.dot(d.dg));
  }

  fisher::GramMatrix4 gm;
  const Eigen::VectorXcd* basis[4] = {&br.excited, &br.ground, &d.de, &d.dg};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) gm.g(i, j) = basis[i]->dot(*basis[j]);
  try {
    return fisher::qfi_rank2_gram(gm);
  } catch (const ill_conditioned_error&) {
    // eigendecomposition oracle on the truncated Fock matrix
    Eigen::MatrixXcd rho = br.excited * br.excited.adjoint() + br.ground * br.ground.adjoint();
    Eigen::MatrixXcd drho = d.de * br.excited.adjoint() + br.excited * d.de.adjoint() +
                            d.dg * br.ground.adjoint() + br.ground * d.dg.adjoint();
    return fisher::qfi_eigen(rho, drho);
  }
}

double atom_pure_qfi_bound(const FockCoefficients& state, double gamma, double G_t) {
  if (!(gamma > 0.0)) throw std::invalid_argument("atom_pure_qfi_bound: gamma must be positive");
  return state.mean_photons() * G_t * G_t / gamma;
}

LinearAbsorptionResult linear_absorption_probe(const FockCoefficients& state, double gamma,
                                               double T, double F_t, double guard) {
  const double nbar = state.mean_photons();
  const double strength = std::sqrt(gamma * T) * std::abs(F_t) * std::sqrt(std::max(nbar, 1.0));
  if (!(strength < guard))
    throw regime_error("linear_absorption_probe: sqrt(Gamma T) F sqrt(n) exceeds the regime guard");
  LinearAbsorptionResult out;
  out.p_e = nbar * gamma * T * F_t * F_t;
  out.dimensionless_qfi = out.p_e;
  return out;
}

}  // namespace pulseqfi::jcshort
