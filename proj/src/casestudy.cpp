#include "pulseqfi/casestudy.hpp"

#include <cmath>
#include <stdexcept>

#include "pulseqfi/biphoton.hpp"
#include "pulseqfi/jcshort.hpp"
#include "pulseqfi/pulses.hpp"

namespace pulseqfi::casestudy {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Published sodium D2 case-study coupling: Gamma T = 7.34995e-7 at T = 0.15 ps.
constexpr double kSodiumGamma = 7.34995e-7 / 0.15e-12;
}  // namespace

double AtomParams::coupling_const_sq() const {
  return omega0 / (4.0 * kPi * kHbar * kEps0 * kSpeedOfLight * quantization_area);
}

double AtomParams::gamma() const { return mu * mu * coupling_const_sq(); }

double AtomParams::gamma_perp() const {
  const double gp = gamma_tot - gamma();
  if (gp < 0.0) throw std::domain_error("AtomParams: gamma exceeds gamma_tot");
  return gp;
}

double geometric_area(double omega0) {
  const double lambda0 = 2.0 * kPi * kSpeedOfLight / omega0;
  return lambda0 * lambda0 / (2.0 * kPi);
}

AtomParams sodium_defaults() {
  AtomParams p;
  p.mu = 2.988e-29;
  p.omega0 = 2.0 * kPi * 508.333e12;
  p.gamma_tot = 61.542e6;
  // invert Gamma = mu^2 w/(4 pi hbar eps0 c A) for the calibrated area
  p.quantization_area =
      p.mu * p.mu * p.omega0 / (4.0 * kPi * kHbar * kEps0 * kSpeedOfLight * kSodiumGamma);
  return p;
}

double reparam_qfi_mu(double q_gamma, double mu, double A_const) {
  if (!(mu > 0.0)) throw std::invalid_argument("reparam_qfi_mu: mu must be positive");
  const double a2 = A_const * A_const;
  return 4.0 * mu * mu * a2 * a2 * q_gamma;
}

namespace {

struct SodiumContext {
  AtomParams atom;
  pulses::PulseShape pump = pulses::PulseShape::gaussian(1.0);
  double a4;  // A(w)^4

  explicit SodiumContext(const SodiumFigureParams& p)
      : atom(sodium_defaults()), pump(pulses::PulseShape::gaussian(p.T)) {
    const double a2 = atom.coupling_const_sq();
    a4 = a2 * a2;
  }
  double to_mu(double q_gamma) const { return 4.0 * atom.mu * atom.mu * a4 * q_gamma; }
};

}  // namespace

std::vector<Figure7Row> figure7(std::span<const double> t_grid, SodiumFigureParams p) {
  SodiumContext ctx(p);
  const double gamma = ctx.atom.gamma();

  const auto fock1 = jcshort::FockCoefficients::fock(1);
  const auto coh = jcshort::FockCoefficients::coherent(std::sqrt(p.mean_photons));
  const auto sq = jcshort::FockCoefficients::squeezed_vacuum(std::asinh(std::sqrt(p.mean_photons)));

  const auto jsa = biphoton::build_jsa(1.0 / p.T, p.t_qent);
  const auto spec = biphoton::schmidt_decompose(jsa);

  std::vector<Figure7Row> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    const double G_t = ctx.pump.cumulative(t);
    Figure7Row r;
    r.t = t;
    r.fock1 = ctx.to_mu(jcshort::jc_qfi(fock1, gamma, G_t));
    r.coherent1 = ctx.to_mu(jcshort::jc_qfi(coh, gamma, G_t));
    r.squeezed1 = ctx.to_mu(jcshort::jc_qfi(sq, gamma, G_t));
    r.biphoton = ctx.to_mu(biphoton::biphoton_qfi_short(spec, gamma, t));
    const double F0 = biphoton::hermite_gauss_cumulative(0, t / spec.k_S);
    r.schmidt0 = ctx.to_mu(spec.k_S * F0 * F0 / gamma);
    rows.push_back(r);
  }
  const Figure7Row& last = rows.back();
  if (!(last.schmidt0 >= last.biphoton))
    throw std::logic_error("figure7: 0-th Schmidt mode fell below the biphoton state");
  if (!(last.coherent1 <= 0.5 * last.fock1))
    throw std::logic_error("figure7: coherent state unexpectedly competitive with Fock");
  return rows;
}

std::vector<Figure8Row> figure8(std::span<const double> t_qent_grid, SodiumFigureParams p) {
  SodiumContext ctx(p);
  const double gamma = ctx.atom.gamma();
  const double t_eval = 10.0 * p.T;
  const double G_pump = ctx.pump.cumulative(t_eval);
  const double q_pump = ctx.to_mu(G_pump * G_pump / gamma);  // Fock-1 in the pump mode

  std::vector<Figure8Row> rows;
  rows.reserve(t_qent_grid.size());
  for (double tq : t_qent_grid) {
    const auto jsa = biphoton::build_jsa(1.0 / p.T, tq);
    const auto spec = biphoton::schmidt_decompose(jsa);
    Figure8Row r;
    r.t_qent = tq;
    r.biphoton = ctx.to_mu(biphoton::biphoton_qfi_short(spec, gamma, t_eval));
    r.pump_photon = q_pump;
    const double F0 = biphoton::hermite_gauss_cumulative(0, t_eval / spec.k_S);
    r.schmidt0 = ctx.to_mu(spec.k_S * F0 * F0 / gamma);
    r.entropy_nat = biphoton::entanglement_entropy(spec);
    r.entropy_bits = biphoton::entanglement_entropy(spec, 2.0);
    r.w = spec.w;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace pulseqfi::casestudy
