#include "pulseqfi/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pulseqfi/common.hpp"

namespace pulseqfi::pulses {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Window half-widths, in units of the shape's natural scale. Sized so the
// clipped tail of the amplitude integral (the slower-decaying one, not xi^2)
// stays below ~1e-10.
constexpr double kExpWindow = 46.0;      // exp(-46/2) ~ 1e-10
constexpr double kSymExpWindow = 24.0;   // exp(-24)
constexpr double kGaussWindow = 10.0;    // erfc(5) ~ 1.5e-12

double sq(double x) { return x * x; }

}  // namespace

std::string to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::Rectangular: return "rectangular";
    case ShapeKind::RisingExp: return "rising-exp";
    case ShapeKind::DecayingExp: return "decaying-exp";
    case ShapeKind::SymmetricExp: return "symmetric-exp";
    case ShapeKind::Gaussian: return "gaussian";
    case ShapeKind::Sampled: return "sampled";
  }
  return "?";
}

PulseShape::PulseShape(ShapeKind kind, double duration, double arrival)
    : kind_(kind), duration_(duration), arrival_(arrival) {
  if (!(duration > 0.0)) throw std::invalid_argument("PulseShape: duration_T must be positive");
}

void PulseShape::init_window() {
  const double T = duration_, a = arrival_;
  switch (kind_) {
    case ShapeKind::Rectangular:
      support_lo_ = a;
      support_hi_ = a + T;
      breakpoints_ = {a, a + T};
      break;
    case ShapeKind::RisingExp:
      support_lo_ = a - kExpWindow * T;
      support_hi_ = a;
      breakpoints_ = {a};
      break;
    case ShapeKind::DecayingExp:
      support_lo_ = a;
      support_hi_ = a + kExpWindow * T;
      breakpoints_ = {a};
      break;
    case ShapeKind::SymmetricExp:
      support_lo_ = a - kSymExpWindow * T;
      support_hi_ = a + kSymExpWindow * T;
      breakpoints_ = {a};
      break;
    case ShapeKind::Gaussian:
      support_lo_ = a - kGaussWindow * T;
      support_hi_ = a + kGaussWindow * T;
      breakpoints_ = {a};
      break;
    case ShapeKind::Sampled:
      support_lo_ = stimes_.front();
      support_hi_ = stimes_.back();
      breakpoints_ = {stimes_.front(), stimes_.back()};
      break;
  }
}

PulseShape PulseShape::rectangular(double T, double arrival) {
  PulseShape s(ShapeKind::Rectangular, T, arrival);
  s.init_window();
  return s;
}
PulseShape PulseShape::rising_exp(double T, double arrival) {
  PulseShape s(ShapeKind::RisingExp, T, arrival);
  s.init_window();
  return s;
}
PulseShape PulseShape::decaying_exp(double T, double arrival) {
  PulseShape s(ShapeKind::DecayingExp, T, arrival);
  s.init_window();
  return s;
}
PulseShape PulseShape::symmetric_exp(double T, double arrival) {
  PulseShape s(ShapeKind::SymmetricExp, T, arrival);
  s.init_window();
  return s;
}
PulseShape PulseShape::gaussian(double T, double arrival) {
  PulseShape s(ShapeKind::Gaussian, T, arrival);
  s.init_window();
  return s;
}

PulseShape PulseShape::by_name(std::string_view name, double duration, double arrival) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
  std::replace(n.begin(), n.end(), '_', '-');
  if (n == "rectangular" || n == "rect") return rectangular(duration, arrival);
  if (n == "rising-exp" || n == "rising") return rising_exp(duration, arrival);
  if (n == "decaying-exp" || n == "decaying") return decaying_exp(duration, arrival);
  if (n == "symmetric-exp" || n == "symmetric") return symmetric_exp(duration, arrival);
  if (n == "gaussian" || n == "gauss") return gaussian(duration, arrival);
  throw std::invalid_argument("unknown pulse shape: " + std::string(name));
}

PulseShape PulseShape::sampled(std::vector<double> times, std::vector<double> amplitudes) {
  if (times.size() != amplitudes.size())
    throw std::invalid_argument("sampled: times/amplitudes size mismatch");
  if (times.size() < 1024)
    throw std::invalid_argument("sampled: need at least 1024 grid points covering the support");
  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw std::invalid_argument("sampled: times must be strictly increasing");
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double d = times[i] - times[i - 1];
    if (!(d > 0.0)) throw std::invalid_argument("sampled: times must be strictly increasing");
    if (std::abs(d - dt) > 1e-9 * std::abs(dt))
      throw std::invalid_argument("sampled: time grid must be uniform within 1e-9 relative");
  }

  // Exact piecewise-linear integrals, then renormalize so int xi^2 dt = 1.
  double norm2 = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double v0 = amplitudes[i], v1 = amplitudes[i + 1];
    norm2 += dt * (v0 * v0 + v0 * v1 + v1 * v1) / 3.0;
  }
  if (!(norm2 > 0.0)) throw std::invalid_argument("sampled: amplitude data has zero norm");
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& v : amplitudes) v *= scale;

  // Duration parameter: standard deviation of xi^2 (exact on the linear pieces
  // up to Simpson's cubic exactness, ample at >= 1024 points).
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double t0 = times[i], t1 = times[i + 1], tm = 0.5 * (t0 + t1);
    const double v0 = sq(amplitudes[i]), v1 = sq(amplitudes[i + 1]);
    const double vm = sq(0.5 * (amplitudes[i] + amplitudes[i + 1]));
    m0 += dt / 6.0 * (v0 + 4.0 * vm + v1);
    m1 += dt / 6.0 * (t0 * v0 + 4.0 * tm * vm + t1 * v1);
    m2 += dt / 6.0 * (t0 * t0 * v0 + 4.0 * tm * tm * vm + t1 * t1 * v1);
  }
  const double mean = m1 / m0;
  const double var = std::max(m2 / m0 - mean * mean, 0.0);

  PulseShape s(ShapeKind::Sampled, std::sqrt(var) > 0.0 ? std::sqrt(var) : dt, mean);
  s.stimes_ = std::move(times);
  s.svals_ = std::move(amplitudes);

  // Prefix integrals of xi and xi^2 at the sample nodes (exact on linear pieces).
  s.scum_.assign(s.stimes_.size(), 0.0);
  s.scum_sq_.assign(s.stimes_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < s.stimes_.size(); ++i) {
    const double v0 = s.svals_[i], v1 = s.svals_[i + 1];
    s.scum_[i + 1] = s.scum_[i] + dt * 0.5 * (v0 + v1);
    s.scum_sq_[i + 1] = s.scum_sq_[i] + dt * (v0 * v0 + v0 * v1 + v1 * v1) / 3.0;
  }
  s.init_window();
  return s;
}

PulseShape PulseShape::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open CSV file: " + path);
  std::vector<double> ts, vs;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double t, v;
    if (!(ss >> t >> v)) {
      if (first) {
        first = false;  // header row
        continue;
      }
      throw io_error("malformed CSV row in " + path + ": " + line);
    }
    first = false;
    ts.push_back(t);
    vs.push_back(v);
  }
  return sampled(std::move(ts), std::move(vs));
}

double PulseShape::t_sigma() const {
  switch (kind_) {
    case ShapeKind::Rectangular: return duration_ / std::sqrt(12.0);
    case ShapeKind::RisingExp:
    case ShapeKind::DecayingExp: return duration_;
    case ShapeKind::SymmetricExp: return duration_ / std::sqrt(2.0);
    case ShapeKind::Gaussian: return duration_;
    case ShapeKind::Sampled: return duration_;  // computed from the samples
  }
  return duration_;
}

double PulseShape::eval(double t, int side) const {
  const double T = duration_;
  const double s = t - arrival_;
  const double rT = 1.0 / std::sqrt(T);
  switch (kind_) {
    case ShapeKind::Rectangular: {
      bool in;
      if (side > 0)
        in = (t >= arrival_) && (t < arrival_ + T);
      else if (side < 0)
        in = (t > arrival_) && (t <= arrival_ + T);
      else
        in = (t >= arrival_) && (t <= arrival_ + T);
      return in ? rT : 0.0;
    }
    case ShapeKind::RisingExp: {
      const bool in = (side > 0) ? (s < 0.0) : (s <= 0.0);
      return in ? rT * std::exp(0.5 * s / T) : 0.0;
    }
    case ShapeKind::DecayingExp: {
      const bool in = (side < 0) ? (s > 0.0) : (s >= 0.0);
      return in ? rT * std::exp(-0.5 * s / T) : 0.0;
    }
    case ShapeKind::SymmetricExp:
      return rT * std::exp(-std::abs(s) / T);
    case ShapeKind::Gaussian:
      return rT * std::pow(2.0 * kPi, -0.25) * std::exp(-0.25 * sq(s / T));
    case ShapeKind::Sampled: {
      if (t < stimes_.front() || t > stimes_.back()) return 0.0;
      const double dt = stimes_[1] - stimes_[0];
      const double x = (t - stimes_.front()) / dt;
      std::size_t i = std::min(static_cast<std::size_t>(std::max(x, 0.0)), stimes_.size() - 2);
      const double f = x - static_cast<double>(i);
      return svals_[i] * (1.0 - f) + svals_[i + 1] * f;
    }
  }
  return 0.0;
}

double PulseShape::amplitude(double t) const {
  if (kind_ == ShapeKind::Sampled && (t < stimes_.front() || t > stimes_.back()))
    throw std::out_of_range("sampled pulse: out of support");
  return eval(t, 0);
}

double PulseShape::cumulative(double t) const {
  const double T = duration_;
  const double s = t - arrival_;
  const double sT = std::sqrt(T);
  switch (kind_) {
    case ShapeKind::Rectangular:
      return std::clamp(s, 0.0, T) / sT;
    case ShapeKind::RisingExp:
      return (s <= 0.0) ? 2.0 * sT * std::exp(0.5 * s / T) : 2.0 * sT;
    case ShapeKind::DecayingExp:
      return (s <= 0.0) ? 0.0 : 2.0 * sT * (1.0 - std::exp(-0.5 * s / T));
    case ShapeKind::SymmetricExp:
      return (s <= 0.0) ? sT * std::exp(s / T) : sT * (2.0 - std::exp(-s / T));
    case ShapeKind::Gaussian:
      return sT * std::sqrt(kPi) * std::pow(2.0 * kPi, -0.25) * (1.0 + std::erf(0.5 * s / T));
    case ShapeKind::Sampled: {
      if (t <= stimes_.front()) return 0.0;
      if (t >= stimes_.back()) return scum_.back();
      const double dt = stimes_[1] - stimes_[0];
      const double x = (t - stimes_.front()) / dt;
      const std::size_t i = std::min(static_cast<std::size_t>(x), stimes_.size() - 2);
      const double f = x - static_cast<double>(i);
      const double v0 = svals_[i], v1 = svals_[i + 1];
      const double vt = v0 * (1.0 - f) + v1 * f;
      return scum_[i] + dt * f * 0.5 * (v0 + vt);
    }
  }
  return 0.0;
}

double PulseShape::cumulative_sq(double t) const {
  const double T = duration_;
  const double s = t - arrival_;
  switch (kind_) {
    case ShapeKind::Rectangular:
      return std::clamp(s, 0.0, T) / T;
    case ShapeKind::RisingExp:
      return (s <= 0.0) ? std::exp(s / T) : 1.0;
    case ShapeKind::DecayingExp:
      return (s <= 0.0) ? 0.0 : 1.0 - std::exp(-s / T);
    case ShapeKind::SymmetricExp:
      return (s <= 0.0) ? 0.5 * std::exp(2.0 * s / T) : 1.0 - 0.5 * std::exp(-2.0 * s / T);
    case ShapeKind::Gaussian:
      return 0.5 * (1.0 + std::erf(s / (T * std::sqrt(2.0))));
    case ShapeKind::Sampled: {
      if (t <= stimes_.front()) return 0.0;
      if (t >= stimes_.back()) return scum_sq_.back();
      const double dt = stimes_[1] - stimes_[0];
      const double x = (t - stimes_.front()) / dt;
      const std::size_t i = std::min(static_cast<std::size_t>(x), stimes_.size() - 2);
      const double f = x - static_cast<double>(i);
      const double v0 = svals_[i], v1 = svals_[i + 1];
      const double vt = v0 * (1.0 - f) + v1 * f;
      return scum_sq_[i] + dt * f * (v0 * v0 + v0 * vt + vt * vt) / 3.0;
    }
  }
  return 0.0;
}

double PulseShape::scale_invariant_F(double x) const {
  return cumulative(arrival_ + x * duration_) / std::sqrt(duration_);
}

TimeGrid make_aligned_grid(const PulseShape& shape, double decay_rate, int points_per_unit,
                           double t_end_request) {
  if (points_per_unit < 32)
    throw resolution_error("grid: need at least 32 points per shortest time scale");
  const double T = shape.duration();
  double h;
  double anchor;
  if (shape.kind() == ShapeKind::Sampled) {
    const auto& ts = shape.sample_times();
    const double dt = ts[1] - ts[0];
    const double target =
        std::min(T, decay_rate > 0.0 ? 1.0 / decay_rate : T) / points_per_unit;
    const int refine = std::max(1, static_cast<int>(std::ceil(dt / target)));
    h = dt / refine;
    anchor = ts.front();
  } else {
    const double scale = std::max(1.0, decay_rate * T);
    const int m = static_cast<int>(std::ceil(points_per_unit * scale));
    h = T / m;
    anchor = shape.arrival();
  }
  const double lo = shape.support_lo();
  const double hi = std::max(shape.support_hi(), t_end_request);
  const double k0 = std::ceil((anchor - lo) / h - 1e-9);
  const double k1 = std::ceil((hi - anchor) / h - 1e-9);
  TimeGrid g;
  g.h = h;
  g.t0 = anchor - k0 * h;
  g.n = static_cast<std::size_t>(k0 + k1);
  if (g.n > 40'000'000)
    throw resolution_error("grid: configuration needs > 4e7 nodes; reduce the window or density");
  return g;
}

}  // namespace pulseqfi::pulses
