#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pulseqfi/grid.hpp"

namespace pulseqfi::pulses {

enum class ShapeKind { Rectangular, RisingExp, DecayingExp, SymmetricExp, Gaussian, Sampled };

std::string to_string(ShapeKind k);

/// A square-normalized real temporal amplitude xi(t).
///
/// Built-in families follow the usual closed forms; for all of them the
/// arrival time is the peak of the envelope, except the rectangular pulse
/// where it marks the start of the support. Values are immutable after
/// construction and all queries are pure.
class PulseShape {
 public:
  static PulseShape rectangular(double duration, double arrival = 0.0);
  static PulseShape rising_exp(double duration, double arrival = 0.0);
  static PulseShape decaying_exp(double duration, double arrival = 0.0);
  static PulseShape symmetric_exp(double duration, double arrival = 0.0);
  static PulseShape gaussian(double duration, double arrival = 0.0);

  /// Uniformly sampled amplitude data; renormalized on construction.
  /// Requires >= 1024 strictly increasing, uniform (1e-9 relative) times.
  static PulseShape sampled(std::vector<double> times, std::vector<double> amplitudes);

  /// Two-column CSV (time, amplitude); an optional non-numeric header line is skipped.
  static PulseShape from_csv(const std::string& path);

  /// Lookup by lowercase name: rectangular|rising-exp|decaying-exp|symmetric-exp|gaussian.
  static PulseShape by_name(std::string_view name, double duration, double arrival = 0.0);

  ShapeKind kind() const { return kind_; }
  double duration() const { return duration_; }
  double arrival() const { return arrival_; }

  /// Standard deviation of the temporal distribution xi(t)^2.
  double t_sigma() const;

  /// xi(t); zero outside the support, throws for Sampled queried off-grid.
  double amplitude(double t) const;
  /// One-sided limits, used by integrators so jumps at nodes stay exact.
  double amplitude_left(double t) const { return eval(t, -1); }
  double amplitude_right(double t) const { return eval(t, +1); }

  /// G_t = int_{t0}^t xi(t') dt' (t0 before the support).
  double cumulative(double t) const;

  /// I_xi(t) = int_{t0}^t xi(t')^2 dt', monotone from 0 to 1.
  double cumulative_sq(double t) const;

  /// F_x = G_{arrival + x T}/sqrt(T); independent of T.
  double scale_invariant_F(double x) const;

  /// Integration window [lo, hi] outside which the tail mass of xi^2 is < 1e-10.
  double support_lo() const { return support_lo_; }
  double support_hi() const { return support_hi_; }

  /// Points where xi or its derivative jumps; integration grids keep these on nodes.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  const std::vector<double>& sample_times() const { return stimes_; }
  const std::vector<double>& sample_values() const { return svals_; }

 private:
  PulseShape(ShapeKind kind, double duration, double arrival);
  double eval(double t, int side) const;
  void init_window();

  ShapeKind kind_;
  double duration_;
  double arrival_;
  double support_lo_ = 0.0, support_hi_ = 0.0;
  std::vector<double> breakpoints_;
  // Sampled data
  std::vector<double> stimes_, svals_;
  std::vector<double> scum_, scum_sq_;  // prefix integrals at sample nodes
};

/// Grid whose spacing h = duration/m (integer m) keeps every breakpoint on a
/// node. `points_per_unit` applies to the shorter of the pulse duration and
/// 1/decay_rate; the window is [support_lo, max(support_hi, t_end_request)].
TimeGrid make_aligned_grid(const PulseShape& shape, double decay_rate, int points_per_unit,
                           double t_end_request);

}  // namespace pulseqfi::pulses
