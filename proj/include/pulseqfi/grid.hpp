#pragma once

#include <cstddef>
#include <vector>

namespace pulseqfi {

// Uniform time grid with n intervals (n+1 nodes) at t0 + k*h.
struct TimeGrid {
  double t0 = 0.0;
  double h = 0.0;
  std::size_t n = 0;

  double node(std::size_t k) const { return t0 + h * static_cast<double>(k); }
  double mid(std::size_t k) const { return t0 + h * (static_cast<double>(k) + 0.5); }
  double t_end() const { return node(n); }
  std::size_t num_nodes() const { return n + 1; }

  // Index of the node closest to t (t expected within [t0, t_end] up to h/2).
  std::size_t nearest_node(double t) const;
};

// Cumulative integral at every node of a function sampled per interval:
// left endpoint (one-sided), midpoint and right endpoint (one-sided).
// Each interval contributes its own Simpson panel, so integrands may jump
// at nodes without losing the O(h^4) order.
std::vector<double> cumulative_simpson(const std::vector<double>& left,
                                       const std::vector<double>& mid,
                                       const std::vector<double>& right, double h);

}  // namespace pulseqfi
