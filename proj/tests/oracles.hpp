// Test-only numerical oracles, independent of the library's integration path.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <random>

namespace oracles {

// Adaptive Simpson quadrature with recursive bisection.
inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int depth = 48) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Piecewise integration that splits at the given breakpoints first.
inline double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                                  const std::vector<double>& breaks, double tol = 1e-12) {
  std::vector<double> pts{a, b};
  for (double x : breaks)
    if (x > a && x < b) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    sum += integrate(f, pts[i] + 1e-13 * (pts[i + 1] - pts[i]), pts[i + 1], tol);
  return sum;
}

struct Rank2Instance {
  Eigen::VectorXcd pe, pg, de, dg;
  Eigen::MatrixXcd rho, drho;
  Eigen::Matrix4cd gram;
};

// Random rank-2 mixture with trace-1 state and traceless derivative.
inline Rank2Instance random_rank2(std::mt19937& rng, int dim, bool orthogonal_branches = false) {
  std::normal_distribution<double> nd;
  auto rvec = [&](int n) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = std::complex<double>(nd(rng), nd(rng));
    return v;
  };
  Rank2Instance out;
  out.pe = rvec(dim);
  out.pg = rvec(dim);
  out.de = rvec(dim);
  out.dg = rvec(dim);
  if (orthogonal_branches) {
    const int half = dim / 2;
    out.pe.tail(dim - half).setZero();
    out.de.tail(dim - half).setZero();
    out.pg.head(half).setZero();
    out.dg.head(half).setZero();
  }
  const double nrm = std::sqrt(out.pe.squaredNorm() + out.pg.squaredNorm());
  out.pe /= nrm;
  out.pg /= nrm;
  // trace(drho) = 2 Re(<pe|de> + <pg|dg>) = 0, fixed by a shift along pg
  const double excess = (out.pe.dot(out.de) + out.pg.dot(out.dg)).real();
  out.dg -= (excess / out.pg.squaredNorm()) * out.pg;

  out.rho = out.pe * out.pe.adjoint() + out.pg * out.pg.adjoint();
  out.drho = out.de * out.pe.adjoint() + out.pe * out.de.adjoint() +
             out.dg * out.pg.adjoint() + out.pg * out.dg.adjoint();
  const Eigen::VectorXcd* basis[4] = {&out.pe, &out.pg, &out.de, &out.dg};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.gram(i, j) = basis[i]->dot(*basis[j]);
  return out;
}

// Partial trace over the second factor of dimension db.
inline Eigen::MatrixXcd partial_trace_b(const Eigen::MatrixXcd& rho, int da, int db) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k) out(i, j) += rho(i * db + k, j * db + k);
  return out;
}

}  // namespace oracles
