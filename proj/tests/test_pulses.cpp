#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "pulseqfi/pulses.hpp"

using pulseqfi::pulses::PulseShape;
using pulseqfi::pulses::ShapeKind;

namespace {

std::vector<PulseShape> builtins(double T, double arrival = 0.0) {
  return {PulseShape::rectangular(T, arrival), PulseShape::rising_exp(T, arrival),
          PulseShape::decaying_exp(T, arrival), PulseShape::symmetric_exp(T, arrival),
          PulseShape::gaussian(T, arrival)};
}

}  // namespace

TEST_CASE("amplitude closed forms") {
  const auto rect = PulseShape::rectangular(1.0);
  CHECK(rect.amplitude(0.5) == doctest::Approx(1.0));
  CHECK(rect.amplitude(-0.1) == 0.0);

  const auto gauss = PulseShape::gaussian(1.0);
  CHECK(gauss.amplitude(0.0) == doctest::Approx(0.6316187778) .epsilon(1e-9));
}

TEST_CASE("cumulative integrals") {
  const auto rect = PulseShape::rectangular(1.0);
  CHECK(rect.cumulative(1.0) == doctest::Approx(1.0));
  CHECK(rect.cumulative(5.0) == doctest::Approx(1.0));

  const auto rising = PulseShape::rising_exp(1.0);
  CHECK(rising.cumulative(0.0) == doctest::Approx(2.0));

  // quadrature oracle for the Gaussian total integral
  const auto gauss = PulseShape::gaussian(1.0);
  const double oracle = oracles::integrate([&](double t) { return gauss.amplitude(t); },
                                           gauss.support_lo(), gauss.support_hi());
  CHECK(gauss.cumulative(1e3) == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(gauss.cumulative(1e3) == doctest::Approx(2.2390302698).epsilon(1e-9));

  SUBCASE("cumulative matches quadrature at interior times") {
    for (const auto& s : builtins(0.7, 0.3)) {
      for (double t : {0.31, 0.6, 1.4}) {
        const double q = oracles::integrate_piecewise(
            [&](double x) { return s.amplitude(x); }, s.support_lo(), t, s.breakpoints(), 1e-13);
        CHECK(s.cumulative(t) == doctest::Approx(q).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("scale-invariant F") {
  CHECK(PulseShape::rectangular(1.0).scale_invariant_F(1.0) == doctest::Approx(1.0));
  CHECK(PulseShape::rectangular(1.0).scale_invariant_F(3.0) == doctest::Approx(1.0));
  CHECK(PulseShape::rising_exp(1.0).scale_invariant_F(0.0) == doctest::Approx(2.0));

  for (const char* name : {"rectangular", "rising-exp", "decaying-exp", "symmetric-exp",
                           "gaussian"}) {
    const auto a = PulseShape::by_name(name, 1.0);
    const auto b = PulseShape::by_name(name, 7.3);
    for (double x : {-1.5, -0.2, 0.0, 0.4, 1.0, 2.5})
      CHECK(a.scale_invariant_F(x) == doctest::Approx(b.scale_invariant_F(x)).epsilon(1e-10));
  }
}

TEST_CASE("square normalization over random durations and arrivals") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> Tdist(0.05, 20.0), adist(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double T = Tdist(rng), a = adist(rng);
    for (const auto& s : builtins(T, a)) {
      const double mass = oracles::integrate_piecewise(
          [&](double t) { const double v = s.amplitude(t); return v * v; }, s.support_lo(),
          s.support_hi(), s.breakpoints(), 1e-13);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("t_sigma matches the moment integrals") {
  for (const auto& s : builtins(1.7, -0.4)) {
    auto xi2 = [&](double t) { const double v = s.amplitude(t); return v * v; };
    const double m1 = oracles::integrate_piecewise(
        [&](double t) { return t * xi2(t); }, s.support_lo(), s.support_hi(), s.breakpoints());
    const double m2 = oracles::integrate_piecewise(
        [&](double t) { return t * t * xi2(t); }, s.support_lo(), s.support_hi(),
        s.breakpoints());
    const double sigma = std::sqrt(m2 - m1 * m1);
    CHECK(s.t_sigma() == doctest::Approx(sigma).epsilon(1e-6));
  }
  CHECK(PulseShape::rectangular(1.0).t_sigma() == doctest::Approx(1.0 / std::sqrt(12.0)));
  CHECK(PulseShape::symmetric_exp(2.0).t_sigma() == doctest::Approx(2.0 / std::sqrt(2.0)));
}

TEST_CASE("cumulative_sq reaches one and is monotone") {
  for (const auto& s : builtins(0.9, 1.2)) {
    double prev = -1.0;
    for (int i = 0; i <= 40; ++i) {
      const double t = s.support_lo() + (s.support_hi() - s.support_lo()) * i / 40.0;
      const double v = s.cumulative_sq(t);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
    CHECK(s.cumulative_sq(s.support_hi()) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("sampled shapes") {
  // Gaussian samples with a deliberately wrong normalization
  const int n = 2048;
  std::vector<double> ts(n), vs(n);
  for (int i = 0; i < n; ++i) {
    ts[i] = -8.0 + 16.0 * i / (n - 1);
    vs[i] = 3.7 * std::exp(-ts[i] * ts[i] / 4.0);
  }
  const auto s = PulseShape::sampled(ts, vs);
  const double mass = oracles::integrate([&](double t) { const double v = s.amplitude(t);
                                                         return v * v; }, -8.0, 8.0, 1e-13);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(s.t_sigma() == doctest::Approx(1.0).epsilon(1e-3));

  CHECK_THROWS_AS((void)s.amplitude(9.0), std::out_of_range);
  CHECK(s.cumulative(100.0) == doctest::Approx(s.cumulative(8.0)));

  SUBCASE("rejects malformed grids") {
    std::vector<double> bad = ts;
    bad[100] = bad[99];  // not strictly increasing
    CHECK_THROWS_AS(PulseShape::sampled(bad, vs), std::invalid_argument);
    bad = ts;
    bad[100] += 1e-4;  // non-uniform
    CHECK_THROWS_AS(PulseShape::sampled(bad, vs), std::invalid_argument);
    CHECK_THROWS_AS(PulseShape::sampled({0.0, 1.0}, {1.0, 1.0}), std::invalid_argument);
  }
}

TEST_CASE("CSV ingestion") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "pulseqfi_test_shape.csv";
  {
    std::ofstream out(path);
    out.precision(17);
    out << "time,amplitude\n";
    const int n = 1500;
    for (int i = 0; i < n; ++i) {
      const double t = -6.0 + 12.0 * i / (n - 1);
      out << t << "," << std::exp(-t * t / 4.0) << "\n";
    }
  }
  const auto s = PulseShape::from_csv(path.string());
  CHECK(s.kind() == ShapeKind::Sampled);
  const auto ref = PulseShape::gaussian(1.0);
  for (double t : {-1.0, 0.0, 0.5, 2.0})
    CHECK(s.amplitude(t) == doctest::Approx(ref.amplitude(t)).epsilon(1e-4));
  fs::remove(path);

  CHECK_THROWS(PulseShape::from_csv("/nonexistent/shape.csv"));
}

TEST_CASE("invalid construction") {
  CHECK_THROWS_AS(PulseShape::gaussian(0.0), std::invalid_argument);
  CHECK_THROWS_AS(PulseShape::by_name("triangular", 1.0), std::invalid_argument);
}
