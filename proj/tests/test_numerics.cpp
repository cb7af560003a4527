#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "boltzmap/numerics.hpp"

using namespace boltzmap;

TEST_CASE("softplus matches naive form and saturates") {
  for (double x : {-5.0, -0.3, 0.0, 0.7, 8.0}) {
    CHECK(softplus(x) == doctest::Approx(std::log(1.0 + std::exp(x))).epsilon(1e-14));
  }
  CHECK(softplus(800.0) == doctest::Approx(800.0));
  CHECK(softplus(-800.0) == doctest::Approx(0.0).epsilon(1e-300));
}

TEST_CASE("log_erfc agrees with erfc and continues into the deep tail") {
  for (double x : {-10.0, -1.0, 0.0, 2.0, 10.0, 20.0, 24.9}) {
    CHECK(log_erfc(x) == doctest::Approx(std::log(std::erfc(x))).epsilon(1e-12));
  }
  // continuity across the asymptotic switch at 25 (slope there is ~ -2x)
  CHECK(std::abs(log_erfc(25.0 + 1e-9) - log_erfc(25.0 - 1e-9)) < 1e-6);
  CHECK(std::abs(log_erfc(24.999) - log_erfc(25.001) - 0.002 * 2.0 * 25.0) < 1e-4);
  // strictly decreasing far beyond erfc underflow
  CHECK(log_erfc(40.0) < log_erfc(30.0));
  CHECK(std::isfinite(log_erfc(1e4)));
}

TEST_CASE("logsumexp is shift invariant") {
  std::vector<double> xs = {-1.0, 0.5, 2.0, -30.0};
  const double base = logsumexp(xs);
  for (auto& x : xs) x += 1000.0;
  CHECK(logsumexp(xs) == doctest::Approx(base + 1000.0).epsilon(1e-14));
}

TEST_CASE("pairwise summation matches exact sums") {
  PairwiseSum acc;
  for (int i = 1; i <= 1000; ++i) acc.add(static_cast<double>(i));
  CHECK(acc.total() == 500500.0);

  PairwiseSum alt;
  long double ref = 0.0L;
  double x = 0.1;
  for (int i = 0; i < 12345; ++i) {
    const double v = (i % 2 ? -x : x) * (1.0 + 1e-4 * i);
    alt.add(v);
    ref += v;
  }
  CHECK(alt.total() == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
}

TEST_CASE("chi-square tail matches reference values") {
  // scipy.stats.chi2.sf
  CHECK(chi_square_tail(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(chi_square_tail(10.0, 5) == doctest::Approx(0.0752352461465122).epsilon(1e-10));
  CHECK(chi_square_tail(100.0, 80) == doctest::Approx(0.064570368921133).epsilon(1e-10));
  CHECK(chi_square_tail(1023.0, 1023) == doctest::Approx(0.494120089867273).epsilon(1e-10));
  CHECK(chi_square_tail(2.5, 4) == doctest::Approx(0.644635792935428).epsilon(1e-10));
  CHECK(chi_square_tail(0.0, 7) == 1.0);
}

TEST_CASE("line fit recovers exact lines") {
  std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double xi : x) y.push_back(-0.7 * xi + 2.0);
  const auto fit = fit_line(x, y);
  CHECK(fit.slope == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("slope through origin") {
  std::vector<double> ref = {1.0, -2.0, 0.5};
  std::vector<double> a = {2.0, -4.0, 1.0};
  CHECK(slope_through_origin(a, ref) == doctest::Approx(2.0).epsilon(1e-14));
  std::vector<double> zeros = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS((void)slope_through_origin(a, zeros), std::invalid_argument);
}

TEST_CASE("median and scaled MAD") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  std::vector<double> v = {1.0, 2.0, 3.0, 4.0, 100.0};
  CHECK(scaled_mad(v, median(v)) == doctest::Approx(1.4826).epsilon(1e-12));
}
