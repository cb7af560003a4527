#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "boltzmap/errors.hpp"
#include "boltzmap/rng.hpp"
#include "test_util.hpp"

using namespace boltzmap;

TEST_CASE("streams are deterministic and independent") {
  Rng a = Rng::stream(42, 7);
  Rng b = Rng::stream(42, 7);
  Rng c = Rng::stream(42, 8);
  bool differs = false;
  for (int i = 0; i < 64; ++i) {
    const auto xa = a.next_u64();
    CHECK(xa == b.next_u64());
    if (xa != c.next_u64()) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("uniform and normal moments") {
  Rng rng(123);
  const long n = 200000;
  double su = 0, su2 = 0, sn = 0, sn2 = 0;
  for (long i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    su += u;
    su2 += u * u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(5e-3));
  CHECK(su2 / n == doctest::Approx(1.0 / 3.0).epsilon(5e-3));
  CHECK(sn / n == doctest::Approx(0.0).scale(1.0).epsilon(0.01));
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("poisson moments on both sampler paths") {
  for (double rate : {0.3, 4.0, 25.0, 80.0, 400.0}) {
    Rng rng(99);
    const long n = 200000;
    double s = 0, s2 = 0;
    for (long i = 0; i < n; ++i) {
      const double k = static_cast<double>(sample_poisson(rng, rate));
      REQUIRE(k >= 0);
      s += k;
      s2 += k * k;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    // 5 standard errors of the mean; variance ~ rate for Poisson
    const double se_mean = std::sqrt(rate / n);
    CHECK(std::abs(mean - rate) < 5.0 * se_mean);
    CHECK(var == doctest::Approx(rate).epsilon(0.05));
  }
  Rng rng(1);
  CHECK(sample_poisson(rng, 0.0) == 0);
  CHECK_THROWS_AS((void)sample_poisson(rng, -1.0), NumericError);
  CHECK_THROWS_AS((void)sample_poisson(rng, 1e16), NumericError);
}

TEST_CASE("lower-bounded normal matches truncated-normal moments") {
  // scipy.stats.truncnorm reference moments
  struct Case {
    double lower, mean, var;
  };
  const std::vector<Case> cases = {
      {-1.0, 0.287599970939178, 0.629686285776605},
      {0.5, 1.14107777036807, 0.268480407155878},
      {3.0, 3.28309865493044, 0.0705591867852559},
      {6.0, 6.15848260454462, 0.0239876367890453},
  };
  for (const auto& c : cases) {
    Rng rng(7);
    const long n = 400000;
    double s = 0, s2 = 0;
    for (long i = 0; i < n; ++i) {
      const double x = sample_normal_lower_bounded(rng, c.lower);
      REQUIRE(x >= c.lower);
      s += x;
      s2 += x * x;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::abs(mean - c.mean) < 5.0 * std::sqrt(c.var / n));
    CHECK(var == doctest::Approx(c.var).epsilon(0.03));
  }
}
