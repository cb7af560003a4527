#include "boltzmap/rng.hpp"

#include <cmath>
#include <numbers>

#include "boltzmap/errors.hpp"

namespace boltzmap {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream_id) {
  // splitmix64 applied twice: once to the stream id, once to the combination.
  auto finalize = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  };
  return finalize(seed ^ finalize(stream_id + 0x632be59bd9b4e019ull));
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

namespace {

long poisson_inversion(Rng& rng, double rate) {
  const double u = rng.uniform();
  double p = std::exp(-rate);
  double cum = p;
  long k = 0;
  while (u > cum) {
    ++k;
    p *= rate / static_cast<double>(k);
    cum += p;
    if (k > 400) break;  // tail mass below 1e-100 for rate < 30
  }
  return k;
}

// Hormann (1993), "The transformed rejection method for generating Poisson
// random variables", algorithm PTRS. Exact for rate >= 10.
long poisson_ptrs(Rng& rng, double rate) {
  const double log_rate = std::log(rate);
  const double b = 0.931 + 2.53 * std::sqrt(rate);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + rate + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<long>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        k * log_rate - rate - std::lgamma(k + 1.0)) {
      return static_cast<long>(k);
    }
  }
}

}  // namespace

long sample_poisson(Rng& rng, double rate) {
  if (!(rate >= 0.0) || rate > 1e15) {
    throw NumericError("poisson rate out of range: " + std::to_string(rate));
  }
  if (rate == 0.0) return 0;
  if (rate < 30.0) return poisson_inversion(rng, rate);
  return poisson_ptrs(rng, rate);
}

double sample_normal_lower_bounded(Rng& rng, double lower) {
  if (lower < 0.75) {
    // Acceptance probability 1 - Phi(lower) >= 0.23.
    for (;;) {
      const double x = rng.normal();
      if (x >= lower) return x;
    }
  }
  // Robert (1995): shifted exponential proposal for deep tails.
  const double alpha = 0.5 * (lower + std::sqrt(lower * lower + 4.0));
  for (;;) {
    const double x = lower - std::log1p(-rng.uniform()) / alpha;
    const double d = x - alpha;
    if (rng.uniform() <= std::exp(-0.5 * d * d)) return x;
  }
}

}  // namespace boltzmap
