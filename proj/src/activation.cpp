#include "boltzmap/activation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "boltzmap/errors.hpp"
#include "boltzmap/numerics.hpp"

namespace boltzmap {

namespace {

constexpr double kExpArgMax = 700.0;  // exp() overflows near 709.78

// Hazard (inverse Mills) ratio of the standard normal: phi(x) / (1 - Phi(x)),
// written via erfc for stability in both tails.
double normal_hazard(double x) {
  // sqrt(2/pi) * exp(-x^2/2) / erfc(x/sqrt(2))
  const double log_num = -0.5 * x * x;
  const double log_den = log_erfc(x * std::numbers::sqrt2 / 2.0);
  return std::sqrt(2.0 / std::numbers::pi) * std::exp(log_num - log_den);
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

std::string to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::Linear: return "linear";
    case ActivationKind::Relu: return "relu";
    case ActivationKind::Step: return "step";
    case ActivationKind::Exponential: return "exp";
  }
  throw std::invalid_argument("unknown activation kind");
}

ActivationKind activation_from_string(std::string_view name) {
  if (name == "linear") return ActivationKind::Linear;
  if (name == "relu") return ActivationKind::Relu;
  if (name == "step") return ActivationKind::Step;
  if (name == "exp") return ActivationKind::Exponential;
  throw DataError("unknown activation name: " + std::string(name));
}

double cgf(ActivationKind kind, double bias, double q) {
  switch (kind) {
    case ActivationKind::Linear:
      return 0.5 * q * q - q * bias;
    case ActivationKind::Relu:
      // q^2/2 - q c + log erfc((c-q)/sqrt2) - log erfc(c/sqrt2)
      return 0.5 * q * q - q * bias +
             log_erfc((bias - q) * std::numbers::sqrt2 / 2.0) -
             log_erfc(bias * std::numbers::sqrt2 / 2.0);
    case ActivationKind::Step:
      return softplus(q - bias) - softplus(-bias);
    case ActivationKind::Exponential: {
      if (q - bias > kExpArgMax || -bias > kExpArgMax) {
        throw NumericError("exponential cgf overflow: q=" + std::to_string(q) +
                           " c=" + std::to_string(bias));
      }
      if (q > 0.5 * kExpArgMax) return std::exp(q - bias) - std::exp(-bias);
      return std::exp(-bias) * std::expm1(q);
    }
  }
  throw std::invalid_argument("unknown activation kind");
}

namespace {

// Central difference of order n with Richardson extrapolation; used only for
// cumulants beyond the closed forms (diagnostic orders).
double cumulant_finite_difference(ActivationKind kind, double bias, int n) {
  auto stencil = [&](double h) {
    // n-th forward difference centered at 0: sum_j (-1)^j C(n,j) K((n/2-j)h)
    double sum = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= n; ++j) {
      const double x = (0.5 * n - j) * h;
      sum += ((j % 2) ? -binom : binom) * cgf(kind, bias, x);
      binom = binom * (n - j) / (j + 1.0);
    }
    return sum / std::pow(h, n);
  };
  const double h = 0.05;
  const double coarse = stencil(h);
  const double fine = stencil(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;  // cancels the O(h^2) error term
}

}  // namespace

double cumulant(ActivationKind kind, double bias, int order) {
  if (order < 1) throw std::invalid_argument("cumulant order must be >= 1");
  switch (kind) {
    case ActivationKind::Linear:
      if (order == 1) return -bias;
      if (order == 2) return 1.0;
      return 0.0;
    case ActivationKind::Exponential:
      if (-bias > kExpArgMax) throw NumericError("exponential cumulant overflow");
      return std::exp(-bias);
    case ActivationKind::Step: {
      const double p = sigmoid(-bias);
      if (order == 1) return p;
      if (order == 2) return p * (1.0 - p);
      break;
    }
    case ActivationKind::Relu: {
      const double h = normal_hazard(bias);
      if (order == 1) return -bias + h;
      if (order == 2) return 1.0 + h * (bias - h);
      break;
    }
  }
  return cumulant_finite_difference(kind, bias, order);
}

double conditional_mean(ActivationKind kind, double bias, double input) {
  const double m = input - bias;
  switch (kind) {
    case ActivationKind::Linear:
      return m;
    case ActivationKind::Relu:
      return m + normal_hazard(-m);
    case ActivationKind::Step:
      return sigmoid(m);
    case ActivationKind::Exponential:
      if (m > kExpArgMax) throw NumericError("poisson mean overflow");
      return std::exp(m);
  }
  throw std::invalid_argument("unknown activation kind");
}

double conditional_mode(ActivationKind kind, double bias, double input) {
  const double m = input - bias;
  switch (kind) {
    case ActivationKind::Linear:
      return m;
    case ActivationKind::Relu:
      return std::max(0.0, m);
    case ActivationKind::Step:
      return m >= 0.0 ? 1.0 : 0.0;
    case ActivationKind::Exponential:
      if (m > kExpArgMax) throw NumericError("poisson mode overflow");
      return std::floor(std::exp(m));
  }
  throw std::invalid_argument("unknown activation kind");
}

double sample_hidden(ActivationKind kind, double bias, double input, Rng& rng) {
  const double m = input - bias;
  switch (kind) {
    case ActivationKind::Linear:
      return m + rng.normal();
    case ActivationKind::Relu:
      // z ~ N(m, 1) conditioned z >= 0  <=>  z = m + xi, xi >= -m
      return m + sample_normal_lower_bounded(rng, -m);
    case ActivationKind::Step:
      return rng.bernoulli(sigmoid(m)) ? 1.0 : 0.0;
    case ActivationKind::Exponential: {
      if (m > 34.5) throw NumericError("poisson rate overflow in sampler");
      return static_cast<double>(sample_poisson(rng, std::exp(m)));
    }
  }
  throw std::invalid_argument("unknown activation kind");
}

}  // namespace boltzmap
