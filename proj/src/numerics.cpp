#include "boltzmap/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/SpecialFunctions>

namespace boltzmap {

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double log_erfc(double x) {
  if (x < 25.0) return std::log(std::erfc(x));
  // log(erfc(x)) = -x^2 + log(erfcx(x)); asymptotic erfcx for large x.
  const double ix2 = 1.0 / (x * x);
  const double series =
      1.0 + ix2 * (-0.5 + ix2 * (0.75 + ix2 * (-1.875 + ix2 * 6.5625)));
  return -x * x - std::log(x * std::sqrt(std::numbers::pi)) + std::log(series);
}

double logsumexp(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("logsumexp of empty range");
  const double m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

void PairwiseSum::add(double x) {
  std::size_t c = ++count_;
  while ((c & 1u) == 0u) {
    x += partial_.back();
    partial_.pop_back();
    c >>= 1;
  }
  partial_.push_back(x);
}

double PairwiseSum::total() const {
  double s = 0.0;
  for (auto it = partial_.rbegin(); it != partial_.rend(); ++it) s += *it;
  return s;
}

double chi_square_tail(double x, double dof) {
  if (x <= 0.0) return 1.0;
  Eigen::ArrayXd a(1), v(1);
  a << 0.5 * dof;
  v << 0.5 * x;
  return Eigen::igammac(a, v)(0);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line needs two equal-length ranges, n >= 2");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double vxx = sxx - sx * sx / n;
  const double vxy = sxy - sx * sy / n;
  const double vyy = syy - sy * sy / n;
  LineFit fit;
  fit.slope = vxy / vxx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r_squared = (vyy > 0.0) ? (vxy * vxy) / (vxx * vyy) : 1.0;
  return fit;
}

double slope_through_origin(std::span<const double> a,
                            std::span<const double> ref) {
  if (a.size() != ref.size() || a.empty()) {
    throw std::invalid_argument("slope_through_origin needs equal nonempty ranges");
  }
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += a[i] * ref[i];
    den += ref[i] * ref[i];
  }
  if (den == 0.0) throw std::invalid_argument("reference has zero norm");
  return num / den;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty range");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  std::nth_element(values.begin(), values.begin() + mid - 1,
                   values.begin() + mid);
  return 0.5 * (values[mid - 1] + hi);
}

double scaled_mad(std::span<const double> values, double center) {
  std::vector<double> dev(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    dev[i] = std::abs(values[i] - center);
  }
  return 1.4826 * median(std::move(dev));
}

}  // namespace boltzmap
