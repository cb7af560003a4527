#pragma once

#include <span>
#include <vector>

namespace boltzmap {

/// log(1 + e^x) without overflow.
double softplus(double x);

/// log(erfc(x)), accurate over the full range including x >> 0 where
/// erfc underflows (asymptotic continuation).
double log_erfc(double x);

/// Max-shifted log(sum(exp(x))).
double logsumexp(std::span<const double> xs);

/// Streaming pairwise (tree) summation: O(log n) partial sums, error growth
/// O(log n) instead of O(n) for sequential accumulation.
class PairwiseSum {
 public:
  void add(double x);
  double total() const;

 private:
  std::vector<double> partial_;
  std::size_t count_ = 0;
};

/// Upper tail P(X > x) of a chi-square distribution with dof degrees of
/// freedom (regularized incomplete gamma Q(dof/2, x/2)).
double chi_square_tail(double x, double dof);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope*x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least-squares slope of a = slope * ref through the origin.
double slope_through_origin(std::span<const double> a,
                            std::span<const double> ref);

double median(std::vector<double> values);

/// Median absolute deviation scaled by 1.4826 (normal consistency).
double scaled_mad(std::span<const double> values, double center);

}  // namespace boltzmap
