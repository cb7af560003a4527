#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "boltzmap/interaction_model.hpp"
#include "boltzmap/rbm_model.hpp"

namespace boltzmap {

/// Mean over data rows of sum_i log P(v_i | v_-i) (summed over sites, not
/// averaged; see the training log convention).
double pseudo_likelihood(const RbmModel& model, const Eigen::MatrixXd& data);

struct AisConfig {
  int n_runs = 100;
  int n_temperatures = 14000;       // beta grid size including both endpoints
  std::vector<double> schedule;     // explicit beta grid; empty -> uniform
  Eigen::VectorXd base_biases;      // b0 of the independent base model; empty -> 0
  std::uint64_t seed = 0;
  int n_threads = 1;                // runs are independent; output identical for any T
};

struct AisEstimate {
  double log_z = 0.0;      // mean of surviving per-run estimates
  double std_error = 0.0;  // SE of that mean
  double lower = 0.0;      // log_z - 3 SE
  double upper = 0.0;      // log_z + 3 SE
  Eigen::VectorXd run_estimates;  // all runs, pre-filter
  int n_outliers_removed = 0;
};

/// Annealed importance sampling along p_beta(v) ~ exp[(1-beta) b0.v +
/// beta (b.v + sum_mu K((W^T v)_mu))] with a full single-site Gibbs sweep at
/// each intermediate temperature. Per-run estimates more than three scaled
/// MADs from their median are discarded before the mean and error bars.
AisEstimate ais_log_partition(const RbmModel& model, const AisConfig& config);

/// Indices of values within `n_mads` scaled MADs of the median.
std::vector<int> mad_filter(const std::vector<double>& values, double n_mads = 3.0);

struct OrderStats {
  double slope = 0.0;    // least-squares a = slope * b through the origin
  double nrmse = 0.0;    // sqrt(sum (a-b)^2 / sum b^2)
  double rms_a = 0.0;    // RMS of A's order-s coefficients
  double rms_b = 0.0;
  long n_terms = 0;      // union of subsets at that order
};

/// Compares two interaction models at one order; B is the reference.
/// Subsets present in only one model count as zero in the other.
OrderStats comparison_stats(const InteractionModel& a, const InteractionModel& b,
                            int order);

/// RMS weight sqrt(sum w^2 / (N M)).
double rms_weight(const RbmModel& model);

struct StrengthPoint {
  int order = 0;
  double rms = 0.0;      // RMS of coefficients at this order
  long n_subsets = 0;
};

/// RMS interaction strength per order (visible bias excluded from order 1).
/// Orders whose subset count exceeds max_subsets_per_order are estimated
/// from that many distinct subsets sampled uniformly.
std::vector<StrengthPoint> strength_vs_order(const RbmModel& model, int max_order,
                                             long max_subsets_per_order,
                                             std::uint64_t seed);

}  // namespace boltzmap
