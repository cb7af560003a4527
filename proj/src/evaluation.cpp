#include "boltzmap/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

#include "boltzmap/errors.hpp"
#include "boltzmap/mapping.hpp"
#include "boltzmap/numerics.hpp"
#include "boltzmap/rng.hpp"
#include "boltzmap/sampling.hpp"

namespace boltzmap {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

double pseudo_likelihood(const RbmModel& model, const Eigen::MatrixXd& data) {
  if (data.rows() < 1 || data.cols() != model.n_visible()) {
    throw std::invalid_argument("data shape mismatch");
  }
  double total = 0.0;
  Eigen::VectorXd v(model.n_visible());
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    v = data.row(r).transpose();
    VisibleStateCache cache(model, v);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double delta = marginal_site_delta(model, cache, v, static_cast<int>(i));
      // log P(v_i | v_-i) = v_i delta - softplus(delta)
      total += v(i) * delta - softplus(delta);
    }
  }
  return total / static_cast<double>(data.rows());
}

std::vector<int> mad_filter(const std::vector<double>& values, double n_mads) {
  if (values.empty()) throw std::invalid_argument("mad_filter of empty range");
  const double med = median(values);
  const double mad = scaled_mad(values, med);
  std::vector<int> kept;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::abs(values[i] - med) <= n_mads * mad) {
      kept.push_back(static_cast<int>(i));
    }
  }
  return kept;
}

AisEstimate ais_log_partition(const RbmModel& model, const AisConfig& config) {
  model.validate();
  if (config.n_runs < 2) throw std::invalid_argument("AIS needs n_runs >= 2");
  const Eigen::Index n = model.n_visible();

  Eigen::VectorXd b0 = config.base_biases;
  if (b0.size() == 0) b0 = Eigen::VectorXd::Zero(n);
  if (b0.size() != n) throw std::invalid_argument("base biases length mismatch");

  std::vector<double> grid = config.schedule;
  if (grid.empty()) {
    if (config.n_temperatures < 2) {
      throw std::invalid_argument("AIS needs at least 2 temperatures");
    }
    grid.resize(static_cast<std::size_t>(config.n_temperatures));
    for (std::size_t t = 0; t < grid.size(); ++t) {
      grid[t] = static_cast<double>(t) / static_cast<double>(grid.size() - 1);
    }
  }
  if (grid.front() != 0.0 || grid.back() != 1.0 ||
      !std::is_sorted(grid.begin(), grid.end()) ||
      std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
    throw std::invalid_argument("beta grid must increase strictly from 0 to 1");
  }

  double log_z0 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) log_z0 += softplus(b0(i));

  AisEstimate estimate;
  estimate.run_estimates.resize(config.n_runs);
  auto execute_run = [&](int run) {
    Rng rng = Rng::stream(config.seed, static_cast<std::uint64_t>(run));
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      v(i) = rng.bernoulli(sigmoid(b0(i))) ? 1.0 : 0.0;
    }
    VisibleStateCache cache(model, v);
    // target(v) - base(v), maintained alongside the cache
    auto exponent_gap = [&] {
      return model.b.dot(v) + hidden_cgf_sum(model, cache.hidden_input()) -
             b0.dot(v);
    };
    double gap = exponent_gap();
    double log_w = 0.0;
    for (std::size_t t = 1; t < grid.size(); ++t) {
      const double beta = grid[t];
      log_w += (beta - grid[t - 1]) * gap;
      if (t + 1 == grid.size()) break;  // no kernel needed after the last increment
      for (Eigen::Index i = 0; i < n; ++i) {
        const double delta = (1.0 - beta) * b0(i) +
                             beta * marginal_site_delta(model, cache, v,
                                                        static_cast<int>(i));
        cache.apply(model, v, static_cast<int>(i),
                    rng.bernoulli(sigmoid(delta)) ? 1.0 : 0.0);
      }
      gap = exponent_gap();
    }
    estimate.run_estimates(run) = log_z0 + log_w;
  };
  // each run owns a seeded stream and writes its own slot: the estimate is
  // identical for any thread count
  const int n_threads = std::max(1, std::min(config.n_threads, config.n_runs));
  if (n_threads == 1) {
    for (int run = 0; run < config.n_runs; ++run) execute_run(run);
  } else {
    std::vector<std::thread> workers;
    const int chunk = (config.n_runs + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const int lo = t * chunk;
      const int hi = std::min(config.n_runs, lo + chunk);
      if (lo >= hi) break;
      workers.emplace_back([&, lo, hi] {
        for (int run = lo; run < hi; ++run) execute_run(run);
      });
    }
    for (auto& w : workers) w.join();
  }

  std::vector<double> runs(estimate.run_estimates.data(),
                           estimate.run_estimates.data() + config.n_runs);
  const std::vector<int> kept = mad_filter(runs, 3.0);
  estimate.n_outliers_removed = config.n_runs - static_cast<int>(kept.size());
  if (kept.size() < 2) {
    throw NumericError("fewer than 2 AIS runs survive outlier removal");
  }
  double mean = 0.0;
  for (int i : kept) mean += runs[static_cast<std::size_t>(i)];
  mean /= static_cast<double>(kept.size());
  double var = 0.0;
  for (int i : kept) {
    const double d = runs[static_cast<std::size_t>(i)] - mean;
    var += d * d;
  }
  var /= static_cast<double>(kept.size() - 1);
  estimate.log_z = mean;
  estimate.std_error = std::sqrt(var / static_cast<double>(kept.size()));
  estimate.lower = mean - 3.0 * estimate.std_error;
  estimate.upper = mean + 3.0 * estimate.std_error;
  return estimate;
}

OrderStats comparison_stats(const InteractionModel& a, const InteractionModel& b,
                            int order) {
  if (a.n_visible != b.n_visible) {
    throw std::invalid_argument("models must share n_visible");
  }
  std::set<Subset, SubsetOrder> subsets;
  for (const auto& [subset, value] : a.terms) {
    if (static_cast<int>(subset.size()) == order) subsets.insert(subset);
  }
  for (const auto& [subset, value] : b.terms) {
    if (static_cast<int>(subset.size()) == order) subsets.insert(subset);
  }
  if (subsets.empty()) {
    throw std::invalid_argument("no terms of order " + std::to_string(order));
  }
  std::vector<double> va, vb;
  va.reserve(subsets.size());
  vb.reserve(subsets.size());
  for (const auto& subset : subsets) {
    va.push_back(a.coefficient(subset));
    vb.push_back(b.coefficient(subset));
  }
  double sum_b2 = 0.0;
  for (double x : vb) sum_b2 += x * x;
  if (sum_b2 == 0.0) {
    throw std::invalid_argument("reference model has zero norm at order " +
                                std::to_string(order));
  }
  OrderStats stats;
  stats.n_terms = static_cast<long>(subsets.size());
  stats.slope = slope_through_origin(va, vb);
  double err = 0.0, na = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = va[i] - vb[i];
    err += d * d;
    na += va[i] * va[i];
  }
  stats.nrmse = std::sqrt(err / sum_b2);
  stats.rms_a = std::sqrt(na / static_cast<double>(va.size()));
  stats.rms_b = std::sqrt(sum_b2 / static_cast<double>(vb.size()));
  return stats;
}

double rms_weight(const RbmModel& model) {
  return std::sqrt(model.W.array().square().sum() /
                   static_cast<double>(model.W.size()));
}

std::vector<StrengthPoint> strength_vs_order(const RbmModel& model, int max_order,
                                             long max_subsets_per_order,
                                             std::uint64_t seed) {
  const int n = static_cast<int>(model.n_visible());
  if (max_order < 1 || max_order > n) {
    throw std::invalid_argument("max_order out of range");
  }
  if (max_subsets_per_order < 1) {
    throw std::invalid_argument("subset budget must be positive");
  }
  std::vector<StrengthPoint> points;
  Rng rng = Rng::stream(seed, 0x5737u);
  for (int s = 1; s <= max_order; ++s) {
    double n_subsets = 1.0;
    for (int j = 0; j < s; ++j) n_subsets = n_subsets * (n - j) / (j + 1);

    double sum_sq = 0.0;
    long count = 0;
    if (n_subsets <= static_cast<double>(max_subsets_per_order)) {
      Subset subset(static_cast<std::size_t>(s));
      auto walk = [&](auto&& self, int depth, int start) -> void {
        if (depth == s) {
          const double x = interaction_term_weights_only(model, subset);
          sum_sq += x * x;
          ++count;
          return;
        }
        for (int i = start; i < n; ++i) {
          subset[static_cast<std::size_t>(depth)] = i;
          self(self, depth + 1, i + 1);
        }
      };
      walk(walk, 0, 0);
    } else {
      std::set<Subset> seen;
      while (static_cast<long>(seen.size()) < max_subsets_per_order) {
        Subset subset;
        std::set<int> picks;
        while (static_cast<int>(picks.size()) < s) {
          picks.insert(static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n)));
        }
        subset.assign(picks.begin(), picks.end());
        if (!seen.insert(subset).second) continue;
        const double x = interaction_term_weights_only(model, subset);
        sum_sq += x * x;
        ++count;
      }
    }
    points.push_back({s, std::sqrt(sum_sq / static_cast<double>(count)), count});
  }
  return points;
}

}  // namespace boltzmap
