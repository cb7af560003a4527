#include "boltzmap/mapping.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "boltzmap/errors.hpp"
#include "boltzmap/numerics.hpp"

namespace boltzmap {

namespace {

void check_subset(const RbmModel& model, const Subset& subset) {
  if (subset.empty() || subset.size() > static_cast<std::size_t>(model.n_visible())) {
    throw std::invalid_argument("subset size must be in [1, N]");
  }
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] < 0 || subset[i] >= model.n_visible()) {
      throw std::invalid_argument("subset index out of range");
    }
    if (i > 0 && subset[i] <= subset[i - 1]) {
      throw std::invalid_argument("subset must be strictly increasing");
    }
  }
}

// Inclusion-exclusion over nonempty sub-subsets of `subset` for one hidden
// unit. Sub-subset sums are generated in Gray-code order (one add or
// subtract per step); the signed K values go through pairwise summation to
// limit cancellation error.
double hidden_unit_contribution(const RbmModel& model, const Subset& subset,
                                Eigen::Index mu) {
  const int s = static_cast<int>(subset.size());
  const std::uint32_t count = 1u << s;
  const double bias = model.c(mu);
  PairwiseSum acc;
  double q = 0.0;
  for (std::uint32_t i = 1; i < count; ++i) {
    const int bit = std::countr_zero(i);
    const std::uint32_t gray = i ^ (i >> 1);
    const double w = model.W(subset[static_cast<std::size_t>(bit)], mu);
    q += ((gray >> bit) & 1u) ? w : -w;
    const int t = std::popcount(gray);
    const double k = cgf(model.activation, bias, q);
    acc.add(((s - t) & 1) ? -k : k);
  }
  return acc.total();
}

}  // namespace

double interaction_term_weights_only(const RbmModel& model, const Subset& subset) {
  check_subset(model, subset);
  PairwiseSum total;
  for (Eigen::Index mu = 0; mu < model.n_hidden(); ++mu) {
    total.add(hidden_unit_contribution(model, subset, mu));
  }
  return total.total();
}

double interaction_term(const RbmModel& model, const Subset& subset) {
  double value = interaction_term_weights_only(model, subset);
  if (subset.size() == 1) value += model.b(subset[0]);
  return value;
}

double small_w_interaction(const RbmModel& model, const Subset& subset) {
  check_subset(model, subset);
  const int s = static_cast<int>(subset.size());
  PairwiseSum total;
  for (Eigen::Index mu = 0; mu < model.n_hidden(); ++mu) {
    double prod = cumulant(model.activation, model.c(mu), s);
    for (int k : subset) prod *= model.W(k, mu);
    total.add(prod);
  }
  return total.total();
}

double expand_cost(int pool_size, int max_order, int n_hidden) {
  double cost = 0.0;
  double choose = 1.0;
  for (int s = 1; s <= max_order; ++s) {
    choose = choose * (pool_size - s + 1) / s;  // C(pool_size, s)
    cost += choose * (std::pow(2.0, s) - 1.0) * n_hidden;
  }
  return cost;
}

InteractionModel expand(const RbmModel& model, const ExpandOptions& options) {
  model.validate();
  std::vector<int> pool = options.pool;
  if (pool.empty()) {
    pool.resize(static_cast<std::size_t>(model.n_visible()));
    std::iota(pool.begin(), pool.end(), 0);
  }
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool[i] < 0 || pool[i] >= model.n_visible()) {
      throw std::invalid_argument("pool index out of range");
    }
    if (i > 0 && pool[i] <= pool[i - 1]) {
      throw std::invalid_argument("pool must be strictly increasing");
    }
  }
  const int max_order = std::min<int>(options.max_order, static_cast<int>(pool.size()));
  if (max_order < 1) throw std::invalid_argument("max_order must be >= 1");

  const double cost =
      expand_cost(static_cast<int>(pool.size()), max_order, static_cast<int>(model.n_hidden()));
  if (!options.force && cost > options.budget) {
    throw BudgetError("expand requires ~" + std::to_string(cost) +
                      " K evaluations, budget is " + std::to_string(options.budget) +
                      " (pool=" + std::to_string(pool.size()) +
                      ", max_order=" + std::to_string(max_order) +
                      ", M=" + std::to_string(model.n_hidden()) + "); use force to override");
  }

  // All subsets of the pool with size <= max_order, in (size, lex) order.
  std::vector<Subset> subsets;
  Subset current;
  for (int s = 1; s <= max_order; ++s) {
    current.assign(static_cast<std::size_t>(s), 0);
    auto emit = [&](auto&& self, int depth, int start) -> void {
      if (depth == s) {
        subsets.push_back(current);
        return;
      }
      for (int i = start; i < static_cast<int>(pool.size()); ++i) {
        current[static_cast<std::size_t>(depth)] = pool[static_cast<std::size_t>(i)];
        self(self, depth + 1, i + 1);
      }
    };
    emit(emit, 0, 0);
  }

  std::vector<double> values(subsets.size());
  const int n_threads = std::max(1, options.n_threads);
  if (n_threads == 1 || subsets.size() < 64) {
    for (std::size_t j = 0; j < subsets.size(); ++j) {
      values[j] = interaction_term(model, subsets[j]);
    }
  } else {
    // per-subset results land at their rank: identical output for any T
    std::vector<std::thread> workers;
    std::size_t chunk = (subsets.size() + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(subsets.size(), lo + chunk);
      if (lo >= hi) break;
      workers.emplace_back([&, lo, hi] {
        for (std::size_t j = lo; j < hi; ++j) {
          values[j] = interaction_term(model, subsets[j]);
        }
      });
    }
    for (auto& w : workers) w.join();
  }

  InteractionModel result;
  result.n_visible = static_cast<int>(model.n_visible());
  for (std::size_t j = 0; j < subsets.size(); ++j) {
    if (std::abs(values[j]) <= options.drop_tol) continue;
    result.terms.emplace(std::move(subsets[j]), values[j]);
  }
  return result;
}

ExpParams exp_params(const RbmModel& model) {
  if (model.activation != ActivationKind::Exponential) {
    throw std::invalid_argument("exp_params requires the Exponential kind");
  }
  ExpParams params;
  params.u = model.W.array().exp() - 1.0;
  params.lambda_tilde = (-model.c.array()).exp();
  return params;
}

RbmModel linear_embed(const Eigen::MatrixXd& couplings,
                      const Eigen::VectorXd& fields, int rank) {
  const Eigen::Index n = couplings.rows();
  if (n < 2 || couplings.cols() != n) {
    throw std::invalid_argument("couplings must be square, N >= 2");
  }
  if (fields.size() != n) throw std::invalid_argument("fields length mismatch");
  const double scale = std::max(1.0, couplings.cwiseAbs().maxCoeff());
  if (!couplings.isApprox(couplings.transpose(), 1e-12)) {
    throw std::invalid_argument("couplings must be symmetric");
  }
  if (couplings.diagonal().cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("couplings must have zero diagonal");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(couplings);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigendecomposition did not converge");
  }
  const Eigen::VectorXd& eval = solver.eigenvalues();  // ascending
  const double shift = -eval(0);                       // -lambda_min >= 0 shift
  const int target = rank < 0 ? static_cast<int>(n) - 1 : rank;
  if (target < 1 || target > static_cast<int>(n)) {
    throw std::invalid_argument("rank must be in [1, N]");
  }

  // Keep the largest shifted eigenvalues; degenerate-minimum directions have
  // shifted value 0 and are dropped.
  const double drop = 1e-12 * std::max(1.0, std::abs(eval(n - 1)) + shift);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = n - 1; j >= 0 && static_cast<int>(keep.size()) < target; --j) {
    if (eval(j) + shift > drop) keep.push_back(j);
  }

  RbmModel model;
  model.activation = ActivationKind::Linear;
  const Eigen::Index m = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(keep.size()));
  model.W = Eigen::MatrixXd::Zero(n, m);
  for (std::size_t col = 0; col < keep.size(); ++col) {
    const Eigen::Index j = keep[col];
    model.W.col(static_cast<Eigen::Index>(col)) =
        solver.eigenvectors().col(j) * std::sqrt(eval(j) + shift);
  }
  model.c = Eigen::VectorXd::Zero(m);
  // W W^T acts on v_i^2 = v_i: fold half the diagonal into the fields.
  model.b = fields - 0.5 * model.W.rowwise().squaredNorm();
  return model;
}

}  // namespace boltzmap
