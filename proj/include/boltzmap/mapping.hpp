#pragma once

#include <Eigen/Core>
#include <vector>

#include "boltzmap/interaction_model.hpp"
#include "boltzmap/rbm_model.hpp"

namespace boltzmap {

/// Interaction coefficient of the visible subset induced by the hidden
/// layer: inclusion-exclusion of the CGF over all nonempty sub-subsets,
/// summed over hidden units. Order-1 terms include the visible bias.
double interaction_term(const RbmModel& model, const Subset& subset);

/// Same, without the visible bias contribution at order 1 (the hidden-layer
/// part only; used for strength-vs-order comparisons).
double interaction_term_weights_only(const RbmModel& model, const Subset& subset);

/// Leading small-weight approximation: sum_mu kappa^(s)_mu prod_j w_{k_j,mu}.
double small_w_interaction(const RbmModel& model, const Subset& subset);

struct ExpandOptions {
  int max_order = 2;
  std::vector<int> pool;     // visible indices; empty means all
  double budget = 1e9;       // K-evaluation limit
  bool force = false;        // ignore the budget
  int n_threads = 1;
  double drop_tol = 0.0;     // omit |I| <= drop_tol
};

/// All interaction terms of order <= max_order over the pool. Deterministic
/// content regardless of n_threads. Throws BudgetError with a cost report
/// when the K-evaluation estimate exceeds the budget (unless forced).
InteractionModel expand(const RbmModel& model, const ExpandOptions& options);

/// Estimated number of K evaluations for an expand call.
double expand_cost(int pool_size, int max_order, int n_hidden);

/// Exponential-kind reparameterization u = e^W - 1, lambda_tilde = e^{-c},
/// under which interactions are sums of products over hidden units.
struct ExpParams {
  Eigen::MatrixXd u;             // N x M
  Eigen::VectorXd lambda_tilde;  // M
};
ExpParams exp_params(const RbmModel& model);

/// Embeds a pairwise model (symmetric couplings J with zero diagonal, fields
/// h) into a Linear-activation RBM. With rank = N-1 (the default) and a
/// non-degenerate minimum eigenvalue the pairwise terms are reproduced
/// exactly; smaller ranks give the best Frobenius approximation of the
/// shifted coupling matrix (truncated spectral decomposition). Fields are
/// reproduced exactly in all cases.
RbmModel linear_embed(const Eigen::MatrixXd& couplings,
                      const Eigen::VectorXd& fields, int rank = -1);

}  // namespace boltzmap
