#pragma once

#include <Eigen/Core>
#include <string>

#include "boltzmap/activation.hpp"

namespace boltzmap {

/// Generalized RBM over binary visibles v in {0,1}^N and M hidden units.
/// Joint log-density (up to log Z): b.v + v^T W z - U(z), with U fixed by
/// `activation` and the per-unit biases c.
struct RbmModel {
  ActivationKind activation = ActivationKind::Step;
  Eigen::VectorXd b;  // visible biases, length N
  Eigen::VectorXd c;  // hidden biases, length M
  Eigen::MatrixXd W;  // N x M weights

  Eigen::Index n_visible() const { return b.size(); }
  Eigen::Index n_hidden() const { return c.size(); }

  /// Checks dimensions (N, M >= 1, W is N x M) and finiteness of all entries.
  void validate() const;
};

/// Unnormalized visible log-probability b.v + sum_mu K((W^T v)_mu); the
/// marginal is exp(.)/Z'.
double rbm_log_weight(const RbmModel& model, const Eigen::VectorXd& v);

/// Same, with the hidden input q = W^T v already computed.
double hidden_cgf_sum(const RbmModel& model, const Eigen::VectorXd& q);

/// Line-oriented text format, 17 significant digits (decimal round-trip is
/// exact):
///   boltzmap-rbm v1
///   N M activation
///   N lines of b, M lines of c, N lines of M weight entries
void save_rbm(const RbmModel& model, const std::string& path);
RbmModel load_rbm(const std::string& path);

/// Shortest decimal representation with 17 significant digits.
std::string format_g17(double x);

}  // namespace boltzmap
