#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "boltzmap/rbm_model.hpp"
#include "boltzmap/rng.hpp"

namespace boltzmap {

/// One blocked-Gibbs chain. Each chain owns its RNG stream, derived from a
/// master seed and the chain id, so parallel chains are reproducible.
struct ChainState {
  Eigen::VectorXd v;  // visibles in {0,1}
  Eigen::VectorXd z;  // hidden values, support depends on the activation
  Rng rng;
  long sweeps_done = 0;
};

/// Fresh chain with v ~ Bernoulli(1/2) and z = 0.
ChainState make_chain(const RbmModel& model, std::uint64_t master_seed,
                      std::uint64_t chain_id);

/// One full sweep: z ~ P(z|v) per unit, then v ~ P(v|z) with
/// P(v_i = 1 | z) = sigmoid(b_i + (W z)_i).
void gibbs_sweep(const RbmModel& model, ChainState& state);

/// Maintained hidden input q = W^T v for O(M) single-site conditionals under
/// the hidden-marginalized distribution. Incremental updates are refreshed
/// from scratch every 10^4 flips to bound drift.
class VisibleStateCache {
 public:
  VisibleStateCache(const RbmModel& model, const Eigen::VectorXd& v);

  const Eigen::VectorXd& hidden_input() const { return q_; }

  /// Sets v(site) = value and updates the cache.
  void apply(const RbmModel& model, Eigen::VectorXd& v, int site, double value);

 private:
  Eigen::VectorXd q_;
  long updates_ = 0;
};

/// Log-odds Delta_i of site i under the marginal:
/// P(v_i = 1 | v_-i) = sigmoid(Delta_i), with
/// Delta_i = b_i + sum_mu [K(q^{i<-1}_mu) - K(q^{i<-0}_mu)].
double marginal_site_delta(const RbmModel& model, const VisibleStateCache& cache,
                           const Eigen::VectorXd& v, int site);

/// P(v_i = 1 | v_-i) without a maintained cache (O(N M)).
double visible_site_conditional(const RbmModel& model, const Eigen::VectorXd& v,
                                int site);

/// Runs n_trials independent chains and returns, per trial, n_samples state
/// bitmasks recorded every `thin` sweeps after `burn_in` sweeps. N <= 32.
/// Chains own their streams, so the output is identical for any n_threads.
std::vector<std::vector<std::uint32_t>> sample_state_masks(
    const RbmModel& model, int n_trials, long n_samples, long burn_in,
    long thin, std::uint64_t seed, int n_threads = 1);

/// Single chain returning samples as 0/1 rows (any N).
Eigen::MatrixXd sample_rows(const RbmModel& model, long n_samples, long burn_in,
                            long thin, std::uint64_t seed,
                            std::uint64_t chain_id = 0);

}  // namespace boltzmap
