#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "boltzmap/interaction_model.hpp"
#include "boltzmap/rbm_model.hpp"

namespace boltzmap {

/// Exhaustively tabulated distribution over all 2^N visible states.
/// State index is the bitmask with bit i = v_i. Hard cap N <= 24.
struct ExactSummary {
  int n_visible = 0;
  Eigen::VectorXd log_weights;    // unnormalized log-probabilities
  double log_partition = 0.0;     // logsumexp(log_weights)
  Eigen::VectorXd probabilities;  // exp(log_weights - log_partition)
};

inline constexpr int kEnumerationCap = 24;

/// Full state table of the RBM marginal; Gray-code iteration with
/// incremental W^T v updates.
ExactSummary enumerate_states(const RbmModel& model);

/// Full state table of an interaction model via the subset zeta transform,
/// O(N 2^N).
ExactSummary enumerate_states(const InteractionModel& model);

/// Recovers interaction coefficients from the exact table by the in-place
/// subset Moebius transform of H(v) = log_weight(v) - log_weight(0).
/// Coefficients with |I| <= drop_tol are omitted.
InteractionModel moebius_invert(const ExactSummary& summary,
                                double drop_tol = 0.0);

struct FrequencyReport {
  Eigen::VectorXd exact_prob;  // per state
  Eigen::VectorXd mean_freq;   // mean over trial blocks
  Eigen::VectorXd freq_sd;     // sample sd over trial blocks
  double tv_distance = 0.0;    // pooled frequencies vs exact
  double chi_square = 0.0;     // pooled counts, bins with E < 5 merged
  double dof = 0.0;
  double p_value = 1.0;
  long n_samples = 0;
  int n_trials = 0;
};

/// Compares sampled states (as bitmasks, split into n_trials equal
/// consecutive blocks) against the exact table.
FrequencyReport compare_frequencies(const ExactSummary& summary,
                                    const std::vector<std::uint32_t>& samples,
                                    int n_trials);

/// Bitmask of a 0/1 vector (bit i = v_i); requires N <= 32.
std::uint32_t state_mask(const Eigen::VectorXd& v);
Eigen::VectorXd state_vector(std::uint32_t mask, int n_visible);

}  // namespace boltzmap
