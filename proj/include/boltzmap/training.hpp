#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "boltzmap/dataset.hpp"
#include "boltzmap/rbm_model.hpp"
#include "boltzmap/rng.hpp"

namespace boltzmap {

/// Contrastive-divergence schedules: k = ceil(epoch/10) reconstruction
/// steps and learning rate eta0 / k at epoch `epoch` (1-based), so training
/// ends as CD-50 at epoch 500.
int cd_steps_for_epoch(int epoch);
double learning_rate_for_epoch(double eta0, int epoch);

/// Starting learning rate per activation; chosen small enough for smooth
/// convergence, configurable.
double default_eta0(ActivationKind kind);

struct TrainConfig {
  int minibatch = 100;
  int epochs = 500;
  double eta0 = 0.0;  // 0 means default_eta0(activation)
  std::uint64_t seed = 0;
  int eval_subset = 100;  // pseudo-likelihood probe size per update
  bool clip_updates = true;
};

/// Data-driven initialization: b = logit of per-feature means (pseudo-count
/// 1e-6), |w| = sqrt(0.1/N) with random signs, c = W^T <v> so hidden inputs
/// are centered under the data mean.
RbmModel initialize_model(const BinaryDataset& data, int n_hidden,
                          ActivationKind kind, Rng& rng);

/// One CD-k update on a minibatch (rows of 0/1). Data-side hidden statistics
/// use conditional means; the reconstruction chain restarts at the data and
/// advances with sampled hidden states. Throws NumericError on non-finite
/// gradients.
void cd_step(RbmModel& model, const Eigen::MatrixXd& batch, int k, double eta,
             Rng& rng, bool clip_updates = true);

struct TrainLogEntry {
  long update = 0;
  int epoch = 0;
  double pseudo_likelihood = 0.0;  // per data point, summed over sites
  double moving_average = 0.0;     // trailing 20-epoch window
};

struct TrainResult {
  RbmModel model;
  std::vector<TrainLogEntry> log;
};

/// Full training loop with the schedules above. The pseudo-likelihood is
/// probed after every update on `eval_subset` points drawn from eval_data.
TrainResult train(const BinaryDataset& train_data, const BinaryDataset& eval_data,
                  const TrainConfig& config, ActivationKind kind, int n_hidden);

/// CSV `update,epoch,pl,pl_ma20`.
void save_train_log(const std::vector<TrainLogEntry>& log, const std::string& path,
                    const std::string& header_comment = {});

}  // namespace boltzmap
