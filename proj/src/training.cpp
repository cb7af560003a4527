#include "boltzmap/training.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>

#include "boltzmap/errors.hpp"
#include "boltzmap/evaluation.hpp"

namespace boltzmap {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

constexpr double kPseudoCount = 1e-6;

}  // namespace

int cd_steps_for_epoch(int epoch) { return (epoch + 9) / 10; }

double learning_rate_for_epoch(double eta0, int epoch) {
  return eta0 / static_cast<double>(cd_steps_for_epoch(epoch));
}

double default_eta0(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::Step: return 0.1;
    case ActivationKind::Linear: return 0.01;
    case ActivationKind::Relu: return 0.01;
    case ActivationKind::Exponential: return 0.005;
  }
  return 0.01;
}

RbmModel initialize_model(const BinaryDataset& data, int n_hidden,
                          ActivationKind kind, Rng& rng) {
  if (n_hidden < 1) throw std::invalid_argument("n_hidden must be >= 1");
  const int n = data.n_features();
  Eigen::VectorXd mean = data.feature_means();
  for (int i = 0; i < n; ++i) {
    mean(i) = std::clamp(mean(i), kPseudoCount, 1.0 - kPseudoCount);
  }

  RbmModel model;
  model.activation = kind;
  model.b = (mean.array().log() - (1.0 - mean.array()).log()).matrix();
  const double w0 = std::sqrt(0.1 / static_cast<double>(n));
  model.W.resize(n, n_hidden);
  for (int i = 0; i < n; ++i) {
    for (int mu = 0; mu < n_hidden; ++mu) {
      model.W(i, mu) = rng.bernoulli(0.5) ? w0 : -w0;
    }
  }
  model.c = model.W.transpose() * mean;
  model.validate();
  return model;
}

void cd_step(RbmModel& model, const Eigen::MatrixXd& batch, int k, double eta,
             Rng& rng, bool clip_updates) {
  if (k < 1) throw std::invalid_argument("cd_step needs k >= 1");
  if (batch.cols() != model.n_visible() || batch.rows() < 1) {
    throw std::invalid_argument("batch shape mismatch");
  }
  const Eigen::Index n_batch = batch.rows();
  const Eigen::Index n = model.n_visible();
  const Eigen::Index m = model.n_hidden();

  Eigen::MatrixXd dw = Eigen::MatrixXd::Zero(n, m);
  Eigen::VectorXd db = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd dc = Eigen::VectorXd::Zero(m);

  Eigen::VectorXd v(n), v_rec(n), q(m), mean_z(m), z(m);
  for (Eigen::Index r = 0; r < n_batch; ++r) {
    v = batch.row(r).transpose();
    // positive phase: Rao-Blackwellized hidden statistics
    q.noalias() = model.W.transpose() * v;
    for (Eigen::Index mu = 0; mu < m; ++mu) {
      mean_z(mu) = conditional_mean(model.activation, model.c(mu), q(mu));
    }
    dw.noalias() += v * mean_z.transpose();
    db += v;
    dc -= mean_z;  // joint exponent carries -c.z

    // negative phase: k sampled reconstruction steps starting at the data
    v_rec = v;
    for (int step = 0; step < k; ++step) {
      for (Eigen::Index mu = 0; mu < m; ++mu) {
        z(mu) = sample_hidden(model.activation, model.c(mu), q(mu), rng);
      }
      const Eigen::VectorXd field = model.b + model.W * z;
      for (Eigen::Index i = 0; i < n; ++i) {
        v_rec(i) = rng.bernoulli(sigmoid(field(i))) ? 1.0 : 0.0;
      }
      q.noalias() = model.W.transpose() * v_rec;
    }
    for (Eigen::Index mu = 0; mu < m; ++mu) {
      mean_z(mu) = conditional_mean(model.activation, model.c(mu), q(mu));
    }
    dw.noalias() -= v_rec * mean_z.transpose();
    db -= v_rec;
    dc += mean_z;
  }

  const double scale = eta / static_cast<double>(n_batch);
  dw *= scale;
  db *= scale;
  dc *= scale;
  if (!dw.allFinite() || !db.allFinite() || !dc.allFinite()) {
    throw NumericError("non-finite CD gradient (k=" + std::to_string(k) +
                       ", eta=" + std::to_string(eta) + ")");
  }
  if (clip_updates) {
    const double peak = dw.cwiseAbs().maxCoeff();
    if (peak > 1.0) dw *= 1.0 / peak;
  }
  model.W += dw;
  model.b += db;
  model.c += dc;
  if (!model.W.allFinite() || !model.b.allFinite() || !model.c.allFinite()) {
    throw NumericError("non-finite parameters after CD update");
  }
}

TrainResult train(const BinaryDataset& train_data, const BinaryDataset& eval_data,
                  const TrainConfig& config, ActivationKind kind, int n_hidden) {
  if (config.minibatch < 1 || config.epochs < 1 || config.eval_subset < 1) {
    throw std::invalid_argument("training counts must be positive");
  }
  const double eta0 = config.eta0 > 0.0 ? config.eta0 : default_eta0(kind);

  Rng init_rng = Rng::stream(config.seed, 1);
  Rng shuffle_rng = Rng::stream(config.seed, 2);
  Rng chain_rng = Rng::stream(config.seed, 3);
  Rng eval_rng = Rng::stream(config.seed, 4);

  TrainResult result;
  result.model = initialize_model(train_data, n_hidden, kind, init_rng);

  const long n_data = train_data.n_items();
  const long batches_per_epoch = (n_data + config.minibatch - 1) / config.minibatch;
  const std::size_t window =
      static_cast<std::size_t>(20 * batches_per_epoch);  // 20-epoch moving window
  std::deque<double> recent;
  double recent_sum = 0.0;

  std::vector<long> order(static_cast<std::size_t>(n_data));
  std::iota(order.begin(), order.end(), 0);
  std::vector<long> probe(static_cast<std::size_t>(config.eval_subset));

  long update = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const int k = cd_steps_for_epoch(epoch);
    const double eta = learning_rate_for_epoch(eta0, epoch);
    // Fisher-Yates with our own stream, for cross-platform determinism
    for (long i = n_data - 1; i > 0; --i) {
      const long j = static_cast<long>(shuffle_rng.next_u64() % static_cast<std::uint64_t>(i + 1));
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    for (long start = 0; start < n_data; start += config.minibatch) {
      const long stop = std::min(n_data, start + config.minibatch);
      std::vector<long> idx(order.begin() + start, order.begin() + stop);
      cd_step(result.model, train_data.rows(idx), k, eta, chain_rng,
              config.clip_updates);
      ++update;

      for (auto& p : probe) {
        p = static_cast<long>(eval_rng.next_u64() %
                              static_cast<std::uint64_t>(eval_data.n_items()));
      }
      const double pl = pseudo_likelihood(result.model, eval_data.rows(probe));
      recent.push_back(pl);
      recent_sum += pl;
      if (recent.size() > window) {
        recent_sum -= recent.front();
        recent.pop_front();
      }
      result.log.push_back({update, epoch, pl,
                            recent_sum / static_cast<double>(recent.size())});
    }
  }
  return result;
}

void save_train_log(const std::vector<TrainLogEntry>& log, const std::string& path,
                    const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  out << "# pl convention: summed over sites, averaged over probe points\n";
  out << "update,epoch,pl,pl_ma20\n";
  for (const auto& entry : log) {
    out << entry.update << ',' << entry.epoch << ','
        << format_g17(entry.pseudo_likelihood) << ','
        << format_g17(entry.moving_average) << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace boltzmap
