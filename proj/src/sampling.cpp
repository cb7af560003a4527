#include "boltzmap/sampling.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "boltzmap/exact.hpp"
#include "boltzmap/numerics.hpp"

namespace boltzmap {

namespace {

constexpr long kCacheRefreshInterval = 10000;

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

ChainState make_chain(const RbmModel& model, std::uint64_t master_seed,
                      std::uint64_t chain_id) {
  model.validate();
  ChainState state{Eigen::VectorXd(model.n_visible()),
                   Eigen::VectorXd::Zero(model.n_hidden()),
                   Rng::stream(master_seed, chain_id), 0};
  for (Eigen::Index i = 0; i < state.v.size(); ++i) {
    state.v(i) = state.rng.bernoulli(0.5) ? 1.0 : 0.0;
  }
  return state;
}

void gibbs_sweep(const RbmModel& model, ChainState& state) {
  if (state.v.size() != model.n_visible() || state.z.size() != model.n_hidden()) {
    throw std::invalid_argument("chain dimensions do not match model");
  }
  const Eigen::VectorXd q = model.W.transpose() * state.v;
  for (Eigen::Index mu = 0; mu < state.z.size(); ++mu) {
    state.z(mu) = sample_hidden(model.activation, model.c(mu), q(mu), state.rng);
  }
  const Eigen::VectorXd r = model.b + model.W * state.z;
  for (Eigen::Index i = 0; i < state.v.size(); ++i) {
    state.v(i) = state.rng.bernoulli(sigmoid(r(i))) ? 1.0 : 0.0;
  }
  ++state.sweeps_done;
}

VisibleStateCache::VisibleStateCache(const RbmModel& model,
                                     const Eigen::VectorXd& v) {
  if (v.size() != model.n_visible()) {
    throw std::invalid_argument("visible vector length mismatch");
  }
  q_ = model.W.transpose() * v;
}

void VisibleStateCache::apply(const RbmModel& model, Eigen::VectorXd& v,
                              int site, double value) {
  const double old = v(site);
  if (old != value) {
    q_ += (value - old) * model.W.row(site).transpose();
    v(site) = value;
  }
  if (++updates_ >= kCacheRefreshInterval) {
    q_.noalias() = model.W.transpose() * v;
    updates_ = 0;
  }
}

double marginal_site_delta(const RbmModel& model, const VisibleStateCache& cache,
                           const Eigen::VectorXd& v, int site) {
  const Eigen::VectorXd& q = cache.hidden_input();
  double diff = 0.0;
  for (Eigen::Index mu = 0; mu < q.size(); ++mu) {
    const double w = model.W(site, mu);
    const double q0 = q(mu) - v(site) * w;
    diff += cgf(model.activation, model.c(mu), q0 + w) -
            cgf(model.activation, model.c(mu), q0);
  }
  return model.b(site) + diff;
}

double visible_site_conditional(const RbmModel& model, const Eigen::VectorXd& v,
                                int site) {
  if (site < 0 || site >= model.n_visible()) {
    throw std::invalid_argument("site index out of range");
  }
  VisibleStateCache cache(model, v);
  return sigmoid(marginal_site_delta(model, cache, v, site));
}

std::vector<std::vector<std::uint32_t>> sample_state_masks(
    const RbmModel& model, int n_trials, long n_samples, long burn_in,
    long thin, std::uint64_t seed, int n_threads) {
  if (model.n_visible() > 32) {
    throw std::invalid_argument("state masks need N <= 32");
  }
  if (n_trials < 1 || n_samples < 1 || thin < 1) {
    throw std::invalid_argument("trials, samples, and thinning must be positive");
  }
  std::vector<std::vector<std::uint32_t>> trials(static_cast<std::size_t>(n_trials));
  auto run_trial = [&](int t) {
    ChainState chain = make_chain(model, seed, static_cast<std::uint64_t>(t));
    for (long s = 0; s < burn_in; ++s) gibbs_sweep(model, chain);
    auto& out = trials[static_cast<std::size_t>(t)];
    out.reserve(static_cast<std::size_t>(n_samples));
    for (long s = 0; s < n_samples; ++s) {
      for (long j = 0; j < thin; ++j) gibbs_sweep(model, chain);
      out.push_back(state_mask(chain.v));
    }
  };
  const int workers_wanted = std::max(1, std::min(n_threads, n_trials));
  if (workers_wanted == 1) {
    for (int t = 0; t < n_trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> workers;
    const int chunk = (n_trials + workers_wanted - 1) / workers_wanted;
    for (int w = 0; w < workers_wanted; ++w) {
      const int lo = w * chunk;
      const int hi = std::min(n_trials, lo + chunk);
      if (lo >= hi) break;
      workers.emplace_back([&, lo, hi] {
        for (int t = lo; t < hi; ++t) run_trial(t);
      });
    }
    for (auto& w : workers) w.join();
  }
  return trials;
}

Eigen::MatrixXd sample_rows(const RbmModel& model, long n_samples, long burn_in,
                            long thin, std::uint64_t seed,
                            std::uint64_t chain_id) {
  if (n_samples < 1 || thin < 1) {
    throw std::invalid_argument("samples and thinning must be positive");
  }
  Eigen::MatrixXd rows(n_samples, model.n_visible());
  ChainState chain = make_chain(model, seed, chain_id);
  for (long s = 0; s < burn_in; ++s) gibbs_sweep(model, chain);
  for (long s = 0; s < n_samples; ++s) {
    for (long j = 0; j < thin; ++j) gibbs_sweep(model, chain);
    rows.row(s) = chain.v.transpose();
  }
  return rows;
}

}  // namespace boltzmap
