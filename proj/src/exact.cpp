#include "boltzmap/exact.hpp"

#include <bit>
#include <cmath>
#include <span>
#include <stdexcept>

#include "boltzmap/errors.hpp"
#include "boltzmap/numerics.hpp"

namespace boltzmap {

namespace {

void check_cap(long n) {
  if (n < 1) throw std::invalid_argument("enumeration needs N >= 1");
  if (n > kEnumerationCap) {
    throw std::invalid_argument("enumeration capped at N <= " +
                                std::to_string(kEnumerationCap) + ", got " +
                                std::to_string(n));
  }
}

void finalize(ExactSummary& s) {
  s.log_partition = logsumexp(
      std::span<const double>(s.log_weights.data(), s.log_weights.size()));
  s.probabilities = (s.log_weights.array() - s.log_partition).exp();
}

}  // namespace

std::uint32_t state_mask(const Eigen::VectorXd& v) {
  if (v.size() > 32) throw std::invalid_argument("state_mask needs N <= 32");
  std::uint32_t mask = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0.0) mask |= (1u << i);
  }
  return mask;
}

Eigen::VectorXd state_vector(std::uint32_t mask, int n_visible) {
  Eigen::VectorXd v(n_visible);
  for (int i = 0; i < n_visible; ++i) v(i) = (mask >> i) & 1u;
  return v;
}

ExactSummary enumerate_states(const RbmModel& model) {
  model.validate();
  const int n = static_cast<int>(model.n_visible());
  check_cap(n);
  const std::size_t size = std::size_t{1} << n;

  ExactSummary summary;
  summary.n_visible = n;
  summary.log_weights.resize(static_cast<Eigen::Index>(size));

  Eigen::VectorXd q = Eigen::VectorXd::Zero(model.n_hidden());
  double bv = 0.0;
  std::uint32_t mask = 0;
  summary.log_weights(0) = 0.0;  // K(0) = 0 and b.0 = 0
  for (std::size_t i = 1; i < size; ++i) {
    const int bit = std::countr_zero(i);
    mask = static_cast<std::uint32_t>(i ^ (i >> 1));
    if ((mask >> bit) & 1u) {
      q += model.W.row(bit).transpose();
      bv += model.b(bit);
    } else {
      q -= model.W.row(bit).transpose();
      bv -= model.b(bit);
    }
    if ((i & 0xffffu) == 0u) {
      // periodic refresh bounds incremental floating-point drift
      const Eigen::VectorXd v = state_vector(mask, n);
      q.noalias() = model.W.transpose() * v;
      bv = model.b.dot(v);
    }
    summary.log_weights(static_cast<Eigen::Index>(mask)) =
        bv + hidden_cgf_sum(model, q);
  }
  finalize(summary);
  return summary;
}

ExactSummary enumerate_states(const InteractionModel& model) {
  const int n = model.n_visible;
  check_cap(n);
  const std::size_t size = std::size_t{1} << n;

  ExactSummary summary;
  summary.n_visible = n;
  summary.log_weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size));
  for (const auto& [subset, value] : model.terms) {
    std::uint32_t mask = 0;
    for (int k : subset) mask |= (1u << k);
    summary.log_weights(static_cast<Eigen::Index>(mask)) += value;
  }
  // zeta transform: H(v) = sum of coefficients over subsets of v
  double* a = summary.log_weights.data();
  for (int bit = 0; bit < n; ++bit) {
    const std::size_t step = std::size_t{1} << bit;
    for (std::size_t m = 0; m < size; ++m) {
      if (m & step) a[m] += a[m ^ step];
    }
  }
  finalize(summary);
  return summary;
}

InteractionModel moebius_invert(const ExactSummary& summary, double drop_tol) {
  const int n = summary.n_visible;
  check_cap(n);
  const std::size_t size = std::size_t{1} << n;
  if (summary.log_weights.size() != static_cast<Eigen::Index>(size)) {
    throw std::invalid_argument("incomplete state table");
  }

  std::vector<double> h(size);
  const double h0 = summary.log_weights(0);
  for (std::size_t m = 0; m < size; ++m) h[m] = summary.log_weights(m) - h0;
  for (int bit = 0; bit < n; ++bit) {
    const std::size_t step = std::size_t{1} << bit;
    for (std::size_t m = 0; m < size; ++m) {
      if (m & step) h[m] -= h[m ^ step];
    }
  }

  InteractionModel model;
  model.n_visible = n;
  for (std::size_t m = 1; m < size; ++m) {
    if (std::abs(h[m]) <= drop_tol) continue;
    Subset subset;
    subset.reserve(static_cast<std::size_t>(std::popcount(m)));
    for (int k = 0; k < n; ++k) {
      if (m & (std::size_t{1} << k)) subset.push_back(k);
    }
    model.terms.emplace(std::move(subset), h[m]);
  }
  return model;
}

FrequencyReport compare_frequencies(const ExactSummary& summary,
                                    const std::vector<std::uint32_t>& samples,
                                    int n_trials) {
  if (samples.empty()) throw std::invalid_argument("empty sample set");
  if (n_trials < 1 || samples.size() % static_cast<std::size_t>(n_trials) != 0) {
    throw std::invalid_argument("samples must split into equal trial blocks");
  }
  const std::size_t n_states = static_cast<std::size_t>(summary.probabilities.size());
  const std::size_t block = samples.size() / static_cast<std::size_t>(n_trials);

  FrequencyReport report;
  report.n_samples = static_cast<long>(samples.size());
  report.n_trials = n_trials;
  report.exact_prob = summary.probabilities;

  Eigen::MatrixXd trial_freq =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_states), n_trials);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_states));
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const std::uint32_t s = samples[j];
    if (s >= n_states) throw std::invalid_argument("sample outside state space");
    trial_freq(s, static_cast<Eigen::Index>(j / block)) += 1.0;
    counts(s) += 1.0;
  }
  trial_freq /= static_cast<double>(block);
  report.mean_freq = trial_freq.rowwise().mean();
  if (n_trials > 1) {
    Eigen::MatrixXd centered = trial_freq.colwise() - report.mean_freq;
    report.freq_sd =
        (centered.array().square().rowwise().sum() / (n_trials - 1)).sqrt();
  } else {
    report.freq_sd = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_states));
  }

  const double total = static_cast<double>(samples.size());
  report.tv_distance =
      0.5 * (counts / total - summary.probabilities).cwiseAbs().sum();

  // Pearson chi-square on pooled counts; expected-below-5 states share one bin.
  double chi2 = 0.0;
  long bins = 0;
  double pooled_obs = 0.0, pooled_exp = 0.0;
  for (std::size_t s = 0; s < n_states; ++s) {
    const double expected = summary.probabilities(static_cast<Eigen::Index>(s)) * total;
    if (expected < 5.0) {
      pooled_obs += counts(static_cast<Eigen::Index>(s));
      pooled_exp += expected;
    } else {
      const double d = counts(static_cast<Eigen::Index>(s)) - expected;
      chi2 += d * d / expected;
      ++bins;
    }
  }
  if (pooled_exp > 0.0) {
    const double d = pooled_obs - pooled_exp;
    chi2 += d * d / pooled_exp;
    ++bins;
  }
  report.chi_square = chi2;
  report.dof = static_cast<double>(std::max<long>(bins - 1, 1));
  report.p_value = chi_square_tail(chi2, report.dof);
  return report;
}

}  // namespace boltzmap
