#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "boltzmap/exact.hpp"
#include "boltzmap/mapping.hpp"
#include "boltzmap/sampling.hpp"
#include "test_util.hpp"

using namespace boltzmap;
using namespace boltzmap::testing;

TEST_CASE("decoupled chain reproduces sigmoid marginals") {
  RbmModel model;
  model.activation = ActivationKind::Step;
  model.b.resize(3);
  model.b << -1.0, 0.0, 2.0;
  model.c = Eigen::VectorXd::Zero(2);
  model.W = Eigen::MatrixXd::Zero(3, 2);

  Eigen::VectorXd counts = Eigen::VectorXd::Zero(3);
  const long n = 100000;
  ChainState chain = make_chain(model, 7, 0);
  for (long i = 0; i < n; ++i) {
    gibbs_sweep(model, chain);
    counts += chain.v;
  }
  for (int i = 0; i < 3; ++i) {
    const double p = 1.0 / (1.0 + std::exp(-model.b(i)));
    CHECK(std::abs(counts(i) / n - p) < 5.0 * std::sqrt(p * (1 - p) / n));
  }
  CHECK(chain.sweeps_done == n);
}

TEST_CASE("pure three-body chain matches exact probabilities (Fig 2 protocol)") {
  const int signs[3][4] = {{+1, +1, -1, -1}, {+1, -1, +1, -1}, {+1, -1, -1, +1}};
  RbmModel model;
  model.activation = ActivationKind::Exponential;
  model.b = Eigen::VectorXd::Zero(3);
  model.c = Eigen::VectorXd::Zero(4);
  model.W.resize(3, 4);
  for (int i = 0; i < 3; ++i) {
    for (int mu = 0; mu < 4; ++mu) model.W(i, mu) = std::log(1.0 + 0.5 * signs[i][mu]);
  }

  // probabilities from the *interaction model*, closing the mapping loop
  ExpandOptions options;
  options.max_order = 3;
  options.drop_tol = 1e-12;
  const ExactSummary target = enumerate_states(expand(model, options));

  const auto trials = sample_state_masks(model, 20, 1000, 1000, 1, 99);
  std::vector<std::uint32_t> pooled;
  for (const auto& t : trials) pooled.insert(pooled.end(), t.begin(), t.end());
  const auto report = compare_frequencies(target, pooled, 20);
  CHECK(report.p_value > 0.001);
  CHECK(report.tv_distance < 0.05);
  for (Eigen::Index s = 0; s < 8; ++s) {
    CHECK(std::abs(report.mean_freq(s) - target.probabilities(s)) <
          5.0 * report.freq_sd(s) / std::sqrt(20.0) + 5e-3);
  }
}

TEST_CASE("stationary distribution matches enumeration for all kinds") {
  // detailed-balance smoke: 1e6 sweeps against the exact table
  for (auto kind : kAllKinds) {
    const auto model = random_rbm(kind, 5, 4, 1.0 / std::sqrt(4.0), 0.1, 303);
    const ExactSummary exact = enumerate_states(model);
    const auto trials = sample_state_masks(model, 1, 1000000, 1000, 1, 11);
    const auto report = compare_frequencies(exact, trials[0], 1);
    INFO("kind=", to_string(kind), " chi2=", report.chi_square, " dof=", report.dof);
    CHECK(report.p_value > 0.001);
  }
}

TEST_CASE("visible site conditional: decoupled and embedded cases") {
  RbmModel flat;
  flat.activation = ActivationKind::Relu;
  flat.b.resize(2);
  flat.b << 0.3, -0.7;
  flat.c = Eigen::VectorXd::Zero(1);
  flat.W = Eigen::MatrixXd::Zero(2, 1);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(2);
  CHECK(visible_site_conditional(flat, v, 0) ==
        doctest::Approx(1.0 / (1.0 + std::exp(-0.3))).epsilon(1e-12));

  // embedded pairwise model: conditional log-odds is b0' + J01 when v1 = 1
  Eigen::MatrixXd couplings(2, 2);
  couplings << 0.0, 0.5, 0.5, 0.0;
  const RbmModel pair = linear_embed(couplings, Eigen::VectorXd::Zero(2));
  Eigen::VectorXd w(2);
  w << 0.0, 1.0;
  const double field = interaction_term(pair, {0});  // embedded field, = 0 here
  const double direct = visible_site_conditional(pair, w, 0);
  CHECK(direct == doctest::Approx(1.0 / (1.0 + std::exp(-(field + 0.5)))).epsilon(1e-10));
}

TEST_CASE("site conditionals agree with exact table conditionals") {
  const auto model = random_rbm(ActivationKind::Step, 8, 5, 0.6, 0.3, 21);
  const ExactSummary exact = enumerate_states(model);
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::uint32_t mask = static_cast<std::uint32_t>(rng.next_u64() & 0xffu);
    const int site = static_cast<int>(rng.next_u64() % 8u);
    const Eigen::VectorXd v = state_vector(mask, 8);
    const std::uint32_t on = mask | (1u << site);
    const std::uint32_t off = on ^ (1u << site);
    const double p1 = exact.probabilities(on);
    const double p0 = exact.probabilities(off);
    CHECK(visible_site_conditional(model, v, site) ==
          doctest::Approx(p1 / (p0 + p1)).epsilon(1e-10));
  }
}

TEST_CASE("cache survives 1e5 incremental flips within 1e-12") {
  const auto model = random_rbm(ActivationKind::Relu, 12, 9, 0.5, 0.2, 77);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(12);
  VisibleStateCache cache(model, v);
  Rng rng(8);
  for (long i = 0; i < 100000; ++i) {
    const int site = static_cast<int>(rng.next_u64() % 12u);
    cache.apply(model, v, site, rng.bernoulli(0.5) ? 1.0 : 0.0);
  }
  VisibleStateCache fresh(model, v);
  CHECK((cache.hidden_input() - fresh.hidden_input()).cwiseAbs().maxCoeff() < 1e-12);
  for (int site = 0; site < 12; ++site) {
    CHECK(marginal_site_delta(model, cache, v, site) ==
          doctest::Approx(marginal_site_delta(model, fresh, v, site)).epsilon(1e-12));
  }
}

TEST_CASE("identical seeds give identical chains") {
  const auto model = random_rbm(ActivationKind::Exponential, 6, 4, 0.3, 0.2, 15);
  const auto a = sample_state_masks(model, 3, 500, 100, 2, 4242);
  const auto b = sample_state_masks(model, 3, 500, 100, 2, 4242);
  CHECK(a == b);
  const auto c = sample_state_masks(model, 3, 500, 100, 2, 4243);
  CHECK(a != c);
  // thread count does not change the output
  const auto parallel = sample_state_masks(model, 3, 500, 100, 2, 4242, 4);
  CHECK(a == parallel);
}

TEST_CASE("sample_rows returns binary rows with the requested shape") {
  const auto model = random_rbm(ActivationKind::Step, 7, 3, 0.4, 0.2, 2);
  const Eigen::MatrixXd rows = sample_rows(model, 250, 50, 1, 9);
  CHECK(rows.rows() == 250);
  CHECK(rows.cols() == 7);
  CHECK(((rows.array() == 0.0) || (rows.array() == 1.0)).all());
}
