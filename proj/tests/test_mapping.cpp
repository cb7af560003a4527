#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "boltzmap/errors.hpp"
#include "boltzmap/exact.hpp"
#include "boltzmap/mapping.hpp"
#include "test_util.hpp"

using namespace boltzmap;
using namespace boltzmap::testing;

namespace {

// Exponential RBM equivalent to a pure three-body model with I^(3) = 0.5:
// N=3, M=4, c=0, b=0, w = log(1 + s*0.5) over sign patterns whose pair and
// single sums cancel.
RbmModel pure_three_body_rbm() {
  const int signs[3][4] = {{+1, +1, -1, -1}, {+1, -1, +1, -1}, {+1, -1, -1, +1}};
  RbmModel model;
  model.activation = ActivationKind::Exponential;
  model.b = Eigen::VectorXd::Zero(3);
  model.c = Eigen::VectorXd::Zero(4);
  model.W.resize(3, 4);
  for (int i = 0; i < 3; ++i) {
    for (int mu = 0; mu < 4; ++mu) {
      model.W(i, mu) = std::log(1.0 + 0.5 * signs[i][mu]);
    }
  }
  return model;
}

}  // namespace

TEST_CASE("zero weights give zero interactions beyond order one") {
  RbmModel model;
  model.activation = ActivationKind::Step;
  model.b = Eigen::VectorXd::Zero(5);
  model.c = Eigen::VectorXd::Constant(3, 0.7);
  model.W = Eigen::MatrixXd::Zero(5, 3);
  CHECK(interaction_term(model, {0, 2}) == 0.0);
  CHECK(interaction_term(model, {1, 2, 4}) == 0.0);
  CHECK(interaction_term(model, {3}) == 0.0);  // b=0 and K(0)=0
}

TEST_CASE("Linear pairwise term is the weight product") {
  RbmModel model;
  model.activation = ActivationKind::Linear;
  model.b = Eigen::VectorXd::Zero(2);
  model.c = Eigen::VectorXd::Zero(1);
  model.W.resize(2, 1);
  model.W << 0.3, -0.2;
  CHECK(interaction_term(model, {0, 1}) == doctest::Approx(-0.06).epsilon(1e-13));
  CHECK(small_w_interaction(model, {0, 1}) ==
        doctest::Approx(interaction_term(model, {0, 1})).epsilon(1e-13));
}

TEST_CASE("Linear models have no interactions beyond pairwise") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto model = random_rbm(ActivationKind::Linear, 8, 5, 0.9, 0.5, seed);
    for (const Subset& s :
         {Subset{0, 1, 2}, Subset{2, 5, 7}, Subset{0, 3, 4, 6}, Subset{1, 2, 3, 4, 5}}) {
      CHECK(std::abs(interaction_term(model, s)) < 1e-12);
    }
  }
}

TEST_CASE("pure three-body construction") {
  const RbmModel model = pure_three_body_rbm();
  CHECK(interaction_term(model, {0, 1, 2}) == doctest::Approx(0.5).epsilon(1e-13));
  for (const Subset& s : {Subset{0}, Subset{1}, Subset{2}, Subset{0, 1}, Subset{0, 2},
                          Subset{1, 2}}) {
    CHECK(std::abs(interaction_term(model, s)) < 1e-12);
  }
  // cross-validated against enumeration + Moebius inversion
  const InteractionModel inverted = moebius_invert(enumerate_states(model));
  CHECK(inverted.coefficient({0, 1, 2}) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(inverted.coefficient({0, 1})) < 1e-10);
  CHECK(std::abs(inverted.coefficient({0})) < 1e-10);
}

TEST_CASE("expand of the pure three-body model keeps one term") {
  ExpandOptions options;
  options.max_order = 3;
  options.drop_tol = 1e-12;
  const InteractionModel terms = expand(pure_three_body_rbm(), options);
  REQUIRE(terms.terms.size() == 1);
  CHECK(terms.coefficient({0, 1, 2}) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("forward mapping equals the Moebius oracle for every kind") {
  for (auto kind : kAllKinds) {
    for (std::uint64_t seed : {10u, 20u}) {
      const int n = 6, m = 7;
      const auto model = random_rbm(kind, n, m, 1.0 / std::sqrt(m), 0.1, seed);
      ExpandOptions options;
      options.max_order = n;
      const InteractionModel mapped = expand(model, options);
      const InteractionModel oracle = moebius_invert(enumerate_states(model));
      for (const auto& [subset, value] : oracle.terms) {
        INFO("kind=", to_string(kind), " subset size=", subset.size());
        CHECK(std::abs(mapped.coefficient(subset) - value) < 1e-9);
      }
    }
  }
}

TEST_CASE("Exponential closed form: I^(s) = sum_mu lambda prod u") {
  const auto model = random_rbm(ActivationKind::Exponential, 7, 5, 0.5, 0.4, 31);
  const ExpParams params = exp_params(model);
  CHECK((params.u.array() > -1.0).all());
  CHECK((params.lambda_tilde.array() > 0.0).all());
  for (const Subset& s : {Subset{0, 4}, Subset{1, 2, 6}, Subset{0, 1, 2, 3, 5}}) {
    double want = 0.0;
    for (int mu = 0; mu < 5; ++mu) {
      double prod = params.lambda_tilde(mu);
      for (int k : s) prod *= params.u(k, mu);
      want += prod;
    }
    CHECK(interaction_term(model, s) == doctest::Approx(want).epsilon(1e-11));
  }
}

TEST_CASE("ReLU and Step pairwise closed forms") {
  const auto relu = random_rbm(ActivationKind::Relu, 4, 3, 0.8, 0.6, 77);
  double want = 0.0;
  for (int mu = 0; mu < 3; ++mu) {
    const double w1 = relu.W(1, mu), w2 = relu.W(3, mu), c = relu.c(mu);
    const double r2 = std::numbers::sqrt2;
    want += w1 * w2 +
            std::log(((1.0 + std::erf((w1 + w2 - c) / r2)) * (1.0 + std::erf(-c / r2))) /
                     ((1.0 + std::erf((w1 - c) / r2)) * (1.0 + std::erf((w2 - c) / r2))));
  }
  CHECK(interaction_term(relu, {1, 3}) == doctest::Approx(want).epsilon(1e-11));

  const auto step = random_rbm(ActivationKind::Step, 4, 3, 0.8, 0.6, 78);
  want = 0.0;
  for (int mu = 0; mu < 3; ++mu) {
    const double w1 = step.W(0, mu), w2 = step.W(2, mu), c = step.c(mu);
    want += std::log((1.0 + std::exp(w1 + w2 - c)) * (1.0 + std::exp(-c)) /
                     ((1.0 + std::exp(w1 - c)) * (1.0 + std::exp(w2 - c))));
  }
  CHECK(interaction_term(step, {0, 2}) == doctest::Approx(want).epsilon(1e-11));
}

TEST_CASE("order-1 terms include the visible bias") {
  const auto model = random_rbm(ActivationKind::Step, 4, 3, 0.5, 0.3, 5);
  double k_sum = 0.0;
  for (int mu = 0; mu < 3; ++mu) {
    k_sum += cgf(model.activation, model.c(mu), model.W(2, mu));
  }
  CHECK(interaction_term(model, {2}) ==
        doctest::Approx(model.b(2) + k_sum).epsilon(1e-12));
  CHECK(interaction_term_weights_only(model, {2}) ==
        doctest::Approx(k_sum).epsilon(1e-12));
}

TEST_CASE("permutation symmetry of interaction terms") {
  const auto model = random_rbm(ActivationKind::Relu, 6, 4, 0.7, 0.2, 13);
  // permute rows 1 <-> 4 and relabel the subset accordingly
  RbmModel permuted = model;
  permuted.W.row(1).swap(permuted.W.row(4));
  std::swap(permuted.b(1), permuted.b(4));
  CHECK(interaction_term(model, {1, 2}) ==
        doctest::Approx(interaction_term(permuted, {2, 4})).epsilon(1e-12));
  CHECK(interaction_term(model, {1, 4, 5}) ==
        doctest::Approx(interaction_term(permuted, {1, 4, 5})).epsilon(1e-12));
}

TEST_CASE("additivity over hidden units") {
  const auto model = random_rbm(ActivationKind::Exponential, 5, 6, 0.4, 0.3, 19);
  RbmModel left = model, right = model;
  left.W = model.W.leftCols(2).eval();
  left.c = model.c.head(2).eval();
  right.W = model.W.rightCols(4).eval();
  right.c = model.c.tail(4).eval();
  right.b = Eigen::VectorXd::Zero(5);  // bias attributed once
  for (const Subset& s : {Subset{0}, Subset{1, 3}, Subset{0, 2, 4}}) {
    CHECK(interaction_term(model, s) ==
          doctest::Approx(interaction_term(left, s) + interaction_term(right, s))
              .epsilon(1e-12));
  }
}

TEST_CASE("small-weight approximation converges under scaling") {
  for (auto kind : kNonlinearKinds) {
    // biases centered at 1 keep kappa^(3) bounded away from zero (for Step
    // it vanishes at c = 0, where the leading term degenerates)
    auto base = random_rbm(kind, 6, 8, 1.0, 0.1, 37);
    base.c.array() += 1.0;
    for (int order : {2, 3}) {
      double previous = 1e300;
      for (double eps : {0.2, 0.1, 0.05}) {
        RbmModel scaled = base;
        scaled.W *= eps;
        double err2 = 0.0, norm2 = 0.0;
        Subset subset(static_cast<std::size_t>(order));
        auto walk = [&](auto&& self, int depth, int start) -> void {
          if (depth == order) {
            const double exact = interaction_term(scaled, subset);
            const double approx = small_w_interaction(scaled, subset);
            err2 += (approx - exact) * (approx - exact);
            norm2 += exact * exact;
            return;
          }
          for (int i = start; i < 6; ++i) {
            subset[static_cast<std::size_t>(depth)] = i;
            self(self, depth + 1, i + 1);
          }
        };
        walk(walk, 0, 0);
        const double rel = std::sqrt(err2 / norm2);
        INFO("kind=", to_string(kind), " order=", order, " eps=", eps);
        CHECK(rel < previous);
        if (eps == 0.05) CHECK(rel < 0.10);
        previous = rel;
      }
    }
  }
}

TEST_CASE("Step small-w spot value") {
  RbmModel model;
  model.activation = ActivationKind::Step;
  model.b = Eigen::VectorXd::Zero(2);
  model.c = Eigen::VectorXd::Zero(1);
  model.W.resize(2, 1);
  model.W << 0.1, 0.1;
  CHECK(small_w_interaction(model, {0, 1}) == doctest::Approx(2.5e-3).epsilon(1e-12));
  CHECK(interaction_term(model, {0, 1}) == doctest::Approx(2.5e-3).epsilon(0.05));
}

TEST_CASE("expand respects pool, order, and the budget guard") {
  const auto model = random_rbm(ActivationKind::Step, 10, 15, 1.0 / std::sqrt(15.0), 0.1, 53);
  ExpandOptions options;
  options.max_order = 2;
  options.pool = {1, 4, 7, 9};
  const InteractionModel terms = expand(model, options);
  CHECK(terms.terms.size() == 4 + 6);
  for (const auto& [subset, value] : terms.terms) {
    for (int k : subset) CHECK((k == 1 || k == 4 || k == 7 || k == 9));
  }

  ExpandOptions tiny = options;
  tiny.budget = 10.0;
  CHECK_THROWS_AS((void)expand(model, tiny), BudgetError);
  tiny.force = true;
  CHECK_NOTHROW((void)expand(model, tiny));
}

TEST_CASE("expand is deterministic across thread counts") {
  const auto model = random_rbm(ActivationKind::Relu, 8, 6, 0.5, 0.2, 59);
  ExpandOptions serial;
  serial.max_order = 3;
  ExpandOptions parallel = serial;
  parallel.n_threads = 4;
  const InteractionModel a = expand(model, serial);
  const InteractionModel b = expand(model, parallel);
  REQUIRE(a.terms.size() == b.terms.size());
  auto ita = a.terms.begin();
  auto itb = b.terms.begin();
  for (; ita != a.terms.end(); ++ita, ++itb) {
    CHECK(ita->first == itb->first);
    CHECK(ita->second == itb->second);  // bit-identical
  }
}

TEST_CASE("interaction strength decays with order for weak random RBMs") {
  const auto model = random_rbm(ActivationKind::Step, 10, 15, 1.0 / std::sqrt(15.0), 0.1, 61);
  ExpandOptions options;
  options.max_order = 4;
  const InteractionModel terms = expand(model, options);
  std::vector<double> rms(5, 0.0);
  std::vector<long> count(5, 0);
  for (const auto& [subset, value] : terms.terms) {
    rms[subset.size()] += value * value;
    ++count[subset.size()];
  }
  for (int s = 2; s <= 4; ++s) {
    rms[static_cast<std::size_t>(s)] =
        std::sqrt(rms[static_cast<std::size_t>(s)] / count[static_cast<std::size_t>(s)]);
  }
  CHECK(rms[2] > rms[3]);
  CHECK(rms[3] > rms[4]);
}

TEST_CASE("invalid subsets are rejected") {
  const auto model = random_rbm(ActivationKind::Step, 4, 2, 0.5, 0.1, 3);
  CHECK_THROWS_AS((void)interaction_term(model, {}), std::invalid_argument);
  CHECK_THROWS_AS((void)interaction_term(model, {2, 1}), std::invalid_argument);
  CHECK_THROWS_AS((void)interaction_term(model, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS((void)interaction_term(model, {4}), std::invalid_argument);
}

TEST_CASE("linear_embed reproduces the 2x2 hand example") {
  Eigen::MatrixXd couplings(2, 2);
  couplings << 0.0, 0.5, 0.5, 0.0;
  const RbmModel model = linear_embed(couplings, Eigen::VectorXd::Zero(2));
  REQUIRE(model.n_hidden() == 1);
  CHECK(std::abs(model.W(0, 0)) == doctest::Approx(0.7071068).epsilon(1e-6));
  CHECK(std::abs(model.W(1, 0)) == doctest::Approx(0.7071068).epsilon(1e-6));
  CHECK(interaction_term(model, {0, 1}) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(interaction_term(model, {0})) < 1e-12);
  CHECK(std::abs(interaction_term(model, {1})) < 1e-12);
}

TEST_CASE("linear_embed of zero couplings is the independent model") {
  Eigen::VectorXd fields(3);
  fields << -0.5, 0.25, 2.0;
  const RbmModel model = linear_embed(Eigen::MatrixXd::Zero(3, 3), fields);
  CHECK(model.W.cwiseAbs().maxCoeff() == 0.0);
  CHECK(model.b == fields);
}

TEST_CASE("linear_embed round-trips at full rank and truncates optimally") {
  Rng rng(97);
  const int n = 8;
  Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      couplings(i, j) = couplings(j, i) = 0.4 * rng.normal();
    }
  }
  Eigen::VectorXd fields(n);
  for (int i = 0; i < n; ++i) fields(i) = 0.3 * rng.normal();

  auto reconstruct = [&](const RbmModel& model) {
    ExpandOptions options;
    options.max_order = 2;
    const InteractionModel terms = expand(model, options);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd h(n);
    for (int i = 0; i < n; ++i) h(i) = terms.coefficient({i});
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        out(i, j) = out(j, i) = terms.coefficient({i, j});
      }
    }
    return std::make_pair(out, h);
  };

  // full rank N-1: exact reproduction of couplings and fields
  const auto [full_j, full_h] = reconstruct(linear_embed(couplings, fields));
  CHECK((full_j - couplings).norm() < 1e-9);
  CHECK((full_h - fields).norm() < 1e-9);

  // rank 3: error equals the truncated spectral reconstruction of the
  // shifted matrix, fields still exact
  const RbmModel low = linear_embed(couplings, fields, 3);
  CHECK(low.n_hidden() == 3);
  const auto [low_j, low_h] = reconstruct(low);
  CHECK((low_h - fields).norm() < 1e-9);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(couplings);
  const Eigen::MatrixXd shifted =
      couplings + (-solver.eigenvalues()(0)) * Eigen::MatrixXd::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> shifted_solver(shifted);
  Eigen::MatrixXd truncated = Eigen::MatrixXd::Zero(n, n);
  for (int j = n - 3; j < n; ++j) {
    truncated += shifted_solver.eigenvalues()(j) *
                 shifted_solver.eigenvectors().col(j) *
                 shifted_solver.eigenvectors().col(j).transpose();
  }
  double want = 0.0, got = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      want += std::pow(truncated(i, j) - couplings(i, j), 2);
      got += std::pow(low_j(i, j) - couplings(i, j), 2);
    }
  }
  CHECK(std::sqrt(got) == doctest::Approx(std::sqrt(want)).epsilon(1e-9));
}

TEST_CASE("linear_embed input validation") {
  Eigen::MatrixXd bad(2, 2);
  bad << 0.0, 0.5, -0.5, 0.0;
  CHECK_THROWS_AS((void)linear_embed(bad, Eigen::VectorXd::Zero(2)),
                  std::invalid_argument);
  Eigen::MatrixXd diag(2, 2);
  diag << 1.0, 0.5, 0.5, 0.0;
  CHECK_THROWS_AS((void)linear_embed(diag, Eigen::VectorXd::Zero(2)),
                  std::invalid_argument);
}
