#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hswd/losses.hpp"
#include "hswd/rng.hpp"
#include "test_util.hpp"

using hswd::CentroidTable;
using hswd::ObjectiveInputs;
using hswd::QuantKind;
using hswd::RealMatrix;
using hswd::Rng;
using hswd::SimilarityKind;
using hswd::SimilarityMatrix;

namespace {

// Codes kept in a safe range: away from the BCE clamp and from exact ties.
RealMatrix safe_codes(Rng& rng, std::size_t n, std::size_t m) {
  RealMatrix z(n, m);
  for (std::size_t i = 0; i < z.size(); ++i) z.data()[i] = 1.8 * rng.uniform() - 0.9;
  return z;
}

}  // namespace

TEST_CASE("build_similarity on hand-checked labels") {
  const std::vector<std::uint32_t> labels{0, 0, 1};
  const auto sim = hswd::build_similarity(labels);
  const std::vector<std::uint8_t> expected{1, 1, 0, 1, 1, 0, 0, 0, 1};
  CHECK(sim.s == expected);

  const std::vector<std::uint32_t> same{2, 2, 2};
  for (auto v : hswd::build_similarity(same).s) CHECK(v == 1);

  const std::vector<std::uint32_t> distinct{0, 1, 2};
  const auto id = hswd::build_similarity(distinct);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(id.at(i, j) == (i == j ? 1 : 0));
    }
  }
}

TEST_CASE("pairwise loss on orthogonal and saturated pairs") {
  // orthogonal codes: theta = 0, single pair term = log 2 regardless of s
  const RealMatrix z(2, 2, {1, 0, 0, 1});
  for (std::uint32_t shared : {0u, 1u}) {
    const std::vector<std::uint32_t> labels{0, shared == 1 ? 0u : 1u};
    const auto sim = hswd::build_similarity(labels);
    const auto result = hswd::pairwise_likelihood_loss(z, sim, 1.0);
    CHECK(result.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }

  // similar pair with theta -> large positive: term -> 0
  const RealMatrix aligned(2, 2, {1, 1, 1, 1});
  const auto sim = hswd::build_similarity(std::vector<std::uint32_t>{0, 0});
  const auto saturated = hswd::pairwise_likelihood_loss(aligned, sim, 50.0);
  CHECK(saturated.value == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(hswd::pairwise_likelihood_loss(RealMatrix(1, 2), sim, 1.0),
                  std::invalid_argument);
}

TEST_CASE("pairwise pair terms are never negative") {
  Rng rng(103);
  for (int trial = 0; trial < 10; ++trial) {
    auto z = safe_codes(rng, 6, 3);
    std::vector<std::uint32_t> labels(6);
    for (auto& l : labels) l = static_cast<std::uint32_t>(rng.uniform() * 3);
    const auto sim = hswd::build_similarity(labels);
    CHECK(hswd::pairwise_likelihood_loss(z, sim, 2.0).value >= 0.0);
  }
}

TEST_CASE("pairwise gradient matches finite differences") {
  Rng rng(107);
  for (int trial = 0; trial < 5; ++trial) {
    auto z = safe_codes(rng, 4, 3);
    std::vector<std::uint32_t> labels(4);
    for (auto& l : labels) l = static_cast<std::uint32_t>(rng.uniform() * 2);
    const auto sim = hswd::build_similarity(labels);
    const auto analytic = hswd::pairwise_likelihood_loss(z, sim, 1.0);
    const auto fd = hswd::testutil::fd_gradient(
        [&](const RealMatrix& v) { return hswd::pairwise_likelihood_loss(v, sim, 1.0).value; },
        z);
    CHECK(hswd::testutil::rel_error(analytic.grad, fd) < 1e-5);
  }
}

TEST_CASE("hadamard centroids") {
  const auto two = hswd::hadamard_centroids(2, 2);
  CHECK(two.rows(0, 0) == 1.0);
  CHECK(two.rows(0, 1) == 1.0);
  CHECK(two.rows(1, 0) == 1.0);
  CHECK(two.rows(1, 1) == -1.0);
  CHECK(two.rows(0, 0) * two.rows(1, 0) + two.rows(0, 1) * two.rows(1, 1) == 0.0);

  const auto four = hswd::hadamard_centroids(4, 4);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) {
      int differing = 0;
      for (std::size_t k = 0; k < 4; ++k) {
        if (four.rows(a, k) != four.rows(b, k)) ++differing;
      }
      CHECK(differing == 2);  // m/2
    }
  }

  // rows beyond m are negations of the first block
  const auto eight = hswd::hadamard_centroids(8, 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(eight.rows(4, k) == -eight.rows(0, k));
  }

  CHECK_THROWS_AS(hswd::hadamard_centroids(5, 2), std::invalid_argument);
  CHECK_THROWS_AS(hswd::hadamard_centroids(2, 3), std::invalid_argument);
}

TEST_CASE("central similarity loss values") {
  const auto centroids = hswd::hadamard_centroids(2, 2);
  const std::vector<std::uint32_t> labels{0, 1};

  const RealMatrix zeros(2, 2);
  const auto mid = hswd::central_similarity_loss(zeros, labels, centroids);
  CHECK(mid.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  RealMatrix exact(2, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < 2; ++k) exact(i, k) = centroids.rows(i, k);
  }
  const auto best = hswd::central_similarity_loss(exact, labels, centroids);
  CHECK(best.value == doctest::Approx(-std::log(1.0 - 1e-7)).epsilon(1e-6));

  const std::vector<std::uint32_t> bad{0, 7};
  CHECK_THROWS_AS(hswd::central_similarity_loss(zeros, bad, centroids), std::invalid_argument);
}

TEST_CASE("central similarity gradient matches finite differences") {
  Rng rng(109);
  const auto centroids = hswd::hadamard_centroids(4, 4);
  for (int trial = 0; trial < 5; ++trial) {
    auto z = safe_codes(rng, 4, 4);
    std::vector<std::uint32_t> labels(4);
    for (auto& l : labels) l = static_cast<std::uint32_t>(rng.uniform() * 4);
    const auto analytic = hswd::central_similarity_loss(z, labels, centroids);
    const auto fd = hswd::testutil::fd_gradient(
        [&](const RealMatrix& v) {
          return hswd::central_similarity_loss(v, labels, centroids).value;
        },
        z);
    CHECK(hswd::testutil::rel_error(analytic.grad, fd) < 1e-5);
  }
}

TEST_CASE("combined objective: degenerate weight, additivity, finite differences") {
  Rng rng(113);
  auto z = safe_codes(rng, 6, 4);
  std::vector<std::uint32_t> labels(6);
  for (auto& l : labels) l = static_cast<std::uint32_t>(rng.uniform() * 3);
  const auto sim = hswd::build_similarity(labels);
  const auto target = hswd::sample_binary_target(6, 4, rng);
  const auto slices = hswd::sample_slices(12, 4, rng);

  ObjectiveInputs inputs;
  inputs.ls_kind = SimilarityKind::pairwise_likelihood;
  inputs.similarity = &sim;
  inputs.alpha = 1.0;
  inputs.lambda = 0.0;
  inputs.lq_kind = QuantKind::none;

  const auto ls_only = hswd::combined_objective(z, inputs);
  const auto direct = hswd::pairwise_likelihood_loss(z, sim, 1.0);
  CHECK(ls_only.total == direct.value);
  CHECK(ls_only.grad == direct.grad);

  inputs.lq_kind = QuantKind::hswd;
  inputs.lambda = 0.7;
  inputs.target = &target;
  const auto with_hswd = hswd::combined_objective(z, inputs);
  CHECK(with_hswd.total ==
        doctest::Approx(with_hswd.ls + 0.7 * with_hswd.lq).epsilon(1e-12));
  CHECK(with_hswd.ls == doctest::Approx(direct.value).epsilon(1e-15));
  CHECK(with_hswd.lq == doctest::Approx(hswd::hswd(z, target)).epsilon(1e-15));

  const auto fd_h = hswd::testutil::fd_gradient(
      [&](const RealMatrix& v) { return hswd::combined_objective(v, inputs).total; }, z);
  CHECK(hswd::testutil::rel_error(with_hswd.grad, fd_h) < 1e-5);

  inputs.lq_kind = QuantKind::swd;
  inputs.slices = &slices;
  const auto with_swd = hswd::combined_objective(z, inputs);
  const auto fd_s = hswd::testutil::fd_gradient(
      [&](const RealMatrix& v) { return hswd::combined_objective(v, inputs).total; }, z);
  CHECK(hswd::testutil::rel_error(with_swd.grad, fd_s) < 1e-5);

  CHECK_THROWS_AS(
      [&] {
        ObjectiveInputs missing = inputs;
        missing.target = nullptr;
        return hswd::combined_objective(z, missing);
      }(),
      std::invalid_argument);
}

TEST_CASE("combined objective with a zeroed similarity term is lambda times hswd") {
  // codes placed exactly on their centroids make the central loss ~ 1e-7
  const auto centroids = hswd::hadamard_centroids(2, 2);
  const std::vector<std::uint32_t> labels{0, 1};
  RealMatrix z(2, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < 2; ++k) z(i, k) = centroids.rows(i, k);
  }
  Rng rng(127);
  const auto target = hswd::sample_binary_target(2, 2, rng);

  ObjectiveInputs inputs;
  inputs.ls_kind = SimilarityKind::central_similarity;
  inputs.labels = labels;
  inputs.centroids = &centroids;
  inputs.lq_kind = QuantKind::hswd;
  inputs.lambda = 2.5;
  inputs.target = &target;

  const auto result = hswd::combined_objective(z, inputs);
  CHECK(result.ls < 1e-6);
  CHECK(result.total == doctest::Approx(2.5 * hswd::hswd(z, target)).epsilon(1e-6));
}
