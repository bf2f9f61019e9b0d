#include <doctest.h>

#include <random>

#include "otdd/errors.hpp"
#include "otdd/linalg.hpp"
#include "test_helpers.hpp"

using namespace otdd;

namespace {

MomentSummary gaussian(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
  MomentSummary m;
  m.mean = mean;
  m.covariance = cov;
  m.count = 1;
  return m;
}

}  // namespace

TEST_CASE("exact sqrt: identity and diagonal cases") {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
  CHECK((spd_sqrt_exact(eye) - eye).norm() <= 1e-14);

  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag(0, 0) = 4.0;
  diag(1, 1) = 9.0;
  const auto root = spd_sqrt_exact(diag);
  CHECK(root(0, 0) == doctest::Approx(2.0));
  CHECK(root(1, 1) == doctest::Approx(3.0));
  CHECK(root(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("exact sqrt: residual on random SPD") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd m = Eigen::MatrixXd::NullaryExpr(
        8, 8, [&](Eigen::Index, Eigen::Index) { return normal(rng); });
    const Eigen::MatrixXd a = m.transpose() * m;
    const auto root = spd_sqrt_exact(a);
    CHECK((root * root - a).norm() / a.norm() <= 1e-8);
    CHECK(is_symmetric(root));
  }
}

TEST_CASE("exact sqrt rejects indefinite input") {
  Eigen::MatrixXd indefinite = Eigen::MatrixXd::Identity(2, 2);
  indefinite(1, 1) = -1.0;
  CHECK_THROWS_AS(spd_sqrt_exact(indefinite), std::invalid_argument);
}

TEST_CASE("newton-schulz: identity maps to identity, zero passes through") {
  // The 1x1 identity has unit Frobenius norm, so it is a one-iteration
  // fixed point of the scaled iteration.
  const Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
  CHECK((spd_sqrt_newton_schulz(one, 1, 1e-12) - one).norm() <= 1e-15);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(4, 4);
  CHECK((spd_sqrt_newton_schulz(eye) - eye).norm() <= 1e-6);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
  CHECK(spd_sqrt_newton_schulz(zero).norm() == 0.0);
}

TEST_CASE("newton-schulz agrees with the exact route") {
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag(0, 0) = 1.0;
  diag(1, 1) = 100.0;
  const auto ns = spd_sqrt_newton_schulz(diag, 30, 1e-6);
  const auto exact = spd_sqrt_exact(diag);
  CHECK((ns - exact).norm() / exact.norm() <= 1e-5);

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 31);
    const double cond = std::pow(10.0, 1 + rng() % 4);  // up to 1e4
    const Eigen::MatrixXd a = test::random_spd(rng, d, cond);
    const auto approx = spd_sqrt_newton_schulz(a, 30, 1e-9);
    const auto truth = spd_sqrt_exact(a);
    CHECK((approx - truth).norm() / truth.norm() <= 1e-5);
  }
}

TEST_CASE("newton-schulz reports non-convergence with the residual") {
  std::mt19937_64 rng(17);
  const Eigen::MatrixXd a = test::random_spd(rng, 8, 1e4);
  CHECK_THROWS_WITH_AS(spd_sqrt_newton_schulz(a, 2, 1e-12),
                       doctest::Contains("residual"), SolverError);
}

TEST_CASE("bures: identical Gaussians are at distance zero") {
  std::mt19937_64 rng(19);
  const Eigen::MatrixXd cov = test::random_spd(rng, 4, 100.0);
  const Eigen::VectorXd mean = Eigen::VectorXd::Random(4);
  const auto g = gaussian(mean, cov);
  CHECK(bures_w2_squared(g, g) <= 1e-10);
}

TEST_CASE("bures: pure mean shift with identical covariances") {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd mu_a(2), mu_b(2);
  mu_a << 0, 0;
  mu_b << 3, 4;
  CHECK(bures_w2_squared(gaussian(mu_a, eye), gaussian(mu_b, eye)) ==
        doctest::Approx(25.0).epsilon(1e-10));
}

TEST_CASE("bures: scalar case") {
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  Eigen::MatrixXd v1(1, 1), v4(1, 1);
  v1 << 1.0;
  v4 << 4.0;
  CHECK(bures_w2_squared(gaussian(zero, v1), gaussian(zero, v4)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bures: commuting diagonal pair matches both formulas") {
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd cov_a = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd cov_b = Eigen::MatrixXd::Zero(2, 2);
  cov_a.diagonal() << 1, 4;
  cov_b.diagonal() << 4, 1;
  const auto a = gaussian(zero, cov_a);
  const auto b = gaussian(zero, cov_b);
  CHECK(bures_w2_squared(a, b) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(bures_w2_squared_commuting(a, b, true) ==
        doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("commuting formula agrees with the general one on diagonals") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.1, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 16;
    Eigen::MatrixXd cov_a = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd cov_b = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      cov_a(i, i) = unit(rng);
      cov_b(i, i) = unit(rng);
    }
    Eigen::VectorXd mu_a = Eigen::VectorXd::Random(d);
    Eigen::VectorXd mu_b = Eigen::VectorXd::Random(d);
    const double general = bures_w2_squared(mu_a, cov_a, mu_b, cov_b);
    const double fast = bures_w2_squared_commuting(mu_a, cov_a, mu_b, cov_b);
    CHECK(fast == doctest::Approx(general).epsilon(1e-8));
  }

  // equal covariances, shifted means
  const Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(3, 3) * 2.0;
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd shift(3);
  shift << 1, -2, 2;
  CHECK(bures_w2_squared_commuting(mu, cov, shift, cov) ==
        doctest::Approx(shift.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("commuting check flags non-commuting covariances") {
  std::mt19937_64 rng(29);
  const Eigen::MatrixXd cov_a = test::random_spd(rng, 4, 50.0);
  const Eigen::MatrixXd cov_b = test::random_spd(rng, 4, 50.0);
  const Eigen::VectorXd mu = Eigen::VectorXd::Zero(4);
  CHECK_THROWS_AS(bures_w2_squared_commuting(mu, cov_a, mu, cov_b, true),
                  std::invalid_argument);
}

TEST_CASE("bures is symmetric and never negative") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 6);
    const auto a = gaussian(Eigen::VectorXd::Random(d) * 3,
                            test::random_spd(rng, d, 1000.0));
    const auto b = gaussian(Eigen::VectorXd::Random(d) * 3,
                            test::random_spd(rng, d, 1000.0));
    const double ab = bures_w2_squared(a, b);
    const double ba = bures_w2_squared(b, a);
    CHECK(ab >= 0.0);
    CHECK(std::abs(ab - ba) <= 1e-8 * std::max(1.0, std::abs(ab)));
  }
}

TEST_CASE("sqrt of bures satisfies the triangle inequality") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 3;
    const auto a = gaussian(Eigen::VectorXd::Random(d) * 2,
                            test::random_spd(rng, d, 100.0));
    const auto b = gaussian(Eigen::VectorXd::Random(d) * 2,
                            test::random_spd(rng, d, 100.0));
    const auto c = gaussian(Eigen::VectorXd::Random(d) * 2,
                            test::random_spd(rng, d, 100.0));
    const double ab = std::sqrt(bures_w2_squared(a, b));
    const double bc = std::sqrt(bures_w2_squared(b, c));
    const double ac = std::sqrt(bures_w2_squared(a, c));
    CHECK(ac <= ab + bc + 1e-8);
  }
}

TEST_CASE("bures rejects dimension mismatch") {
  const auto a = gaussian(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2));
  const auto b = gaussian(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3));
  CHECK_THROWS_AS(bures_w2_squared(a, b), DataError);
}
