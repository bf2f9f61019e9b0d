#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <filesystem>
#include <random>

#include "otdd/dataset.hpp"
#include "otdd/errors.hpp"
#include "otdd/stats.hpp"
#include "test_helpers.hpp"

using namespace otdd;

namespace {

// Oracle: naive full-memory mean and population covariance.
MomentSummary naive_moments(const LabeledDataset& ds, int class_id, double reg) {
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (ds.labels[i] == class_id) rows.push_back(static_cast<Eigen::Index>(i));
  Eigen::MatrixXd block(static_cast<Eigen::Index>(rows.size()), ds.features.cols());
  for (std::size_t r = 0; r < rows.size(); ++r)
    block.row(static_cast<Eigen::Index>(r)) = ds.features.row(rows[r]);
  MomentSummary m;
  m.mean = block.colwise().mean();
  const Eigen::MatrixXd centered = block.rowwise() - m.mean.transpose();
  m.covariance =
      centered.transpose() * centered / static_cast<double>(rows.size());
  m.covariance.diagonal().array() += reg;
  m.count = rows.size();
  m.regularizer = reg;
  return m;
}

}  // namespace

TEST_CASE("two symmetric points give diag(1,0) covariance") {
  Eigen::MatrixXd features(2, 2);
  features << 1, 0, -1, 0;
  const auto ds = make_dataset(features, {0, 0});
  const double lambda = 1e-4;
  const auto m = class_moments(ds, 0, 1, lambda);
  CHECK(m.mean.norm() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(m.covariance(0, 0) == doctest::Approx(1.0 + lambda));
  CHECK(m.covariance(1, 1) == doctest::Approx(lambda));
  CHECK(m.covariance(0, 1) == doctest::Approx(0.0));
  CHECK(m.count == 2);
}

TEST_CASE("singleton class has covariance lambda*I") {
  Eigen::MatrixXd features(3, 2);
  features << 5, -2, 0, 0, 1, 1;
  const auto ds = make_dataset(features, {0, 1, 1});
  const auto m = class_moments(ds, 0, 4, 0.5);
  CHECK(m.count == 1);
  CHECK(m.mean(0) == 5.0);
  CHECK(m.mean(1) == -2.0);
  CHECK((m.covariance - 0.5 * Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("streaming matches Monte Carlo generator within sampling error") {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = 1000, d = 3;
  Eigen::VectorXd mu_true(d);
  mu_true << 2.0, -1.0, 0.5;
  Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(
      d, d, [&](Eigen::Index, Eigen::Index) { return normal(rng); });
  const Eigen::MatrixXd sigma_true =
      a * a.transpose() / d + Eigen::MatrixXd::Identity(d, d) * 0.5;
  const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(sigma_true).matrixL();

  Eigen::MatrixXd features(n, d);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd z(d);
    for (int j = 0; j < d; ++j) z[j] = normal(rng);
    features.row(i) = (mu_true + chol * z).transpose();
  }
  const auto ds = make_dataset(features, std::vector<std::int32_t>(n, 0));
  const auto m = class_moments(ds, 0, 128, 0.0);

  // standard errors: ||mu_hat - mu|| ~ sqrt(tr(Sigma)/n)
  const double se_mean = std::sqrt(sigma_true.trace() / n);
  CHECK((m.mean - mu_true).norm() < 5 * se_mean);
  const double se_cov = sigma_true.norm() * std::sqrt(2.0 / n);
  CHECK((m.covariance - sigma_true).norm() < 5 * se_cov);

  // and the streaming result equals the naive oracle to round-off
  const auto oracle = naive_moments(ds, 0, 0.0);
  CHECK((m.mean - oracle.mean).norm() <= 1e-12 * (1 + oracle.mean.norm()));
  CHECK((m.covariance - oracle.covariance).norm() <=
        1e-12 * (1 + oracle.covariance.norm()));
}

TEST_CASE("batch size does not change the result") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ds = test::random_dataset(rng, 50 + trial * 13, 4, 3);
    const auto index = class_partition(ds);
    for (std::size_t c = 0; c < ds.num_classes(); ++c) {
      const auto m1 = class_moments(ds, static_cast<int>(c), 1, 1e-6);
      const auto m7 = class_moments(ds, static_cast<int>(c), 7, 1e-6);
      const auto mn = class_moments(ds, static_cast<int>(c), ds.size(), 1e-6);
      const double scale = 1 + mn.covariance.norm();
      CHECK((m1.mean - mn.mean).norm() <= 1e-10 * (1 + mn.mean.norm()));
      CHECK((m7.mean - mn.mean).norm() <= 1e-10 * (1 + mn.mean.norm()));
      CHECK((m1.covariance - mn.covariance).norm() <= 1e-10 * scale);
      CHECK((m7.covariance - mn.covariance).norm() <= 1e-10 * scale);
      CHECK(m1.count == index.groups[c].size());
    }
  }
}

TEST_CASE("all_moments matches class_moments and ignores row order") {
  std::mt19937_64 rng(31);
  const auto ds = test::random_dataset(rng, 80, 3, 4);
  const auto all = all_moments(ds, 16, 1e-8);
  REQUIRE(all.size() == 4);
  for (std::size_t c = 0; c < 4; ++c) {
    const auto single = class_moments(ds, static_cast<int>(c), 16, 1e-8);
    CHECK((all[c].mean - single.mean).norm() == 0.0);
    CHECK((all[c].covariance - single.covariance).norm() == 0.0);
  }

  // permute rows: summaries unchanged within 1e-10
  std::vector<std::size_t> perm(ds.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXd permuted(ds.features.rows(), ds.features.cols());
  std::vector<std::int32_t> permuted_labels(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    permuted.row(static_cast<Eigen::Index>(i)) =
        ds.features.row(static_cast<Eigen::Index>(perm[i]));
    permuted_labels[i] = ds.labels[perm[i]];
  }
  const auto shuffled =
      all_moments(make_dataset(permuted, permuted_labels, ds.label_names), 16, 1e-8);
  for (std::size_t c = 0; c < 4; ++c) {
    const double scale = 1 + all[c].covariance.norm();
    CHECK((shuffled[c].mean - all[c].mean).norm() <= 1e-10 * (1 + all[c].mean.norm()));
    CHECK((shuffled[c].covariance - all[c].covariance).norm() <= 1e-10 * scale);
  }
}

TEST_CASE("single-class dataset yields one summary") {
  std::mt19937_64 rng(37);
  const auto ds = test::random_dataset(rng, 30, 2, 1);
  const auto all = all_moments(ds, 8, 0.0);
  REQUIRE(all.size() == 1);
  const auto single = class_moments(ds, 0, 8, 0.0);
  CHECK((all[0].covariance - single.covariance).norm() == 0.0);
}

TEST_CASE("regularized covariance stays PSD above lambda") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ds = test::random_dataset(rng, 12, 6, 2);  // n_y < d: singular
    auto moments = all_moments(ds, 4, 0.0);
    apply_relative_regularization(moments, 1e-6);
    for (const auto& m : moments) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.covariance);
      CHECK(es.eigenvalues().minCoeff() >= m.regularizer - 1e-9);
      CHECK((m.covariance - m.covariance.transpose()).norm() <=
            1e-10 * (1 + m.covariance.norm()));
    }
  }
}

TEST_CASE("unknown class id and bad batch size are rejected") {
  std::mt19937_64 rng(47);
  const auto ds = test::random_dataset(rng, 10, 2, 2);
  CHECK_THROWS_AS(class_moments(ds, 5, 4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(class_moments(ds, -1, 4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(class_moments(ds, 0, 0, 0.0), std::invalid_argument);
}

TEST_CASE("moment cache round trip") {
  std::mt19937_64 rng(53);
  const auto ds = test::random_dataset(rng, 40, 3, 3);
  auto moments = all_moments(ds, 8, 0.0);
  apply_relative_regularization(moments, 1e-6);
  const auto path =
      (std::filesystem::temp_directory_path() / "otdd_moments.bin").string();
  save_moments(moments, path);
  const auto loaded = load_moments(path);
  REQUIRE(loaded.size() == moments.size());
  for (std::size_t c = 0; c < moments.size(); ++c) {
    CHECK(loaded[c].count == moments[c].count);
    CHECK(loaded[c].regularizer == moments[c].regularizer);
    CHECK(loaded[c].mean == moments[c].mean);
    CHECK(loaded[c].covariance == moments[c].covariance);
  }
  std::filesystem::remove(path);
}
