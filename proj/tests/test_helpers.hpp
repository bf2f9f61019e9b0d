#ifndef OTDD_TEST_HELPERS_HPP
#define OTDD_TEST_HELPERS_HPP

#include <Eigen/Core>
#include <Eigen/QR>
#include <random>
#include <vector>

#include "otdd/dataset.hpp"

namespace otdd::test {

// Random dataset with every class present, uniform weights.
inline LabeledDataset random_dataset(std::mt19937_64& rng, std::size_t n,
                                     std::size_t d, std::size_t k,
                                     double spread = 2.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::int32_t> pick(0, static_cast<std::int32_t>(k) - 1);
  Eigen::MatrixXd features(n, d);
  std::vector<std::int32_t> labels(n);
  std::vector<Eigen::VectorXd> centers(k);
  for (auto& c : centers) {
    c = Eigen::VectorXd::NullaryExpr(static_cast<Eigen::Index>(d),
                                     [&](Eigen::Index) { return spread * normal(rng); });
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto y = i < k ? static_cast<std::int32_t>(i) : pick(rng);  // every class present
    labels[i] = y;
    for (std::size_t j = 0; j < d; ++j)
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          centers[static_cast<std::size_t>(y)][static_cast<Eigen::Index>(j)] + normal(rng);
  }
  return make_dataset(std::move(features), std::move(labels));
}

// Random SPD matrix with the given condition number.
inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, int d, double cond) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd gauss =
      Eigen::MatrixXd::NullaryExpr(d, d, [&](Eigen::Index, Eigen::Index) {
        return normal(rng);
      });
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd evals(d);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < d; ++i)
    evals[i] = std::pow(cond, -unit(rng));  // log-uniform in [1/cond, 1]
  evals[0] = 1.0;
  if (d > 1) evals[1] = 1.0 / cond;
  return q * evals.asDiagonal() * q.transpose();
}

}  // namespace otdd::test

#endif  // OTDD_TEST_HELPERS_HPP
