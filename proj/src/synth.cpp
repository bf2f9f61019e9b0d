#include "otdd/synth.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace otdd {

LabeledDataset gaussian_mixture(const MixtureSpec& spec, std::uint64_t seed) {
  if (spec.n == 0 || spec.d == 0 || spec.k == 0)
    throw std::invalid_argument("mixture needs n, d, k >= 1");
  if (spec.n < spec.k)
    throw std::invalid_argument("mixture needs at least one sample per class");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.7, 1.3);

  const auto d = static_cast<Eigen::Index>(spec.d);
  std::vector<Eigen::VectorXd> centers(spec.k);
  std::vector<double> spread(spec.k);
  for (std::size_t c = 0; c < spec.k; ++c) {
    Eigen::VectorXd center = Eigen::VectorXd::Zero(d);
    if (spec.axis_centers) {
      // Scaled coordinate axes: pairwise separation is guaranteed.
      const auto axis = static_cast<Eigen::Index>(c % spec.d);
      center[axis] = spec.separation * (1.0 + static_cast<double>(c / spec.d));
    } else {
      for (Eigen::Index j = 0; j < d; ++j)
        center[j] = spec.separation * normal(rng);
    }
    centers[c] = center;
    spread[c] = spec.noise * unit(rng);
  }

  // Balanced class sizes, remainder to the first classes.
  std::vector<std::size_t> counts(spec.k, spec.n / spec.k);
  for (std::size_t c = 0; c < spec.n % spec.k; ++c) ++counts[c];

  Eigen::MatrixXd features(static_cast<Eigen::Index>(spec.n), d);
  std::vector<std::int32_t> labels;
  labels.reserve(spec.n);
  Eigen::Index row = 0;
  for (std::size_t c = 0; c < spec.k; ++c) {
    for (std::size_t s = 0; s < counts[c]; ++s, ++row) {
      for (Eigen::Index j = 0; j < d; ++j)
        features(row, j) = centers[c][j] + spread[c] * normal(rng);
      labels.push_back(static_cast<std::int32_t>(c));
    }
  }

  // Shuffle rows so batches mix classes.
  std::vector<std::size_t> order(spec.n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  Eigen::MatrixXd shuffled(features.rows(), features.cols());
  std::vector<std::int32_t> shuffled_labels(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    shuffled.row(static_cast<Eigen::Index>(i)) =
        features.row(static_cast<Eigen::Index>(order[i]));
    shuffled_labels[i] = labels[order[i]];
  }

  std::vector<std::string> names;
  names.reserve(spec.k);
  for (std::size_t c = 0; c < spec.k; ++c) names.push_back("class_" + std::to_string(c));
  return make_dataset(std::move(shuffled), std::move(shuffled_labels),
                      std::move(names));
}

}  // namespace otdd
