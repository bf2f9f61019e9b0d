#ifndef OTDD_STATS_HPP
#define OTDD_STATS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "otdd/dataset.hpp"

namespace otdd {

/// First and second moments of one class: sample mean, population
/// covariance (1/n_y normalization) plus `regularizer * I`, and the sample
/// count. A singleton class has covariance = regularizer * I.
struct MomentSummary {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  std::size_t count = 0;
  double regularizer = 0.0;

  std::size_t dim() const { return static_cast<std::size_t>(mean.size()); }
};

/// Two-pass streaming moments for one class. Pass 1 accumulates the mean
/// over batches of `batch_size` rows, pass 2 the centered scatter; memory
/// stays O(batch_size * d + d^2) regardless of the class size. `reg` is the
/// absolute value added to the covariance diagonal.
MomentSummary class_moments(const LabeledDataset& ds, int class_id,
                            std::size_t batch_size, double reg);

/// class_moments for every class, indexed by class id. Classes are
/// processed independently and may run on several threads.
std::vector<MomentSummary> all_moments(const LabeledDataset& ds,
                                       std::size_t batch_size, double reg,
                                       int threads = 0);

/// Scale-relative regularization: adds rel * trace(cov)/d to the diagonal
/// and records it. A zero covariance stays zero.
void apply_relative_regularization(MomentSummary& m, double rel);
void apply_relative_regularization(std::vector<MomentSummary>& ms, double rel);

/// Zero out all off-diagonal covariance entries (diagonal approximation).
void diagonalize_covariance(MomentSummary& m);

/// Moment cache, magic "OTDDMOM1": u64 k, u64 d, then per class
/// u64 class id, u64 count, f64 regularizer, d f64 mean, d*d f64 covariance
/// row-major.
void save_moments(const std::vector<MomentSummary>& moments,
                  const std::string& path);
std::vector<MomentSummary> load_moments(const std::string& path);

}  // namespace otdd

#endif  // OTDD_STATS_HPP
