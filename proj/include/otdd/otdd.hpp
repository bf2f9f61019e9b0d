#ifndef OTDD_OTDD_HPP
#define OTDD_OTDD_HPP

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "otdd/dataset.hpp"
#include "otdd/linalg.hpp"
#include "otdd/otsolve.hpp"
#include "otdd/stats.hpp"

namespace otdd {

enum class LabelMethod { exact, gaussian, means };
enum class OuterSolver { sinkhorn, exact };

std::string to_string(LabelMethod m);
std::string to_string(OuterSolver s);
LabelMethod label_method_from_string(const std::string& s);
OuterSolver outer_solver_from_string(const std::string& s);

struct OtddConfig {
  LabelMethod label_method = LabelMethod::gaussian;
  int inner_p = 2;     // Wasserstein order of the label metric; fixed at 2
  int outer_q = 2;     // 1: cost = d_Z, distance = objective
                       // 2: cost = d_Z^2, distance = sqrt(objective)
  OuterSolver outer_solver = OuterSolver::sinkhorn;
  double epsilon = 0.0;      // absolute; 0 means adaptive epsilon_rel * mean cost
  double epsilon_rel = 0.1;  // relative to the mean ground-cost entry
  double tol = 1e-6;
  int max_iters = 5000;
  double cov_reg = 1e-6;  // relative diagonal regularization of class covariances
  SqrtMode sqrt_mode = SqrtMode::exact;
  std::uint64_t seed = 0;
  std::size_t max_samples = 0;  // 0 = no subsampling
  bool diagonal_cov = false;    // diagonal covariance approximation
  bool keep_plan = false;
  bool exact_fallback_sinkhorn = false;  // inner exact problems over the cap
  std::size_t exact_cap = 4'000'000;
  int threads = 0;

  void validate() const;
};

/// k_A x k_B matrix of squared label-to-label 2-Wasserstein distances.
struct LabelDistanceMatrix {
  Eigen::MatrixXd values;
  LabelMethod method = LabelMethod::gaussian;
  // inner solver record, meaningful for the exact method
  double inner_epsilon = 0.0;
  double inner_tol = 0.0;
  int inner_max_iters = 0;
};

struct StageTimings {
  double subsample = 0.0;
  double moments = 0.0;
  double label_matrix = 0.0;
  double ground_cost = 0.0;
  double outer_solve = 0.0;
  double total = 0.0;
};

struct OtddResult {
  double distance = 0.0;       // raw_objective^(1/q)
  double raw_objective = 0.0;  // outer transport cost
  LabelDistanceMatrix label_distances;
  std::optional<TransportPlan> plan;
  std::size_t n = 0, m = 0, k_src = 0, k_tgt = 0, d = 0;
  OtddConfig config;        // echo of the resolved configuration
  double epsilon_used = 0;  // absolute epsilon of the outer solve (0 = exact)
  bool converged = true;
  int iterations = 0;
  double marginal_error = 0.0;
  StageTimings timings;
};

/// Pairwise Bures distances between two moment maps.
LabelDistanceMatrix label_distance_matrix_gaussian(
    const std::vector<MomentSummary>& moments_a,
    const std::vector<MomentSummary>& moments_b,
    SqrtMode mode = SqrtMode::exact, int threads = 0);

/// Empirical label distances: squared-Euclidean-cost OT between the uniform
/// measures on each class pair, i.e. W_2^2 of the empirical class measures.
LabelDistanceMatrix label_distance_matrix_exact(const LabeledDataset& a,
                                                const LabeledDataset& b,
                                                const OtddConfig& cfg = {});

/// Centroid baseline: squared distance between class means.
LabelDistanceMatrix label_distance_matrix_means(
    const std::vector<MomentSummary>& moments_a,
    const std::vector<MomentSummary>& moments_b);

/// Hybrid ground cost over feature-label pairs. With the inner order fixed
/// at 2, s_ij = ||x_i - x'_j||^2 + L[y_i][y'_j]; entries are s_ij for q=2
/// and sqrt(s_ij) for q=1. The feature term uses the Gram expansion with
/// negative round-off clamped to 0.
Eigen::MatrixXd ground_cost(const LabeledDataset& a, const LabeledDataset& b,
                            const LabelDistanceMatrix& label_distances, int q,
                            int threads = 0);

/// The dataset distance: subsample -> moments -> label matrix -> ground
/// cost -> outer OT -> objective^(1/q), with per-stage wall times recorded.
OtddResult otdd_distance(const LabeledDataset& a, const LabeledDataset& b,
                         const OtddConfig& cfg = {});

/// Augmented representation [x; mu_y; sqrt diag(Sigma_y)] per row, valid in
/// diagonal-covariance mode: squared Euclidean distances between augmented
/// vectors equal the q=2 ground cost. Non-diagonal covariances require
/// force_diagonal (the diagonal-approximation flag) and are diagonalized.
Eigen::MatrixXd augmented_embed(const LabeledDataset& ds,
                                const std::vector<MomentSummary>& moments,
                                bool force_diagonal);

/// Dataset distance through the augmented embedding; equals otdd_distance
/// with the gaussian label method and diagonal covariances, without
/// materializing the label-distance matrix.
OtddResult otdd_distance_augmented(const LabeledDataset& a,
                                   const LabeledDataset& b,
                                   const OtddConfig& cfg = {});

}  // namespace otdd

#endif  // OTDD_OTDD_HPP
