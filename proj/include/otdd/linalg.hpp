#ifndef OTDD_LINALG_HPP
#define OTDD_LINALG_HPP

#include <Eigen/Core>

#include "otdd/stats.hpp"

namespace otdd {

enum class SqrtMode { exact, newton_schulz };

/// Symmetry check, relative to the largest entry magnitude.
bool is_symmetric(const Eigen::MatrixXd& a, double rtol = 1e-10);

/// Principal square root of a symmetric PSD matrix via eigendecomposition.
/// Eigenvalues within tolerance below zero are clamped to 0; anything below
/// -1e-6 * (trace/d) is rejected as non-PSD.
Eigen::MatrixXd spd_sqrt_exact(const Eigen::MatrixXd& a);

/// Coupled Newton-Schulz iteration for the SPD square root. The input is
/// scaled by 1/||A||_F so the iteration contracts, and the result rescaled
/// by sqrt(||A||_F). Stops when ||S*S - A||_F / ||A||_F <= tol. The zero
/// matrix returns zero; failure to converge within max_iters throws
/// SolverError with the final residual.
Eigen::MatrixXd spd_sqrt_newton_schulz(const Eigen::MatrixXd& a,
                                       int max_iters = 20, double tol = 1e-6);

/// Squared 2-Wasserstein distance between Gaussians:
///   ||mu_a - mu_b||^2 + tr(Sa + Sb - 2 (Sa^{1/2} Sb Sa^{1/2})^{1/2}).
/// The inner product is symmetrized before the outer root and the final
/// value clamped at 0.
double bures_w2_squared(const Eigen::VectorXd& mean_a,
                        const Eigen::MatrixXd& cov_a,
                        const Eigen::VectorXd& mean_b,
                        const Eigen::MatrixXd& cov_b,
                        SqrtMode mode = SqrtMode::exact);
double bures_w2_squared(const MomentSummary& a, const MomentSummary& b,
                        SqrtMode mode = SqrtMode::exact);

/// Commuting-covariance fast path:
///   ||mu_a - mu_b||^2 + ||Sa^{1/2} - Sb^{1/2}||_F^2.
/// Callers assert commutativity; with check_commuting set the commutator
/// norm is verified and a violation throws.
double bures_w2_squared_commuting(const Eigen::VectorXd& mean_a,
                                  const Eigen::MatrixXd& cov_a,
                                  const Eigen::VectorXd& mean_b,
                                  const Eigen::MatrixXd& cov_b,
                                  bool check_commuting = false);
double bures_w2_squared_commuting(const MomentSummary& a,
                                  const MomentSummary& b,
                                  bool check_commuting = false);

}  // namespace otdd

#endif  // OTDD_LINALG_HPP
