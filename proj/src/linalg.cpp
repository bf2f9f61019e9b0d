#include "otdd/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "otdd/errors.hpp"

namespace otdd {

bool is_symmetric(const Eigen::MatrixXd& a, double rtol) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= rtol * scale;
}

namespace {

void require_square_symmetric(const Eigen::MatrixXd& a, const char* who) {
  if (a.rows() != a.cols())
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  if (!is_symmetric(a))
    throw std::invalid_argument(std::string(who) + ": matrix must be symmetric");
}

}  // namespace

Eigen::MatrixXd spd_sqrt_exact(const Eigen::MatrixXd& a) {
  require_square_symmetric(a, "spd_sqrt_exact");
  const auto d = a.rows();
  if (d == 0) return a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success)
    throw SolverError("spd_sqrt_exact: eigendecomposition failed");
  Eigen::VectorXd evals = es.eigenvalues();
  const double scale = std::max(a.trace() / static_cast<double>(d),
                                std::numeric_limits<double>::min());
  for (Eigen::Index i = 0; i < d; ++i) {
    if (evals[i] < -1e-6 * scale) {
      std::ostringstream msg;
      msg << "spd_sqrt_exact: input not PSD, eigenvalue " << evals[i]
          << " below -1e-6 * " << scale;
      throw std::invalid_argument(msg.str());
    }
    evals[i] = std::max(evals[i], 0.0);
  }
  const Eigen::MatrixXd root = es.eigenvectors() *
                               evals.cwiseSqrt().asDiagonal() *
                               es.eigenvectors().transpose();
  return ((root + root.transpose()) * 0.5).eval();
}

Eigen::MatrixXd spd_sqrt_newton_schulz(const Eigen::MatrixXd& a, int max_iters,
                                       double tol) {
  require_square_symmetric(a, "spd_sqrt_newton_schulz");
  const auto d = a.rows();
  const double norm = a.norm();
  if (norm == 0.0) return Eigen::MatrixXd::Zero(d, d);  // zero covariance

  // Scale so that ||Y0|| <= 1, which puts the iteration in its basin.
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd y = a / norm;
  Eigen::MatrixXd z = identity;
  const double root_norm = std::sqrt(norm);

  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::MatrixXd t = 0.5 * (3.0 * identity - z * y);
    y = (y * t).eval();
    z = (t * z).eval();
    const Eigen::MatrixXd candidate = root_norm * ((y + y.transpose()) * 0.5);
    residual = (candidate * candidate - a).norm() / norm;
    if (residual <= tol) return candidate;
    if (!candidate.allFinite())
      throw SolverError("spd_sqrt_newton_schulz: iteration diverged");
  }
  std::ostringstream msg;
  msg << "spd_sqrt_newton_schulz: no convergence in " << max_iters
      << " iterations, final residual " << residual << " > tol " << tol;
  throw SolverError(msg.str());
}

namespace {

Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& a, SqrtMode mode) {
  return mode == SqrtMode::exact ? spd_sqrt_exact(a)
                                 : spd_sqrt_newton_schulz(a);
}

}  // namespace

double bures_w2_squared(const Eigen::VectorXd& mean_a,
                        const Eigen::MatrixXd& cov_a,
                        const Eigen::VectorXd& mean_b,
                        const Eigen::MatrixXd& cov_b, SqrtMode mode) {
  if (mean_a.size() != mean_b.size() || cov_a.rows() != cov_b.rows())
    throw DataError("bures_w2_squared: dimension mismatch");
  const Eigen::MatrixXd root_a = spd_sqrt(cov_a, mode);
  Eigen::MatrixXd inner = root_a * cov_b * root_a;
  inner = ((inner + inner.transpose()) * 0.5).eval();
  const Eigen::MatrixXd cross = spd_sqrt(inner, mode);
  const double value = (mean_a - mean_b).squaredNorm() + cov_a.trace() +
                       cov_b.trace() - 2.0 * cross.trace();
  return std::max(value, 0.0);
}

double bures_w2_squared(const MomentSummary& a, const MomentSummary& b,
                        SqrtMode mode) {
  return bures_w2_squared(a.mean, a.covariance, b.mean, b.covariance, mode);
}

double bures_w2_squared_commuting(const Eigen::VectorXd& mean_a,
                                  const Eigen::MatrixXd& cov_a,
                                  const Eigen::VectorXd& mean_b,
                                  const Eigen::MatrixXd& cov_b,
                                  bool check_commuting) {
  if (mean_a.size() != mean_b.size() || cov_a.rows() != cov_b.rows())
    throw DataError("bures_w2_squared_commuting: dimension mismatch");
  if (check_commuting) {
    const double scale =
        std::max(cov_a.norm() * cov_b.norm(), std::numeric_limits<double>::min());
    const double comm = (cov_a * cov_b - cov_b * cov_a).norm();
    if (comm > 1e-8 * scale) {
      std::ostringstream msg;
      msg << "bures_w2_squared_commuting: covariances do not commute, "
          << "||AB-BA|| = " << comm << " > 1e-8 * " << scale;
      throw std::invalid_argument(msg.str());
    }
  }
  const Eigen::MatrixXd root_a = spd_sqrt_exact(cov_a);
  const Eigen::MatrixXd root_b = spd_sqrt_exact(cov_b);
  const double value =
      (mean_a - mean_b).squaredNorm() + (root_a - root_b).squaredNorm();
  return std::max(value, 0.0);
}

double bures_w2_squared_commuting(const MomentSummary& a,
                                  const MomentSummary& b,
                                  bool check_commuting) {
  return bures_w2_squared_commuting(a.mean, a.covariance, b.mean, b.covariance,
                                    check_commuting);
}

}  // namespace otdd
