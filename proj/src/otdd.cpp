#include "otdd/otdd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "otdd/errors.hpp"
#include "otdd/parallel.hpp"

namespace otdd {

namespace {

class StopWatch {
 public:
  StopWatch() : start_(std::chrono::steady_clock::now()) {}
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

constexpr std::size_t kMomentBatch = 1024;

void require_same_dim(const LabeledDataset& a, const LabeledDataset& b) {
  if (a.dim() != b.dim())
    throw DataError("feature dimensions differ: " + std::to_string(a.dim()) +
                    " vs " + std::to_string(b.dim()));
}

// Squared Euclidean distances via the Gram expansion, negative round-off
// clamped to zero.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& b, int threads) {
  const Eigen::VectorXd a_sq = a.rowwise().squaredNorm();
  const Eigen::VectorXd b_sq = b.rowwise().squaredNorm();
  Eigen::MatrixXd out = -2.0 * (a * b.transpose());
  parallel_blocks(static_cast<std::size_t>(out.rows()), threads,
                  [&](std::size_t lo, std::size_t hi) {
                    for (std::size_t i = lo; i < hi; ++i) {
                      const auto idx = static_cast<Eigen::Index>(i);
                      out.row(idx) =
                          (out.row(idx).array() + a_sq[idx] +
                           b_sq.transpose().array())
                              .max(0.0);
                    }
                  });
  return out;
}

std::vector<MomentSummary> pipeline_moments(const LabeledDataset& ds,
                                            const OtddConfig& cfg) {
  auto moments = all_moments(ds, kMomentBatch, 0.0, cfg.threads);
  if (cfg.diagonal_cov)
    for (auto& m : moments) diagonalize_covariance(m);
  apply_relative_regularization(moments, cfg.cov_reg);
  return moments;
}

TransportPlan outer_solve(const DiscreteMeasure& a, const DiscreteMeasure& b,
                          const Eigen::MatrixXd& cost, const OtddConfig& cfg,
                          double& epsilon_used) {
  if (cfg.outer_solver == OuterSolver::exact) {
    epsilon_used = 0.0;
    ExactOtOptions opt;
    opt.max_entries = cfg.exact_cap;
    return exact_ot(a, b, cost, opt);
  }
  SinkhornOptions opt;
  opt.epsilon = cfg.epsilon > 0.0 ? cfg.epsilon : cfg.epsilon_rel * cost.mean();
  opt.tol = cfg.tol;
  opt.max_iters = cfg.max_iters;
  opt.threads = cfg.threads;
  epsilon_used = opt.epsilon;
  return sinkhorn(a, b, cost, opt);
}

void finish_result(OtddResult& result, TransportPlan&& plan,
                   const OtddConfig& cfg) {
  result.raw_objective = std::max(plan.objective, 0.0);
  result.distance = cfg.outer_q == 2 ? std::sqrt(result.raw_objective)
                                     : result.raw_objective;
  result.converged = plan.converged;
  result.iterations = plan.iterations;
  result.marginal_error = plan.marginal_error;
  if (cfg.keep_plan) result.plan = std::move(plan);
}

}  // namespace

std::string to_string(LabelMethod m) {
  switch (m) {
    case LabelMethod::exact: return "exact";
    case LabelMethod::gaussian: return "gaussian";
    case LabelMethod::means: return "means";
  }
  return "?";
}

std::string to_string(OuterSolver s) {
  return s == OuterSolver::sinkhorn ? "sinkhorn" : "exact";
}

LabelMethod label_method_from_string(const std::string& s) {
  if (s == "exact") return LabelMethod::exact;
  if (s == "gaussian") return LabelMethod::gaussian;
  if (s == "means") return LabelMethod::means;
  throw std::invalid_argument("unknown label method '" + s + "'");
}

OuterSolver outer_solver_from_string(const std::string& s) {
  if (s == "sinkhorn") return OuterSolver::sinkhorn;
  if (s == "exact") return OuterSolver::exact;
  throw std::invalid_argument("unknown outer solver '" + s + "'");
}

void OtddConfig::validate() const {
  if (inner_p != 2)
    throw std::invalid_argument("inner Wasserstein order is fixed at 2");
  if (outer_q != 1 && outer_q != 2)
    throw std::invalid_argument("outer order q must be 1 or 2");
  if (outer_solver == OuterSolver::sinkhorn && epsilon == 0.0 &&
      !(epsilon_rel > 0.0))
    throw std::invalid_argument("sinkhorn needs epsilon > 0");
  if (epsilon < 0.0 || epsilon_rel < 0.0)
    throw std::invalid_argument("epsilon must be nonnegative");
  if (cov_reg < 0.0)
    throw std::invalid_argument("covariance regularization must be nonnegative");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
}

LabelDistanceMatrix label_distance_matrix_gaussian(
    const std::vector<MomentSummary>& moments_a,
    const std::vector<MomentSummary>& moments_b, SqrtMode mode, int threads) {
  if (moments_a.empty() || moments_b.empty())
    throw std::invalid_argument("empty moment map");
  if (moments_a.front().dim() != moments_b.front().dim())
    throw DataError("moment dimensions differ between datasets");
  const std::size_t ka = moments_a.size();
  const std::size_t kb = moments_b.size();
  LabelDistanceMatrix out;
  out.method = LabelMethod::gaussian;
  out.values.resize(static_cast<Eigen::Index>(ka), static_cast<Eigen::Index>(kb));
  parallel_blocks(ka * kb, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      const auto y = static_cast<Eigen::Index>(p / kb);
      const auto yp = static_cast<Eigen::Index>(p % kb);
      out.values(y, yp) = bures_w2_squared(
          moments_a[static_cast<std::size_t>(y)],
          moments_b[static_cast<std::size_t>(yp)], mode);
    }
  });
  return out;
}

LabelDistanceMatrix label_distance_matrix_exact(const LabeledDataset& a,
                                                const LabeledDataset& b,
                                                const OtddConfig& cfg) {
  require_same_dim(a, b);
  const auto groups_a = class_partition(a).groups;
  const auto groups_b = class_partition(b).groups;
  const std::size_t ka = groups_a.size();
  const std::size_t kb = groups_b.size();

  LabelDistanceMatrix out;
  out.method = LabelMethod::exact;
  out.inner_epsilon = cfg.epsilon;
  out.inner_tol = cfg.tol;
  out.inner_max_iters = cfg.max_iters;
  out.values.resize(static_cast<Eigen::Index>(ka), static_cast<Eigen::Index>(kb));

  // Class pairs are independent; the inner solves stay single-threaded.
  std::vector<Eigen::MatrixXd> feats_a(ka), feats_b(kb);
  for (std::size_t c = 0; c < ka; ++c) {
    feats_a[c].resize(static_cast<Eigen::Index>(groups_a[c].size()), a.features.cols());
    for (std::size_t r = 0; r < groups_a[c].size(); ++r)
      feats_a[c].row(static_cast<Eigen::Index>(r)) = a.features.row(groups_a[c][r]);
  }
  for (std::size_t c = 0; c < kb; ++c) {
    feats_b[c].resize(static_cast<Eigen::Index>(groups_b[c].size()), b.features.cols());
    for (std::size_t r = 0; r < groups_b[c].size(); ++r)
      feats_b[c].row(static_cast<Eigen::Index>(r)) = b.features.row(groups_b[c][r]);
  }

  parallel_blocks(ka * kb, cfg.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      const std::size_t y = p / kb;
      const std::size_t yp = p % kb;
      const Eigen::MatrixXd cost = squared_distances(feats_a[y], feats_b[yp], 1);
      const auto mu = DiscreteMeasure::uniform(static_cast<std::size_t>(cost.rows()));
      const auto nu = DiscreteMeasure::uniform(static_cast<std::size_t>(cost.cols()));
      const std::size_t entries =
          static_cast<std::size_t>(cost.rows()) * static_cast<std::size_t>(cost.cols());
      double value = 0.0;
      if (entries > cfg.exact_cap) {
        if (!cfg.exact_fallback_sinkhorn)
          throw SolverError(
              "label pair (" + std::to_string(y) + "," + std::to_string(yp) +
              ") exceeds the exact-solver cap; enable the sinkhorn fallback");
        SinkhornOptions opt;
        opt.epsilon = cfg.epsilon > 0.0 ? cfg.epsilon : cfg.epsilon_rel * cost.mean();
        opt.tol = cfg.tol;
        opt.max_iters = cfg.max_iters;
        opt.threads = 1;
        value = sinkhorn(mu, nu, cost, opt).objective;
      } else {
        ExactOtOptions opt;
        opt.max_entries = cfg.exact_cap;
        value = exact_ot(mu, nu, cost, opt).objective;
      }
      out.values(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(yp)) =
          std::max(value, 0.0);
    }
  });
  return out;
}

LabelDistanceMatrix label_distance_matrix_means(
    const std::vector<MomentSummary>& moments_a,
    const std::vector<MomentSummary>& moments_b) {
  if (moments_a.empty() || moments_b.empty())
    throw std::invalid_argument("empty moment map");
  if (moments_a.front().dim() != moments_b.front().dim())
    throw DataError("moment dimensions differ between datasets");
  LabelDistanceMatrix out;
  out.method = LabelMethod::means;
  out.values.resize(static_cast<Eigen::Index>(moments_a.size()),
                    static_cast<Eigen::Index>(moments_b.size()));
  for (std::size_t y = 0; y < moments_a.size(); ++y)
    for (std::size_t yp = 0; yp < moments_b.size(); ++yp)
      out.values(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(yp)) =
          (moments_a[y].mean - moments_b[yp].mean).squaredNorm();
  return out;
}

Eigen::MatrixXd ground_cost(const LabeledDataset& a, const LabeledDataset& b,
                            const LabelDistanceMatrix& label_distances, int q,
                            int threads) {
  require_same_dim(a, b);
  if (q != 1 && q != 2) throw std::invalid_argument("outer order q must be 1 or 2");
  if (static_cast<std::size_t>(label_distances.values.rows()) != a.num_classes() ||
      static_cast<std::size_t>(label_distances.values.cols()) != b.num_classes())
    throw DataError("label-distance matrix does not match the class counts");

  Eigen::MatrixXd cost = squared_distances(a.features, b.features, threads);
  parallel_blocks(a.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const auto idx = static_cast<Eigen::Index>(i);
      const auto y = a.labels[i];
      for (Eigen::Index j = 0; j < cost.cols(); ++j) {
        const double s =
            cost(idx, j) +
            label_distances.values(y, b.labels[static_cast<std::size_t>(j)]);
        cost(idx, j) = q == 2 ? s : std::sqrt(s);
      }
    }
  });
  return cost;
}

OtddResult otdd_distance(const LabeledDataset& a, const LabeledDataset& b,
                         const OtddConfig& cfg) {
  cfg.validate();
  a.validate();
  b.validate();
  require_same_dim(a, b);

  OtddResult result;
  result.config = cfg;
  StopWatch total;
  StopWatch stage;

  LabeledDataset sub_a = a, sub_b = b;
  if (cfg.max_samples > 0) {
    if (a.size() > cfg.max_samples)
      sub_a = subsample(a, cfg.max_samples, cfg.seed, true);
    if (b.size() > cfg.max_samples)
      sub_b = subsample(b, cfg.max_samples, cfg.seed + 1, true);
  }
  result.timings.subsample = stage.lap();
  result.n = sub_a.size();
  result.m = sub_b.size();
  result.k_src = sub_a.num_classes();
  result.k_tgt = sub_b.num_classes();
  result.d = sub_a.dim();

  if (cfg.label_method == LabelMethod::exact) {
    result.timings.moments = stage.lap();
    result.label_distances = label_distance_matrix_exact(sub_a, sub_b, cfg);
    result.timings.label_matrix = stage.lap();
  } else {
    const auto moments_a = pipeline_moments(sub_a, cfg);
    const auto moments_b = pipeline_moments(sub_b, cfg);
    result.timings.moments = stage.lap();
    result.label_distances =
        cfg.label_method == LabelMethod::gaussian
            ? label_distance_matrix_gaussian(moments_a, moments_b,
                                             cfg.sqrt_mode, cfg.threads)
            : label_distance_matrix_means(moments_a, moments_b);
    result.timings.label_matrix = stage.lap();
  }

  const Eigen::MatrixXd cost =
      ground_cost(sub_a, sub_b, result.label_distances, cfg.outer_q, cfg.threads);
  result.timings.ground_cost = stage.lap();

  TransportPlan plan = outer_solve(DiscreteMeasure{sub_a.weights},
                                   DiscreteMeasure{sub_b.weights}, cost, cfg,
                                   result.epsilon_used);
  result.timings.outer_solve = stage.lap();
  result.timings.total = total.lap();
  finish_result(result, std::move(plan), cfg);
  return result;
}

Eigen::MatrixXd augmented_embed(const LabeledDataset& ds,
                                const std::vector<MomentSummary>& moments,
                                bool force_diagonal) {
  if (moments.size() != ds.num_classes())
    throw std::invalid_argument("moment map does not match the class count");
  const auto d = static_cast<Eigen::Index>(ds.dim());

  std::vector<Eigen::VectorXd> root_diag(moments.size());
  for (std::size_t c = 0; c < moments.size(); ++c) {
    const auto& cov = moments[c].covariance;
    if (!force_diagonal) {
      const double diag_scale =
          std::max(cov.diagonal().cwiseAbs().maxCoeff(), 1e-300);
      Eigen::MatrixXd off = cov;
      off.diagonal().setZero();
      if (off.cwiseAbs().maxCoeff() > 1e-10 * diag_scale)
        throw DataError(
            "class " + std::to_string(c) +
            ": covariance is not diagonal; enable the diagonal approximation");
    }
    root_diag[c] = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  }

  Eigen::MatrixXd out(static_cast<Eigen::Index>(ds.size()), 3 * d);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    const auto y = static_cast<std::size_t>(ds.labels[i]);
    out.block(idx, 0, 1, d) = ds.features.row(idx);
    out.block(idx, d, 1, d) = moments[y].mean.transpose();
    out.block(idx, 2 * d, 1, d) = root_diag[y].transpose();
  }
  return out;
}

OtddResult otdd_distance_augmented(const LabeledDataset& a,
                                   const LabeledDataset& b,
                                   const OtddConfig& cfg) {
  cfg.validate();
  a.validate();
  b.validate();
  require_same_dim(a, b);

  OtddResult result;
  result.config = cfg;
  StopWatch total;
  StopWatch stage;

  LabeledDataset sub_a = a, sub_b = b;
  if (cfg.max_samples > 0) {
    if (a.size() > cfg.max_samples)
      sub_a = subsample(a, cfg.max_samples, cfg.seed, true);
    if (b.size() > cfg.max_samples)
      sub_b = subsample(b, cfg.max_samples, cfg.seed + 1, true);
  }
  result.timings.subsample = stage.lap();
  result.n = sub_a.size();
  result.m = sub_b.size();
  result.k_src = sub_a.num_classes();
  result.k_tgt = sub_b.num_classes();
  result.d = sub_a.dim();

  const auto moments_a = pipeline_moments(sub_a, cfg);
  const auto moments_b = pipeline_moments(sub_b, cfg);
  result.timings.moments = stage.lap();

  const Eigen::MatrixXd emb_a = augmented_embed(sub_a, moments_a, cfg.diagonal_cov);
  const Eigen::MatrixXd emb_b = augmented_embed(sub_b, moments_b, cfg.diagonal_cov);
  Eigen::MatrixXd cost = squared_distances(emb_a, emb_b, cfg.threads);
  if (cfg.outer_q == 1) cost = cost.cwiseSqrt();
  result.timings.ground_cost = stage.lap();

  result.label_distances.method = LabelMethod::gaussian;  // never materialized

  TransportPlan plan = outer_solve(DiscreteMeasure{sub_a.weights},
                                   DiscreteMeasure{sub_b.weights}, cost, cfg,
                                   result.epsilon_used);
  result.timings.outer_solve = stage.lap();
  result.timings.total = total.lap();
  finish_result(result, std::move(plan), cfg);
  return result;
}

}  // namespace otdd
