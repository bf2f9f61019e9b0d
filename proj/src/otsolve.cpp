#include "otdd/otsolve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "otdd/errors.hpp"
#include "otdd/parallel.hpp"

namespace otdd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_cost(const Eigen::MatrixXd& cost) {
  if (!cost.allFinite())
    throw DataError("cost matrix contains non-finite entries");
  if (cost.size() > 0 && cost.minCoeff() < 0.0)
    throw DataError("cost matrix contains negative entries");
}

void check_shapes(const DiscreteMeasure& a, const DiscreteMeasure& b,
                  const Eigen::MatrixXd& cost) {
  if (static_cast<std::size_t>(cost.rows()) != a.size() ||
      static_cast<std::size_t>(cost.cols()) != b.size())
    throw DataError("cost matrix shape does not match the measures");
}

bool is_uniform(const Eigen::VectorXd& w) {
  const double u = 1.0 / static_cast<double>(w.size());
  return ((w.array() - u).abs() <= 1e-12).all();
}

double plan_marginal_error(const Eigen::MatrixXd& plan,
                           const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double row_err = (plan.rowwise().sum() - a).cwiseAbs().maxCoeff();
  const double col_err =
      (plan.colwise().sum().transpose() - b).cwiseAbs().maxCoeff();
  return std::max(row_err, col_err);
}

// Successive shortest augmenting paths on the dense bipartite flow network,
// with node potentials keeping reduced costs nonnegative. Exact (up to
// floating point) for arbitrary positive marginals.
Eigen::MatrixXd solve_transport_ssp(const Eigen::VectorXd& a,
                                    const Eigen::VectorXd& b,
                                    const Eigen::MatrixXd& cost,
                                    int& augmentations) {
  const auto n = a.size();
  const auto m = b.size();
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(n, m);
  std::vector<double> pot_row(static_cast<std::size_t>(n), 0.0);
  std::vector<double> pot_col(static_cast<std::size_t>(m), 0.0);
  Eigen::VectorXd supply = a;
  Eigen::VectorXd demand = b;

  std::vector<double> dist_row(static_cast<std::size_t>(n));
  std::vector<double> dist_col(static_cast<std::size_t>(m));
  std::vector<char> done_row(static_cast<std::size_t>(n));
  std::vector<char> done_col(static_cast<std::size_t>(m));
  std::vector<Eigen::Index> parent_of_col(static_cast<std::size_t>(m));  // row feeding col
  std::vector<Eigen::Index> parent_of_row(static_cast<std::size_t>(n));  // col feeding row, -1 = source

  constexpr double kRemainEps = 1e-15;
  augmentations = 0;

  while (supply.maxCoeff() > kRemainEps && demand.maxCoeff() > kRemainEps) {
    std::fill(dist_col.begin(), dist_col.end(), kInf);
    std::fill(done_row.begin(), done_row.end(), 0);
    std::fill(done_col.begin(), done_col.end(), 0);
    std::fill(parent_of_col.begin(), parent_of_col.end(), Eigen::Index{-1});
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool source = supply[i] > kRemainEps;
      dist_row[static_cast<std::size_t>(i)] = source ? 0.0 : kInf;
      parent_of_row[static_cast<std::size_t>(i)] = -1;
    }

    Eigen::Index target = -1;
    double target_dist = kInf;
    while (target == -1) {
      // Pick the unsettled node with the smallest tentative distance.
      double best = kInf;
      Eigen::Index best_row = -1, best_col = -1;
      for (Eigen::Index i = 0; i < n; ++i)
        if (!done_row[static_cast<std::size_t>(i)] &&
            dist_row[static_cast<std::size_t>(i)] < best) {
          best = dist_row[static_cast<std::size_t>(i)];
          best_row = i;
          best_col = -1;
        }
      for (Eigen::Index j = 0; j < m; ++j)
        if (!done_col[static_cast<std::size_t>(j)] &&
            dist_col[static_cast<std::size_t>(j)] < best) {
          best = dist_col[static_cast<std::size_t>(j)];
          best_col = j;
          best_row = -1;
        }
      if (best == kInf)
        throw SolverError("exact_ot: no augmenting path (unbalanced marginals)");

      if (best_col >= 0) {
        const auto j = best_col;
        if (demand[j] > kRemainEps) {  // nearest deficient column: stop
          target = j;
          target_dist = best;
          break;
        }
        done_col[static_cast<std::size_t>(j)] = 1;
        // Reverse arcs along existing flow in this column.
        for (Eigen::Index i = 0; i < n; ++i) {
          if (done_row[static_cast<std::size_t>(i)] || flow(i, j) <= 0.0) continue;
          double rc = pot_col[static_cast<std::size_t>(j)] -
                      pot_row[static_cast<std::size_t>(i)] - cost(i, j);
          if (rc < 0.0) rc = 0.0;  // slackness round-off
          const double nd = best + rc;
          if (nd < dist_row[static_cast<std::size_t>(i)]) {
            dist_row[static_cast<std::size_t>(i)] = nd;
            parent_of_row[static_cast<std::size_t>(i)] = j;
          }
        }
      } else {
        const auto i = best_row;
        done_row[static_cast<std::size_t>(i)] = 1;
        for (Eigen::Index j = 0; j < m; ++j) {
          if (done_col[static_cast<std::size_t>(j)]) continue;
          double rc = cost(i, j) + pot_row[static_cast<std::size_t>(i)] -
                      pot_col[static_cast<std::size_t>(j)];
          if (rc < 0.0) rc = 0.0;
          const double nd = best + rc;
          if (nd < dist_col[static_cast<std::size_t>(j)]) {
            dist_col[static_cast<std::size_t>(j)] = nd;
            parent_of_col[static_cast<std::size_t>(j)] = i;
          }
        }
      }
    }

    // Unsettled labels are >= target_dist, so min(dist, D) keeps every
    // residual reduced cost nonnegative and zeroes the path arcs.
    for (Eigen::Index i = 0; i < n; ++i)
      pot_row[static_cast<std::size_t>(i)] +=
          std::min(dist_row[static_cast<std::size_t>(i)], target_dist);
    for (Eigen::Index j = 0; j < m; ++j)
      pot_col[static_cast<std::size_t>(j)] +=
          std::min(dist_col[static_cast<std::size_t>(j)], target_dist);

    // Bottleneck along the alternating path.
    double delta = demand[target];
    {
      Eigen::Index j = target;
      while (true) {
        const Eigen::Index i = parent_of_col[static_cast<std::size_t>(j)];
        const Eigen::Index back = parent_of_row[static_cast<std::size_t>(i)];
        if (back < 0) {
          delta = std::min(delta, supply[i]);
          break;
        }
        delta = std::min(delta, flow(i, back));
        j = back;
      }
    }
    // Apply the augmentation.
    {
      Eigen::Index j = target;
      while (true) {
        const Eigen::Index i = parent_of_col[static_cast<std::size_t>(j)];
        flow(i, j) += delta;
        const Eigen::Index back = parent_of_row[static_cast<std::size_t>(i)];
        if (back < 0) {
          supply[i] -= delta;
          break;
        }
        flow(i, back) -= delta;
        j = back;
      }
    }
    demand[target] -= delta;
    ++augmentations;
  }
  return flow;
}

}  // namespace

DiscreteMeasure DiscreteMeasure::uniform(std::size_t n) {
  DiscreteMeasure out;
  out.weights =
      Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n),
                                n > 0 ? 1.0 / static_cast<double>(n) : 0.0);
  return out;
}

void DiscreteMeasure::validate() const {
  if (weights.size() == 0) throw DataError("empty measure");
  double total = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      throw DataError("measure weight " + std::to_string(i) +
                      " must be finite and > 0");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw DataError("measure weights sum to " + std::to_string(total) +
                    ", expected 1 within 1e-12");
}

double solve_assignment(const Eigen::MatrixXd& cost, std::vector<int>& col4row) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw std::invalid_argument("assignment needs a square matrix");
  col4row.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> row4col(static_cast<std::size_t>(n), -1);
  std::vector<double> u(static_cast<std::size_t>(n), 0.0);
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  std::vector<double> shortest(static_cast<std::size_t>(n));
  std::vector<int> path(static_cast<std::size_t>(n));
  std::vector<char> scanned_row(static_cast<std::size_t>(n));
  std::vector<char> scanned_col(static_cast<std::size_t>(n));
  std::vector<int> remaining(static_cast<std::size_t>(n));

  // One shortest augmenting path per row (Jonker-Volgenant style).
  for (int cur = 0; cur < n; ++cur) {
    std::fill(shortest.begin(), shortest.end(), kInf);
    std::fill(scanned_row.begin(), scanned_row.end(), 0);
    std::fill(scanned_col.begin(), scanned_col.end(), 0);
    int num_remaining = n;
    for (int j = 0; j < n; ++j) remaining[static_cast<std::size_t>(j)] = j;

    double min_val = 0.0;
    int i = cur;
    int sink = -1;
    while (sink == -1) {
      scanned_row[static_cast<std::size_t>(i)] = 1;
      int index = -1;
      double lowest = kInf;
      for (int it = 0; it < num_remaining; ++it) {
        const int j = remaining[static_cast<std::size_t>(it)];
        const double r = min_val + cost(i, j) - u[static_cast<std::size_t>(i)] -
                         v[static_cast<std::size_t>(j)];
        if (r < shortest[static_cast<std::size_t>(j)]) {
          path[static_cast<std::size_t>(j)] = i;
          shortest[static_cast<std::size_t>(j)] = r;
        }
        if (shortest[static_cast<std::size_t>(j)] < lowest ||
            (shortest[static_cast<std::size_t>(j)] == lowest &&
             row4col[static_cast<std::size_t>(j)] == -1)) {
          lowest = shortest[static_cast<std::size_t>(j)];
          index = it;
        }
      }
      min_val = lowest;
      if (!(min_val < kInf))
        throw SolverError("assignment: infeasible instance");
      const int j = remaining[static_cast<std::size_t>(index)];
      if (row4col[static_cast<std::size_t>(j)] == -1)
        sink = j;
      else
        i = row4col[static_cast<std::size_t>(j)];
      scanned_col[static_cast<std::size_t>(j)] = 1;
      remaining[static_cast<std::size_t>(index)] =
          remaining[static_cast<std::size_t>(--num_remaining)];
    }

    u[static_cast<std::size_t>(cur)] += min_val;
    for (int r = 0; r < n; ++r)
      if (scanned_row[static_cast<std::size_t>(r)] && r != cur)
        u[static_cast<std::size_t>(r)] +=
            min_val - shortest[static_cast<std::size_t>(
                          col4row[static_cast<std::size_t>(r)])];
    for (int j = 0; j < n; ++j)
      if (scanned_col[static_cast<std::size_t>(j)])
        v[static_cast<std::size_t>(j)] -=
            min_val - shortest[static_cast<std::size_t>(j)];

    int j = sink;
    while (true) {
      const int r = path[static_cast<std::size_t>(j)];
      row4col[static_cast<std::size_t>(j)] = r;
      std::swap(col4row[static_cast<std::size_t>(r)], j);
      if (r == cur) break;
    }
  }

  double total = 0.0;
  for (int r = 0; r < n; ++r) total += cost(r, col4row[static_cast<std::size_t>(r)]);
  return total;
}

TransportPlan exact_ot(const DiscreteMeasure& a, const DiscreteMeasure& b,
                       const Eigen::MatrixXd& cost, const ExactOtOptions& opt) {
  a.validate();
  b.validate();
  check_shapes(a, b, cost);
  check_cost(cost);
  const auto n = static_cast<std::size_t>(cost.rows());
  const auto m = static_cast<std::size_t>(cost.cols());
  if (n * m > opt.max_entries)
    throw SolverError("exact_ot: problem size " + std::to_string(n) + "x" +
                      std::to_string(m) + " exceeds the cap of " +
                      std::to_string(opt.max_entries) +
                      " entries; use the sinkhorn solver");
  if (std::abs(a.weights.sum() - b.weights.sum()) > 1e-9)
    throw DataError("exact_ot: marginals do not balance");

  TransportPlan result;
  if (opt.assignment_fastpath && n == m && is_uniform(a.weights) &&
      is_uniform(b.weights)) {
    // Uniform square case: an optimal extreme point is a permutation.
    std::vector<int> col4row;
    solve_assignment(cost, col4row);
    result.plan = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                        static_cast<Eigen::Index>(m));
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      result.plan(static_cast<Eigen::Index>(i), col4row[i]) = a.weights[static_cast<Eigen::Index>(i)];
      objective += a.weights[static_cast<Eigen::Index>(i)] *
                   cost(static_cast<Eigen::Index>(i), col4row[i]);
    }
    result.objective = objective;
    result.iterations = static_cast<int>(n);
  } else {
    int augmentations = 0;
    result.plan = solve_transport_ssp(a.weights, b.weights, cost, augmentations);
    result.objective = (result.plan.array() * cost.array()).sum();
    result.iterations = augmentations;
  }
  result.entropic_objective = result.objective;
  result.converged = true;
  result.marginal_error = plan_marginal_error(result.plan, a.weights, b.weights);
  return result;
}

namespace {

struct LogSinkhornState {
  RowMat cost_scaled;   // n x m
  RowMat cost_scaledT;  // m x n, transpose copy for column passes
  Eigen::VectorXd log_a, log_b;
  Eigen::VectorXd f, g;
  int threads = 0;
};

// f_i <- -eps * logsumexp_j(log_b_j + (g_j - C_ij)/eps); returns next f.
Eigen::VectorXd soft_row_update(const LogSinkhornState& s, double eps) {
  const auto n = s.cost_scaled.rows();
  Eigen::VectorXd out(n);
  parallel_blocks(static_cast<std::size_t>(n), s.threads,
                  [&](std::size_t lo, std::size_t hi) {
                    Eigen::ArrayXd buf(s.cost_scaled.cols());
                    for (std::size_t i = lo; i < hi; ++i) {
                      const auto idx = static_cast<Eigen::Index>(i);
                      buf = s.log_b.array() +
                            (s.g.array() -
                             s.cost_scaled.row(idx).transpose().array()) /
                                eps;
                      const double mx = buf.maxCoeff();
                      const double lse = mx + std::log((buf - mx).exp().sum());
                      out[idx] = -eps * lse;
                    }
                  });
  return out;
}

Eigen::VectorXd soft_col_update(const LogSinkhornState& s, double eps) {
  const auto m = s.cost_scaledT.rows();
  Eigen::VectorXd out(m);
  parallel_blocks(static_cast<std::size_t>(m), s.threads,
                  [&](std::size_t lo, std::size_t hi) {
                    Eigen::ArrayXd buf(s.cost_scaledT.cols());
                    for (std::size_t j = lo; j < hi; ++j) {
                      const auto idx = static_cast<Eigen::Index>(j);
                      buf = s.log_a.array() +
                            (s.f.array() -
                             s.cost_scaledT.row(idx).transpose().array()) /
                                eps;
                      const double mx = buf.maxCoeff();
                      const double lse = mx + std::log((buf - mx).exp().sum());
                      out[idx] = -eps * lse;
                    }
                  });
  return out;
}

// Max row-marginal violation of plan(f, g): rows sum to a_i * exp((f_i - f*_i)/eps).
double row_violation(const LogSinkhornState& s, const Eigen::VectorXd& f_next,
                     const Eigen::VectorXd& a, double eps) {
  double err = 0.0;
  for (Eigen::Index i = 0; i < f_next.size(); ++i) {
    const double rowsum = a[i] * std::exp((s.f[i] - f_next[i]) / eps);
    err = std::max(err, std::abs(rowsum - a[i]));
  }
  return err;
}

}  // namespace

TransportPlan sinkhorn(const DiscreteMeasure& a, const DiscreteMeasure& b,
                       const Eigen::MatrixXd& cost, const SinkhornOptions& opt) {
  a.validate();
  b.validate();
  check_shapes(a, b, cost);
  check_cost(cost);
  if (!(opt.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (opt.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");

  const auto n = cost.rows();
  const auto m = cost.cols();
  const double scale = std::max(cost.maxCoeff(), 0.0) > 0.0 ? cost.maxCoeff() : 1.0;
  const double eps_target = opt.epsilon / scale;

  TransportPlan result;
  result.converged = false;

  if (!opt.log_domain) {
    // Plain matrix scaling: K = exp(-C/eps), u <- a ./ Kv, v <- b ./ K'u.
    // Scalar std::exp underflows to 0 honestly; Eigen's vectorized exp would
    // clamp the argument and mask the failure.
    const Eigen::MatrixXd kernel = cost.unaryExpr(
        [eps = opt.epsilon](double c) { return std::exp(-c / eps); });
    Eigen::VectorXd u = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(m);
    int iter = 0;
    for (; iter < opt.max_iters; ++iter) {
      u = a.weights.array() / (kernel * v).array();
      v = b.weights.array() / (kernel.transpose() * u).array();
      if (!u.allFinite() || !v.allFinite())
        throw SolverError(
            "sinkhorn: non-finite scaling vector; epsilon too small for the "
            "plain matrix-scaling form, use the log domain");
      if ((iter + 1) % 5 == 0 || iter + 1 == opt.max_iters) {
        const Eigen::MatrixXd plan = u.asDiagonal() * kernel * v.asDiagonal();
        if (plan_marginal_error(plan, a.weights, b.weights) <= opt.tol) {
          result.converged = true;
          ++iter;
          break;
        }
      }
    }
    result.plan = u.asDiagonal() * kernel * v.asDiagonal();
    result.iterations = iter;
    result.objective = (result.plan.array() * cost.array()).sum();
    double kl = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < m; ++j) {
        const double p = result.plan(i, j);
        if (p > 0.0)
          kl += p * std::log(p / (a.weights[i] * b.weights[j]));
      }
    result.entropic_objective = result.objective + opt.epsilon * kl;
    result.marginal_error =
        plan_marginal_error(result.plan, a.weights, b.weights);
    if (!std::isfinite(result.objective))
      throw SolverError("sinkhorn: non-finite objective");
    return result;
  }

  LogSinkhornState s;
  s.cost_scaled = (cost / scale).eval();
  s.cost_scaledT = s.cost_scaled.transpose().eval();
  s.log_a = a.weights.array().log();
  s.log_b = b.weights.array().log();
  s.f = Eigen::VectorXd::Zero(n);
  s.g = Eigen::VectorXd::Zero(m);
  s.threads = opt.threads;

  // Geometric epsilon schedule warm-starts the potentials.
  std::vector<double> levels;
  if (opt.epsilon_scaling) {
    for (double factor : {10.0, std::pow(10.0, 2.0 / 3.0), std::pow(10.0, 1.0 / 3.0)})
      levels.push_back(eps_target * factor);
  }
  levels.push_back(eps_target);

  int total_iters = 0;
  double marginal_err = kInf;
  for (std::size_t level = 0; level < levels.size(); ++level) {
    const double eps = levels[level];
    const bool final_level = level + 1 == levels.size();
    const int budget = final_level ? std::max(1, opt.max_iters - total_iters)
                                   : std::min(40, opt.max_iters);
    for (int it = 0; it < budget; ++it) {
      const Eigen::VectorXd f_next = soft_row_update(s, eps);
      const double delta = (f_next - s.f).cwiseAbs().maxCoeff();
      s.f = f_next;
      s.g = soft_col_update(s, eps);
      ++total_iters;
      if (!final_level && delta <= 1e-3 * eps) break;  // warm level done
      if (final_level && ((it + 1) % 5 == 0 || it + 1 == budget)) {
        const Eigen::VectorXd probe = soft_row_update(s, eps);
        marginal_err = row_violation(s, probe, a.weights, eps);
        if (marginal_err <= opt.tol) {
          result.converged = true;
          break;
        }
      }
    }
    if (!s.f.allFinite() || !s.g.allFinite())
      throw SolverError("sinkhorn: non-finite potentials (epsilon too small)");
  }

  // pi_ij = exp(log_a_i + log_b_j + (f_i + g_j - C_ij)/eps)
  result.plan.resize(n, m);
  const double eps = eps_target;
  parallel_blocks(static_cast<std::size_t>(n), opt.threads,
                  [&](std::size_t lo, std::size_t hi) {
                    for (std::size_t i = lo; i < hi; ++i) {
                      const auto idx = static_cast<Eigen::Index>(i);
                      result.plan.row(idx) =
                          (s.log_a[idx] + s.f[idx] / eps +
                           (s.log_b.array() + s.g.array() / eps -
                            s.cost_scaled.row(idx).transpose().array() / eps))
                              .exp()
                              .matrix()
                              .transpose();
                    }
                  });
  if (!result.plan.allFinite())
    throw SolverError("sinkhorn: non-finite transport plan");

  result.iterations = total_iters;
  result.objective = (result.plan.array() * cost.array()).sum();
  const Eigen::VectorXd row_sums = result.plan.rowwise().sum();
  const Eigen::VectorXd col_sums = result.plan.colwise().sum().transpose();
  // <pi, C> + eps*KL(pi | a (x) b) collapses to scale * (f.rowsums + g.colsums).
  result.entropic_objective =
      scale * (s.f.dot(row_sums) + s.g.dot(col_sums));
  result.marginal_error = std::max(
      (row_sums - a.weights).cwiseAbs().maxCoeff(),
      (col_sums - b.weights).cwiseAbs().maxCoeff());
  if (result.marginal_error <= opt.tol) result.converged = true;
  return result;
}

double sinkhorn_divergence(const DiscreteMeasure& a, const DiscreteMeasure& b,
                           const Eigen::MatrixXd& cost_ab,
                           const Eigen::MatrixXd& cost_aa,
                           const Eigen::MatrixXd& cost_bb,
                           const SinkhornOptions& opt) {
  if (cost_aa.rows() != cost_aa.cols() ||
      cost_aa.rows() != static_cast<Eigen::Index>(a.size()))
    throw DataError("sinkhorn_divergence: cost_aa shape mismatch");
  if (cost_bb.rows() != cost_bb.cols() ||
      cost_bb.rows() != static_cast<Eigen::Index>(b.size()))
    throw DataError("sinkhorn_divergence: cost_bb shape mismatch");
  const double ot_ab = sinkhorn(a, b, cost_ab, opt).entropic_objective;
  const double ot_aa = sinkhorn(a, a, cost_aa, opt).entropic_objective;
  const double ot_bb = sinkhorn(b, b, cost_bb, opt).entropic_objective;
  const double sd = ot_ab - 0.5 * ot_aa - 0.5 * ot_bb;
  return std::max(sd, 0.0);
}

void export_plan_csv(const TransportPlan& plan, const std::string& path,
                     bool dense, double cutoff) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out.precision(17);
  if (dense) {
    for (Eigen::Index j = 0; j < plan.plan.cols(); ++j)
      out << (j ? "," : "") << "col_" << j;
    out << "\n";
    for (Eigen::Index i = 0; i < plan.plan.rows(); ++i) {
      for (Eigen::Index j = 0; j < plan.plan.cols(); ++j)
        out << (j ? "," : "") << plan.plan(i, j);
      out << "\n";
    }
  } else {
    out << "i,j,mass\n";
    for (Eigen::Index i = 0; i < plan.plan.rows(); ++i)
      for (Eigen::Index j = 0; j < plan.plan.cols(); ++j)
        if (plan.plan(i, j) >= cutoff)
          out << i << "," << j << "," << plan.plan(i, j) << "\n";
  }
  if (!out) throw DataError("write failure on '" + path + "'");
}

}  // namespace otdd
