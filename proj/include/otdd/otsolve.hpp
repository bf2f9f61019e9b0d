#ifndef OTDD_OTSOLVE_HPP
#define OTDD_OTSOLVE_HPP

#include <Eigen/Core>
#include <cstddef>
#include <string>

namespace otdd {

/// Weights of a discrete probability measure: strictly positive, summing
/// to 1 within 1e-12.
struct DiscreteMeasure {
  Eigen::VectorXd weights;

  static DiscreteMeasure uniform(std::size_t n);
  std::size_t size() const { return static_cast<std::size_t>(weights.size()); }
  void validate() const;
};

/// Coupling with prescribed marginals plus bookkeeping. `objective` is the
/// unregularized transport cost sum(plan * C) of the returned plan;
/// `entropic_objective` additionally carries the eps * KL term for Sinkhorn
/// (equal to `objective` for exact solves) so the divergence identity can
/// be formed.
struct TransportPlan {
  Eigen::MatrixXd plan;  // n x m, nonnegative
  double objective = 0.0;
  double entropic_objective = 0.0;
  bool converged = true;
  int iterations = 0;
  double marginal_error = 0.0;
};

struct SinkhornOptions {
  double epsilon = 0.1;
  double tol = 1e-6;    // max marginal violation
  int max_iters = 5000;
  bool log_domain = true;      // stabilized potentials; false = plain matrix scaling
  bool epsilon_scaling = true; // geometric warm start from 10*epsilon down to epsilon
  int threads = 0;
};

/// Entropic OT in the log domain (dual potentials with soft-min updates).
/// Costs are pre-scaled by their max entry and results rescaled, so the
/// solve is invariant to the cost scale. Non-convergence is reported via
/// converged=false; a non-finite intermediate (epsilon too small even for
/// the log domain) throws SolverError.
TransportPlan sinkhorn(const DiscreteMeasure& a, const DiscreteMeasure& b,
                       const Eigen::MatrixXd& cost, const SinkhornOptions& opt);

/// Debiased divergence SD_eps = OT_eps(a,b) - OT_eps(a,a)/2 - OT_eps(b,b)/2,
/// formed from entropic objectives and clamped at 0.
double sinkhorn_divergence(const DiscreteMeasure& a, const DiscreteMeasure& b,
                           const Eigen::MatrixXd& cost_ab,
                           const Eigen::MatrixXd& cost_aa,
                           const Eigen::MatrixXd& cost_bb,
                           const SinkhornOptions& opt);

struct ExactOtOptions {
  std::size_t max_entries = 4'000'000;  // n*m cap
  bool assignment_fastpath = true;      // permutation solve for uniform square
};

/// Exact optimum of the discrete transport LP. Uniform square instances go
/// through a shortest-augmenting-path assignment solve (the optimal
/// coupling is a permutation); everything else through successive shortest
/// paths on the bipartite flow network. Throws SolverError when n*m
/// exceeds the cap (use sinkhorn instead) and DataError when the marginals
/// cannot balance.
TransportPlan exact_ot(const DiscreteMeasure& a, const DiscreteMeasure& b,
                       const Eigen::MatrixXd& cost,
                       const ExactOtOptions& opt = {});

/// Minimum-cost assignment on a square cost matrix; returns the column
/// assigned to each row. Exposed for tests.
double solve_assignment(const Eigen::MatrixXd& cost, std::vector<int>& col4row);

/// Plan export: sparse "i,j,mass" triplets with entries below `cutoff`
/// omitted, or the dense matrix when dense=true. Both carry a header row.
void export_plan_csv(const TransportPlan& plan, const std::string& path,
                     bool dense = false, double cutoff = 1e-12);

}  // namespace otdd

#endif  // OTDD_OTSOLVE_HPP
