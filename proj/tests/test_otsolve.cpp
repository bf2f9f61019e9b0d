#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "otdd/errors.hpp"
#include "otdd/otsolve.hpp"

using namespace otdd;

namespace {

Eigen::MatrixXd random_cost(std::mt19937_64& rng, int n, int m) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return Eigen::MatrixXd::NullaryExpr(
      n, m, [&](Eigen::Index, Eigen::Index) { return unit(rng); });
}

// Oracle: minimum mean cost over all permutations of a square instance.
double brute_force_uniform_square(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += cost(i, perm[static_cast<std::size_t>(i)]);
    best = std::min(best, total / n);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Oracle for rational marginals: expand every atom of weight c/N into c unit
// atoms and brute-force the resulting N x N assignment. Splitting atoms
// leaves the optimal transport cost unchanged.
double brute_force_rational(const std::vector<int>& a_units,
                            const std::vector<int>& b_units,
                            const Eigen::MatrixXd& cost) {
  const int total = std::accumulate(a_units.begin(), a_units.end(), 0);
  REQUIRE(total == std::accumulate(b_units.begin(), b_units.end(), 0));
  std::vector<int> row_of(static_cast<std::size_t>(total));
  std::vector<int> col_of(static_cast<std::size_t>(total));
  int t = 0;
  for (std::size_t i = 0; i < a_units.size(); ++i)
    for (int c = 0; c < a_units[i]; ++c) row_of[static_cast<std::size_t>(t++)] = static_cast<int>(i);
  t = 0;
  for (std::size_t j = 0; j < b_units.size(); ++j)
    for (int c = 0; c < b_units[j]; ++c) col_of[static_cast<std::size_t>(t++)] = static_cast<int>(j);
  Eigen::MatrixXd expanded(total, total);
  for (int i = 0; i < total; ++i)
    for (int j = 0; j < total; ++j)
      expanded(i, j) = cost(row_of[static_cast<std::size_t>(i)],
                            col_of[static_cast<std::size_t>(j)]);
  return brute_force_uniform_square(expanded);
}

DiscreteMeasure from_units(const std::vector<int>& units) {
  const int total = std::accumulate(units.begin(), units.end(), 0);
  DiscreteMeasure m;
  m.weights.resize(static_cast<Eigen::Index>(units.size()));
  for (std::size_t i = 0; i < units.size(); ++i)
    m.weights[static_cast<Eigen::Index>(i)] =
        static_cast<double>(units[i]) / total;
  return m;
}

}  // namespace

TEST_CASE("exact_ot: identical point sets cost nothing") {
  Eigen::MatrixXd cost(2, 2);
  cost << 0, 1, 1, 0;  // squared distances between {0,1} and {0,1}
  const auto plan = exact_ot(DiscreteMeasure::uniform(2),
                             DiscreteMeasure::uniform(2), cost);
  CHECK(plan.objective == doctest::Approx(0.0));
  CHECK(plan.plan(0, 0) == doctest::Approx(0.5));
  CHECK(plan.plan(1, 1) == doctest::Approx(0.5));
  CHECK(plan.marginal_error <= 1e-9);
}

TEST_CASE("exact_ot: shifted pair moves each unit one step") {
  // {0,1} vs {1,2} under squared distance: both permutations enumerate to
  // mean costs 1 and 2; the optimum is 1.
  Eigen::MatrixXd cost(2, 2);
  cost << 1, 4, 0, 1;
  const auto plan = exact_ot(DiscreteMeasure::uniform(2),
                             DiscreteMeasure::uniform(2), cost);
  CHECK(plan.objective == doctest::Approx(1.0));
}

TEST_CASE("exact_ot: 3x3 uniform equals the permutation minimum") {
  std::mt19937_64 rng(3);
  const auto cost = random_cost(rng, 3, 3);
  const auto plan = exact_ot(DiscreteMeasure::uniform(3),
                             DiscreteMeasure::uniform(3), cost);
  CHECK(plan.objective ==
        doctest::Approx(brute_force_uniform_square(cost)).epsilon(1e-12));
}

TEST_CASE("exact_ot: permutation optimality for n <= 7") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const auto cost = random_cost(rng, n, n);
    const auto plan = exact_ot(DiscreteMeasure::uniform(static_cast<std::size_t>(n)),
                               DiscreteMeasure::uniform(static_cast<std::size_t>(n)), cost);
    CHECK(plan.objective ==
          doctest::Approx(brute_force_uniform_square(cost)).epsilon(1e-9));
    // plan is a permutation matrix scaled by 1/n
    int nonzeros = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (plan.plan(i, j) > 0) {
          ++nonzeros;
          CHECK(plan.plan(i, j) == doctest::Approx(1.0 / n));
        }
    CHECK(nonzeros == n);
  }
}

TEST_CASE("exact_ot: successive shortest paths agree with the fast path") {
  std::mt19937_64 rng(7);
  ExactOtOptions no_fastpath;
  no_fastpath.assignment_fastpath = false;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const auto cost = random_cost(rng, n, n);
    const auto a = DiscreteMeasure::uniform(static_cast<std::size_t>(n));
    const auto fast = exact_ot(a, a, cost);
    const auto ssp = exact_ot(a, a, cost, no_fastpath);
    CHECK(ssp.objective == doctest::Approx(fast.objective).epsilon(1e-10));
    CHECK(ssp.marginal_error <= 1e-9);
  }
}

TEST_CASE("exact_ot: general marginals against the atom-splitting oracle") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> unit_count(1, 3);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int m = 2 + static_cast<int>(rng() % 3);
    std::vector<int> a_units(static_cast<std::size_t>(n));
    std::vector<int> b_units(static_cast<std::size_t>(m), 1);
    int total = 0;
    for (auto& u : a_units) {
      u = unit_count(rng);
      total += u;
    }
    if (total < m) {
      a_units[0] += m - total;
      total = m;
    }
    // distribute the remaining units over b
    for (int r = 0; r < total - m; ++r)
      ++b_units[static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(m))];
    if (total > 8) continue;  // keep the factorial oracle tractable

    const auto cost = random_cost(rng, n, m);
    const auto plan = exact_ot(from_units(a_units), from_units(b_units), cost);
    const double oracle = brute_force_rational(a_units, b_units, cost);
    CHECK(plan.objective == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(plan.marginal_error <= 1e-9);
  }
}

TEST_CASE("exact_ot: scale equivariance") {
  std::mt19937_64 rng(13);
  const auto cost = random_cost(rng, 5, 5);
  const auto a = DiscreteMeasure::uniform(5);
  const auto base = exact_ot(a, a, cost);
  const auto scaled = exact_ot(a, a, (7.5 * cost).eval());
  CHECK(scaled.objective == doctest::Approx(7.5 * base.objective).epsilon(1e-12));
  CHECK((scaled.plan - base.plan).norm() <= 1e-12);
}

TEST_CASE("exact_ot: rejects oversized problems and bad input") {
  ExactOtOptions opt;
  opt.max_entries = 8;
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(3, 3);
  CHECK_THROWS_WITH_AS(
      exact_ot(DiscreteMeasure::uniform(3), DiscreteMeasure::uniform(3), cost, opt),
      doctest::Contains("sinkhorn"), SolverError);

  Eigen::MatrixXd negative = Eigen::MatrixXd::Constant(2, 2, -1.0);
  CHECK_THROWS_AS(exact_ot(DiscreteMeasure::uniform(2),
                           DiscreteMeasure::uniform(2), negative),
                  DataError);
}

TEST_CASE("sinkhorn: self-transport cost vanishes at small epsilon") {
  std::mt19937_64 rng(17);
  Eigen::MatrixXd cost = random_cost(rng, 5, 5);
  cost.diagonal().setZero();
  cost = ((cost + cost.transpose()) * 0.5).eval();
  SinkhornOptions opt;
  opt.epsilon = 0.01;
  const auto a = DiscreteMeasure::uniform(5);
  const auto plan = sinkhorn(a, a, cost, opt);
  CHECK(plan.objective <= 1e-3 * cost.maxCoeff());
  CHECK(plan.converged);
}

TEST_CASE("sinkhorn: large epsilon approaches the product coupling") {
  Eigen::MatrixXd cost(2, 2);
  cost << 0, 1, 1, 0;
  SinkhornOptions opt;
  opt.epsilon = 100.0;
  const auto a = DiscreteMeasure::uniform(2);
  const auto plan = sinkhorn(a, a, cost, opt);
  // oracle: the product coupling pays (1/4) * sum(C) = 1/2
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 2; ++j)
      CHECK(plan.plan(i, j) == doctest::Approx(0.25).epsilon(5e-3));
  CHECK(plan.objective == doctest::Approx(0.5).epsilon(5e-3));
}

TEST_CASE("sinkhorn: small epsilon approaches the exact optimum") {
  Eigen::MatrixXd cost(2, 2);
  cost << 0, 1, 1, 0;
  SinkhornOptions opt;
  opt.epsilon = 0.01;
  const auto a = DiscreteMeasure::uniform(2);
  const auto plan = sinkhorn(a, a, cost, opt);
  CHECK(plan.objective == doctest::Approx(0.0).epsilon(1e-2));
  CHECK(std::abs(plan.objective) <= 1e-2);
}

TEST_CASE("sinkhorn: marginal feasibility within the reported error") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 8);
    const int m = 3 + static_cast<int>(rng() % 8);
    const auto cost = random_cost(rng, n, m);
    SinkhornOptions opt;
    opt.epsilon = 0.05 * cost.mean();
    const auto a = DiscreteMeasure::uniform(static_cast<std::size_t>(n));
    const auto b = DiscreteMeasure::uniform(static_cast<std::size_t>(m));
    const auto plan = sinkhorn(a, b, cost, opt);
    const double row_err =
        (plan.plan.rowwise().sum() - a.weights).cwiseAbs().maxCoeff();
    const double col_err =
        (plan.plan.colwise().sum().transpose() - b.weights).cwiseAbs().maxCoeff();
    CHECK(row_err <= plan.marginal_error + 1e-15);
    CHECK(col_err <= plan.marginal_error + 1e-15);
    CHECK((plan.plan.array() >= 0).all());
  }
}

TEST_CASE("sinkhorn: entropic objective converges to exact as epsilon shrinks") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const auto cost = random_cost(rng, 10, 10);
    const auto a = DiscreteMeasure::uniform(10);
    const double exact = exact_ot(a, a, cost).objective;
    double previous_gap = std::numeric_limits<double>::infinity();
    for (const double factor : {1.0, 0.1, 0.01}) {
      SinkhornOptions opt;
      opt.epsilon = factor * cost.mean();
      opt.tol = 1e-10;
      opt.max_iters = 20000;
      const auto plan = sinkhorn(a, a, cost, opt);
      const double gap = std::abs(plan.objective - exact);
      CHECK(gap <= previous_gap + 1e-6);  // decreasing within noise
      previous_gap = gap;
      // the entropic plan is (nearly) feasible: it cannot beat the optimum
      CHECK(exact <= plan.objective + 1e-9);
      if (factor == 0.01) CHECK(gap <= 0.02 * std::max(exact, 1e-12));
    }
  }
}

TEST_CASE("sinkhorn: plain matrix scaling matches the log domain") {
  std::mt19937_64 rng(29);
  const auto cost = random_cost(rng, 6, 6);
  const auto a = DiscreteMeasure::uniform(6);
  SinkhornOptions log_opt;
  log_opt.epsilon = 0.5 * cost.mean();
  SinkhornOptions plain_opt = log_opt;
  plain_opt.log_domain = false;
  const auto log_plan = sinkhorn(a, a, cost, log_opt);
  const auto plain_plan = sinkhorn(a, a, cost, plain_opt);
  CHECK((log_plan.plan - plain_plan.plan).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(log_plan.objective == doctest::Approx(plain_plan.objective).epsilon(1e-6));
}

TEST_CASE("sinkhorn: plain scaling underflows to a solver error at tiny epsilon") {
  Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(4, 4, 1.0);
  cost.diagonal().setConstant(0.5);
  SinkhornOptions opt;
  opt.epsilon = 1e-6;
  opt.log_domain = false;
  CHECK_THROWS_AS(sinkhorn(DiscreteMeasure::uniform(4),
                           DiscreteMeasure::uniform(4), cost, opt),
                  SolverError);
}

TEST_CASE("sinkhorn: non-convergence is reported, not thrown") {
  std::mt19937_64 rng(31);
  const auto cost = random_cost(rng, 8, 8);
  SinkhornOptions opt;
  opt.epsilon = 1e-4 * cost.mean();  // hard problem
  opt.max_iters = 3;
  opt.epsilon_scaling = false;
  const auto plan =
      sinkhorn(DiscreteMeasure::uniform(8), DiscreteMeasure::uniform(8), cost, opt);
  CHECK_FALSE(plan.converged);
  CHECK(plan.iterations == 3);
}

TEST_CASE("sinkhorn divergence: zero for identical measures") {
  std::mt19937_64 rng(37);
  Eigen::MatrixXd cost = random_cost(rng, 6, 6);
  cost = ((cost + cost.transpose()) * 0.5).eval();
  cost.diagonal().setZero();
  SinkhornOptions opt;
  opt.epsilon = 0.1;
  const auto a = DiscreteMeasure::uniform(6);
  CHECK(sinkhorn_divergence(a, a, cost, cost, cost, opt) <= 1e-8);
}

TEST_CASE("sinkhorn divergence: point masses at distance r") {
  const double r = 1.7;
  Eigen::MatrixXd cost_ab(1, 1), zero(1, 1);
  cost_ab << r * r;
  zero << 0.0;
  SinkhornOptions opt;
  opt.epsilon = 0.01;
  DiscreteMeasure one;
  one.weights = Eigen::VectorXd::Ones(1);
  // oracle: the only coupling costs exactly r^2 (exact_ot agrees)
  const double exact = exact_ot(one, one, cost_ab).objective;
  CHECK(exact == doctest::Approx(r * r));
  CHECK(sinkhorn_divergence(one, one, cost_ab, zero, zero, opt) ==
        doctest::Approx(r * r).epsilon(1e-6));
}

TEST_CASE("sinkhorn divergence: nonnegative on random instances") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    // symmetric squared-distance geometry in 1-D
    Eigen::VectorXd xs = Eigen::VectorXd::Random(5) * 2;
    Eigen::VectorXd ys = Eigen::VectorXd::Random(5) * 2;
    Eigen::MatrixXd cab(5, 5), caa(5, 5), cbb(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        cab(i, j) = (xs[i] - ys[j]) * (xs[i] - ys[j]);
        caa(i, j) = (xs[i] - xs[j]) * (xs[i] - xs[j]);
        cbb(i, j) = (ys[i] - ys[j]) * (ys[i] - ys[j]);
      }
    SinkhornOptions opt;
    opt.epsilon = 0.1;
    const auto a = DiscreteMeasure::uniform(5);
    CHECK(sinkhorn_divergence(a, a, cab, caa, cbb, opt) >= 0.0);
  }
}

TEST_CASE("measure validation") {
  DiscreteMeasure bad;
  bad.weights = Eigen::VectorXd::Constant(3, 0.5);
  CHECK_THROWS_AS(bad.validate(), DataError);
  bad.weights << 0.5, 0.5, 0.0;
  CHECK_THROWS_AS(bad.validate(), DataError);
  CHECK_NOTHROW(DiscreteMeasure::uniform(4).validate());
}
