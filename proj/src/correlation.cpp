#include "otdd/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "otdd/errors.hpp"

namespace otdd {

std::vector<double> average_ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

namespace {

std::optional<double> pearson(const std::vector<double>& x,
                              const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

CorrelationReport correlate(const std::vector<double>& x,
                            const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("correlate: series lengths differ");
  if (x.size() < 3)
    throw DataError("correlate needs at least 3 complete rows, got " +
                    std::to_string(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw DataError("correlate: non-finite value at row " + std::to_string(i));

  CorrelationReport report;
  report.n = x.size();
  report.pearson = pearson(x, y);
  report.spearman = pearson(average_ranks(x), average_ranks(y));
  if (!report.pearson || !report.spearman)
    report.note = "correlation undefined: a column has zero variance";
  return report;
}

}  // namespace otdd
