#ifndef OTDD_CORRELATION_HPP
#define OTDD_CORRELATION_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace otdd {

/// Pearson and Spearman correlation of two equal-length series. Either
/// value is absent when undefined (zero variance); `note` says why.
struct CorrelationReport {
  std::size_t n = 0;
  std::optional<double> pearson;
  std::optional<double> spearman;
  std::string note;
};

/// Requires at least 3 points (throws DataError otherwise). Spearman uses
/// average ranks for ties.
CorrelationReport correlate(const std::vector<double>& x,
                            const std::vector<double>& y);

/// Average (fractional) ranks, 1-based; ties share the mean rank.
std::vector<double> average_ranks(const std::vector<double>& v);

}  // namespace otdd

#endif  // OTDD_CORRELATION_HPP
