#ifndef OTDD_ROBUSTNESS_HPP
#define OTDD_ROBUSTNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "otdd/otdd.hpp"

namespace otdd {

struct RobustnessRow {
  std::size_t size_src = 0;
  std::size_t size_tgt = 0;
  int rep = 0;             // 0-based repetition index
  std::uint64_t seed = 0;  // seed of this draw
  double distance = 0.0;
};

struct RobustnessSummary {
  std::size_t size_src = 0;
  std::size_t size_tgt = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
};

struct RobustnessTable {
  std::vector<RobustnessRow> rows;
  std::vector<RobustnessSummary> summaries;
};

/// Subsample-robustness protocol: for every (size_src, size_tgt) in the
/// grid sizes x sizes, draw `reps` subsamples (stratified by default) and
/// compute one distance each. Draw seeds are mixed deterministically from
/// the base seed, the grid cell and the repetition.
RobustnessTable robustness_table(const LabeledDataset& src,
                                 const LabeledDataset& tgt,
                                 const std::vector<std::size_t>& sizes,
                                 int reps, std::uint64_t seed, bool stratified,
                                 const OtddConfig& cfg);

/// CSV columns size_src,size_tgt,rep,seed,distance; after the sample rows,
/// one mean and one std row per grid cell (rep column holds "mean"/"std").
void write_robustness_csv(const RobustnessTable& table,
                          const std::string& path);

}  // namespace otdd

#endif  // OTDD_ROBUSTNESS_HPP
