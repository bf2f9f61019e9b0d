#ifndef OTDD_BENCH_HPP
#define OTDD_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "otdd/otdd.hpp"

namespace otdd {

struct BenchCell {
  std::size_t n = 0, d = 0, k = 0;
  std::string method;
  double distance = 0.0;
  StageTimings timings;
  bool ok = true;
  std::string error;
};

/// Time every pipeline stage on synthetic Gaussian mixtures over the grid
/// sizes x dims x class_counts x methods. A failing cell records its error
/// and the run continues.
std::vector<BenchCell> run_bench(const std::vector<std::size_t>& sizes,
                                 const std::vector<std::size_t>& dims,
                                 const std::vector<std::size_t>& class_counts,
                                 const std::vector<LabelMethod>& methods,
                                 const OtddConfig& base, std::uint64_t seed);

/// CSV with one row per cell: n,m,d,k,method,ok,distance, stage seconds.
void write_bench_csv(const std::vector<BenchCell>& cells,
                     const std::string& path);

}  // namespace otdd

#endif  // OTDD_BENCH_HPP
