#include "otdd/robustness.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include "otdd/errors.hpp"

namespace otdd {

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RobustnessTable robustness_table(const LabeledDataset& src,
                                 const LabeledDataset& tgt,
                                 const std::vector<std::size_t>& sizes,
                                 int reps, std::uint64_t seed, bool stratified,
                                 const OtddConfig& cfg) {
  if (sizes.empty()) throw std::invalid_argument("no subsample sizes given");
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  for (std::size_t s : sizes) {
    if (s > src.size() || s > tgt.size())
      throw std::invalid_argument("subsample size " + std::to_string(s) +
                                  " exceeds a dataset size");
  }

  RobustnessTable table;
  std::size_t cell = 0;
  for (std::size_t size_src : sizes) {
    for (std::size_t size_tgt : sizes) {
      double sum = 0.0, sum_sq = 0.0;
      for (int rep = 0; rep < reps; ++rep) {
        const std::uint64_t draw_seed =
            mix(seed, cell * 1000003ULL + static_cast<std::uint64_t>(rep));
        const LabeledDataset sub_src =
            size_src < src.size() ? subsample(src, size_src, draw_seed, stratified)
                                  : src;
        const LabeledDataset sub_tgt =
            size_tgt < tgt.size()
                ? subsample(tgt, size_tgt, draw_seed + 1, stratified)
                : tgt;
        OtddConfig run_cfg = cfg;
        run_cfg.seed = draw_seed;
        run_cfg.max_samples = 0;  // subsampling handled here
        const double dist = otdd_distance(sub_src, sub_tgt, run_cfg).distance;
        table.rows.push_back({size_src, size_tgt, rep, draw_seed, dist});
        sum += dist;
        sum_sq += dist * dist;
      }
      const double mean = sum / reps;
      const double var = std::max(sum_sq / reps - mean * mean, 0.0);
      table.summaries.push_back({size_src, size_tgt, mean, std::sqrt(var)});
      ++cell;
    }
  }
  return table;
}

void write_robustness_csv(const RobustnessTable& table,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out.precision(12);
  out << "size_src,size_tgt,rep,seed,distance\n";
  for (const auto& row : table.rows)
    out << row.size_src << ',' << row.size_tgt << ',' << row.rep << ','
        << row.seed << ',' << row.distance << '\n';
  for (const auto& s : table.summaries) {
    out << s.size_src << ',' << s.size_tgt << ",mean,," << s.mean << '\n';
    out << s.size_src << ',' << s.size_tgt << ",std,," << s.stddev << '\n';
  }
  if (!out) throw DataError("write failure on '" + path + "'");
}

}  // namespace otdd
