#include "otdd/bench.hpp"

#include <fstream>

#include "otdd/errors.hpp"
#include "otdd/synth.hpp"

namespace otdd {

std::vector<BenchCell> run_bench(const std::vector<std::size_t>& sizes,
                                 const std::vector<std::size_t>& dims,
                                 const std::vector<std::size_t>& class_counts,
                                 const std::vector<LabelMethod>& methods,
                                 const OtddConfig& base, std::uint64_t seed) {
  if (sizes.empty() || dims.empty() || class_counts.empty() || methods.empty())
    throw std::invalid_argument("bench grid must be non-empty");
  std::vector<BenchCell> cells;
  for (std::size_t n : sizes) {
    for (std::size_t d : dims) {
      for (std::size_t k : class_counts) {
        MixtureSpec spec;
        spec.n = n;
        spec.d = d;
        spec.k = k;
        spec.axis_centers = true;
        LabeledDataset src, tgt;
        try {
          src = gaussian_mixture(spec, seed);
          tgt = gaussian_mixture(spec, seed + 1);
        } catch (const std::exception& e) {
          for (const auto& method : methods) {
            BenchCell cell;
            cell.n = n;
            cell.d = d;
            cell.k = k;
            cell.method = to_string(method);
            cell.ok = false;
            cell.error = e.what();
            cells.push_back(cell);
          }
          continue;
        }
        for (const auto& method : methods) {
          BenchCell cell;
          cell.n = n;
          cell.d = d;
          cell.k = k;
          cell.method = to_string(method);
          try {
            OtddConfig cfg = base;
            cfg.label_method = method;
            cfg.seed = seed;
            const OtddResult r = otdd_distance(src, tgt, cfg);
            cell.distance = r.distance;
            cell.timings = r.timings;
          } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
          }
          cells.push_back(cell);
        }
      }
    }
  }
  return cells;
}

void write_bench_csv(const std::vector<BenchCell>& cells,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out.precision(9);
  out << "n,m,d,k,method,ok,distance,t_moments,t_label_matrix,t_ground_cost,"
         "t_outer_solve,t_total,error\n";
  for (const auto& c : cells) {
    out << c.n << ',' << c.n << ',' << c.d << ',' << c.k << ',' << c.method
        << ',' << (c.ok ? 1 : 0) << ',' << c.distance << ','
        << c.timings.moments << ',' << c.timings.label_matrix << ','
        << c.timings.ground_cost << ',' << c.timings.outer_solve << ','
        << c.timings.total << ',';
    if (c.error.find(',') != std::string::npos ||
        c.error.find('"') != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : c.error) quoted += ch == '"' ? "\"\"" : std::string(1, ch);
      out << quoted << '"';
    } else {
      out << c.error;
    }
    out << '\n';
  }
  if (!out) throw DataError("write failure on '" + path + "'");
}

}  // namespace otdd
