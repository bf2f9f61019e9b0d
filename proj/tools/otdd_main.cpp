#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "otdd/bench.hpp"
#include "otdd/correlation.hpp"
#include "otdd/errors.hpp"
#include "otdd/manifest.hpp"
#include "otdd/otdd.hpp"
#include "otdd/result_io.hpp"
#include "otdd/robustness.hpp"
#include "otdd/version.hpp"

namespace {

using namespace otdd;

struct GlobalOptions {
  std::uint64_t seed = 0;
  int threads = -1;  // -1: unset, fall back to OTDD_THREADS then hardware
  bool strict = false;
  std::string out;
  std::string format = "json";
  bool quiet = false;

  int resolved_threads() const {
    if (threads >= 0) return threads;  // flag wins over the environment
    if (const char* env = std::getenv("OTDD_THREADS")) {
      try {
        return std::max(0, std::stoi(env));
      } catch (...) {
      }
    }
    return 0;
  }
  void warn(const std::string& message) const {
    if (!quiet) std::cerr << "otdd: warning: " << message << "\n";
  }
};

struct DistanceOptions {
  std::string method = "gaussian";
  std::string outer = "sinkhorn";
  int outer_q = 2;
  double epsilon = 0.0;  // absolute; 0 = adaptive
  double epsilon_rel = 0.1;
  double tol = 1e-6;
  int max_iters = 5000;
  double reg_cov = 1e-6;
  std::string sqrt_mode = "exact";
  std::size_t max_samples = 0;
  bool diagonal_cov = false;
  std::string label_col = "-1";  // last column by default
  bool no_header = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--method", method, "Label distance backend")
        ->check(CLI::IsMember({"gaussian", "exact", "means"}));
    cmd->add_option("--outer", outer, "Outer OT solver")
        ->check(CLI::IsMember({"sinkhorn", "exact"}));
    cmd->add_option("--outer-q", outer_q, "Outer order q (1 or 2)")
        ->check(CLI::IsMember(std::set<int>{1, 2}));
    cmd->add_option("--epsilon", epsilon,
                    "Absolute entropic regularization (0 = adaptive)");
    cmd->add_option("--epsilon-rel", epsilon_rel,
                    "Adaptive epsilon as a fraction of the mean ground cost");
    cmd->add_option("--tol", tol, "Sinkhorn marginal tolerance");
    cmd->add_option("--max-iters", max_iters, "Sinkhorn iteration cap");
    cmd->add_option("--reg-cov", reg_cov, "Relative covariance regularization");
    cmd->add_option("--sqrt", sqrt_mode, "Matrix square root backend")
        ->check(CLI::IsMember({"exact", "newton-schulz"}));
    cmd->add_option("--max-samples", max_samples,
                    "Stratified subsample cap per dataset (0 = all)");
    cmd->add_flag("--diagonal-cov", diagonal_cov,
                  "Diagonal covariance approximation");
    cmd->add_option("--label-col", label_col,
                    "Label column name or index (negative counts from the end)");
    cmd->add_flag("--no-header", no_header, "CSV files have no header row");
  }

  OtddConfig to_config(const GlobalOptions& global) const {
    OtddConfig cfg;
    cfg.label_method = label_method_from_string(method);
    cfg.outer_solver = outer_solver_from_string(outer);
    cfg.outer_q = outer_q;
    cfg.epsilon = epsilon;
    cfg.epsilon_rel = epsilon_rel;
    cfg.tol = tol;
    cfg.max_iters = max_iters;
    cfg.cov_reg = reg_cov;
    cfg.sqrt_mode =
        sqrt_mode == "exact" ? SqrtMode::exact : SqrtMode::newton_schulz;
    cfg.max_samples = max_samples;
    cfg.diagonal_cov = diagonal_cov;
    cfg.seed = global.seed;
    cfg.threads = global.resolved_threads();
    cfg.validate();
    return cfg;
  }
};

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

RunManifest make_manifest(const std::string& command,
                          const GlobalOptions& global, const OtddConfig& cfg,
                          const std::vector<std::string>& inputs,
                          const std::vector<std::string>& outputs) {
  RunManifest m;
  m.command = command;
  m.tool_version = kVersion;
  m.timestamp = iso_timestamp();
  m.seed = global.seed;
  m.config = config_to_json(cfg);
  for (const auto& path : inputs) {
    RunManifest::Input rec;
    rec.path = path;
    rec.digest = digest_hex(fnv1a64_file(path));
    rec.bytes = std::filesystem::file_size(path);
    m.inputs.push_back(std::move(rec));
  }
  m.outputs = outputs;
  return m;
}

void write_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw DataError("cannot open '" + out_path + "' for writing");
  out << text;
  if (!out) throw DataError("write failure on '" + out_path + "'");
}

std::string moment_cache_path(const std::string& cache_dir,
                              const std::string& input) {
  const auto digest = digest_hex(fnv1a64_file(input));
  return (std::filesystem::path(cache_dir) / (digest + ".otddmom")).string();
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

// ---------------------------------------------------------------- dist ----

struct DistArgs {
  std::string src, tgt;
  DistanceOptions opts;
  bool augmented = false;
  std::string coupling_path;
  bool coupling_dense = false;
  std::string label_dist_path;
  std::string moment_cache;
  std::string manifest_path;
  std::string from_manifest;
};

OtddResult dist_with_moment_cache(const DistArgs& args, const OtddConfig& cfg,
                                  const LabeledDataset& src,
                                  const LabeledDataset& tgt) {
  std::filesystem::create_directories(args.moment_cache);
  const std::string paths[2] = {args.src, args.tgt};
  const LabeledDataset* datasets[2] = {&src, &tgt};
  std::vector<MomentSummary> moments[2];
  for (int side = 0; side < 2; ++side) {
    const auto cache_file = moment_cache_path(args.moment_cache, paths[side]);
    if (std::filesystem::exists(cache_file)) {
      moments[side] = load_moments(cache_file);
    } else {
      auto fresh = all_moments(*datasets[side], 1024, 0.0, cfg.threads);
      if (cfg.diagonal_cov)
        for (auto& m : fresh) diagonalize_covariance(m);
      apply_relative_regularization(fresh, cfg.cov_reg);
      save_moments(fresh, cache_file);
      moments[side] = std::move(fresh);
    }
  }

  OtddResult result;
  result.config = cfg;
  result.n = src.size();
  result.m = tgt.size();
  result.k_src = src.num_classes();
  result.k_tgt = tgt.num_classes();
  result.d = src.dim();
  result.label_distances =
      cfg.label_method == LabelMethod::gaussian
          ? label_distance_matrix_gaussian(moments[0], moments[1],
                                           cfg.sqrt_mode, cfg.threads)
          : label_distance_matrix_means(moments[0], moments[1]);
  const Eigen::MatrixXd cost =
      ground_cost(src, tgt, result.label_distances, cfg.outer_q, cfg.threads);

  TransportPlan plan;
  if (cfg.outer_solver == OuterSolver::exact) {
    ExactOtOptions eopt;
    eopt.max_entries = cfg.exact_cap;
    plan = exact_ot(DiscreteMeasure{src.weights}, DiscreteMeasure{tgt.weights},
                    cost, eopt);
  } else {
    SinkhornOptions sopt;
    sopt.epsilon = cfg.epsilon > 0 ? cfg.epsilon : cfg.epsilon_rel * cost.mean();
    sopt.tol = cfg.tol;
    sopt.max_iters = cfg.max_iters;
    sopt.threads = cfg.threads;
    result.epsilon_used = sopt.epsilon;
    plan = sinkhorn(DiscreteMeasure{src.weights}, DiscreteMeasure{tgt.weights},
                    cost, sopt);
  }
  result.raw_objective = std::max(plan.objective, 0.0);
  result.distance = cfg.outer_q == 2 ? std::sqrt(result.raw_objective)
                                     : result.raw_objective;
  result.converged = plan.converged;
  result.iterations = plan.iterations;
  result.marginal_error = plan.marginal_error;
  if (cfg.keep_plan) result.plan = std::move(plan);
  return result;
}

int run_dist(const GlobalOptions& global, DistArgs& args) {
  OtddConfig cfg;
  if (!args.from_manifest.empty()) {
    const RunManifest m = read_manifest(args.from_manifest, true);
    if (m.command != "dist")
      throw DataError("manifest '" + args.from_manifest + "' records command '" +
                      m.command + "', expected 'dist'");
    if (m.inputs.size() != 2)
      throw DataError("dist manifest must record exactly two inputs");
    args.src = m.inputs[0].path;
    args.tgt = m.inputs[1].path;
    cfg = config_from_json(m.config);
    cfg.seed = m.seed;
    cfg.threads = global.resolved_threads();
  } else {
    cfg = args.opts.to_config(global);
  }
  if (!std::filesystem::exists(args.src))
    throw DataError("source dataset '" + args.src + "' does not exist");
  if (!std::filesystem::exists(args.tgt))
    throw DataError("target dataset '" + args.tgt + "' does not exist");

  const auto src = load_any(args.src, args.opts.label_col, !args.opts.no_header);
  const auto tgt = load_any(args.tgt, args.opts.label_col, !args.opts.no_header);
  cfg.keep_plan = !args.coupling_path.empty();

  OtddResult result;
  if (args.augmented) {
    result = otdd_distance_augmented(src, tgt, cfg);
  } else if (!args.moment_cache.empty() &&
             cfg.label_method != LabelMethod::exact && cfg.max_samples == 0) {
    result = dist_with_moment_cache(args, cfg, src, tgt);
  } else {
    result = otdd_distance(src, tgt, cfg);
  }

  std::vector<std::string> outputs;
  if (!global.out.empty()) outputs.push_back(global.out);

  // Oversized label matrices go to a CSV sidecar instead of the JSON body.
  std::string sidecar;
  if (static_cast<std::size_t>(result.label_distances.values.size()) > 10'000 &&
      global.format != "csv") {
    sidecar = !args.label_dist_path.empty() ? args.label_dist_path
              : !global.out.empty()         ? global.out + ".label_dist.csv"
                                            : std::string("otdd_label_dist.csv");
  }

  if (global.format == "csv") {
    write_text(global.out, result_to_csv(result));
  } else {
    write_text(global.out, result_to_json(result, 10'000, sidecar).dump(2) + "\n");
  }

  if (!args.coupling_path.empty() && result.plan) {
    export_plan_csv(*result.plan, args.coupling_path, args.coupling_dense);
    outputs.push_back(args.coupling_path);
  }
  if (!args.label_dist_path.empty() || !sidecar.empty()) {
    const std::string path =
        !args.label_dist_path.empty() ? args.label_dist_path : sidecar;
    write_label_distance_csv(result.label_distances, src.label_names,
                             tgt.label_names, path);
    outputs.push_back(path);
  }

  std::string manifest_path = args.manifest_path;
  if (manifest_path.empty() && !global.out.empty())
    manifest_path = global.out + ".manifest.json";
  if (!manifest_path.empty())
    write_manifest(
        make_manifest("dist", global, cfg, {args.src, args.tgt}, outputs),
        manifest_path);

  if (!result.converged) {
    if (global.strict) {
      std::cerr << "otdd: outer solver did not converge (marginal error "
                << result.marginal_error << ")\n";
      return 4;
    }
    global.warn("outer solver did not converge; converged=false recorded");
  }
  return 0;
}

// ------------------------------------------------------------ pairwise ----

struct PairwiseArgs {
  std::vector<std::string> inputs;
  std::string dir;
  DistanceOptions opts;
  std::string manifest_path;
};

int run_pairwise(const GlobalOptions& global, PairwiseArgs& args) {
  if (!args.dir.empty()) {
    for (const auto& entry : std::filesystem::directory_iterator(args.dir)) {
      if (!entry.is_regular_file()) continue;
      const auto ext = entry.path().extension().string();
      if (ext == ".csv" || ext == ".otdd" || ext == ".bin")
        args.inputs.push_back(entry.path().string());
    }
    std::sort(args.inputs.begin(), args.inputs.end());
  }
  if (args.inputs.size() < 2)
    throw std::invalid_argument("pairwise needs at least two datasets");
  const OtddConfig cfg = args.opts.to_config(global);

  std::vector<LabeledDataset> datasets;
  std::vector<std::string> names;
  for (const auto& path : args.inputs) {
    if (!std::filesystem::exists(path))
      throw DataError("dataset '" + path + "' does not exist");
    datasets.push_back(load_any(path, args.opts.label_col, !args.opts.no_header));
    names.push_back(std::filesystem::path(path).stem().string());
  }

  // Upper triangle computed, mirrored; zero diagonal; failures stay empty.
  const std::size_t count = datasets.size();
  std::vector<std::vector<std::string>> matrix(
      count, std::vector<std::string>(count, "0"));
  nlohmann::json pair_records = nlohmann::json::array();
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      try {
        const auto result = otdd_distance(datasets[i], datasets[j], cfg);
        std::ostringstream cell;
        cell.precision(17);
        cell << result.distance;
        matrix[i][j] = matrix[j][i] = cell.str();
        pair_records.push_back({{"src", args.inputs[i]},
                                {"tgt", args.inputs[j]},
                                {"distance", result.distance},
                                {"converged", result.converged},
                                {"seed", cfg.seed}});
        if (!result.converged && global.strict) {
          std::cerr << "otdd: pair (" << names[i] << ", " << names[j]
                    << ") did not converge\n";
          return 4;
        }
      } catch (const std::exception& e) {
        if (global.strict) throw;
        global.warn("pair (" + names[i] + ", " + names[j] +
                    ") failed: " + e.what());
        matrix[i][j] = matrix[j][i] = "";
        pair_records.push_back({{"src", args.inputs[i]},
                                {"tgt", args.inputs[j]},
                                {"error", e.what()}});
      }
    }
  }

  std::ostringstream out;
  out << "dataset";
  for (const auto& name : names) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < count; ++i) {
    out << names[i];
    for (std::size_t j = 0; j < count; ++j) out << ',' << matrix[i][j];
    out << '\n';
  }
  write_text(global.out, out.str());

  std::string manifest_path = args.manifest_path;
  if (manifest_path.empty() && !global.out.empty())
    manifest_path = global.out + ".manifest.json";
  if (!manifest_path.empty()) {
    RunManifest m = make_manifest("pairwise", global, cfg, args.inputs,
                                  global.out.empty()
                                      ? std::vector<std::string>{}
                                      : std::vector<std::string>{global.out});
    nlohmann::json doc = to_json(m);
    doc["pairs"] = pair_records;
    std::ofstream mf(manifest_path);
    if (!mf) throw DataError("cannot open '" + manifest_path + "' for writing");
    mf << doc.dump(2) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------- robustness ----

struct RobustnessArgs {
  std::string src, tgt;
  std::vector<std::size_t> sizes;
  int reps = 10;
  bool no_stratified = false;
  DistanceOptions opts;
};

int run_robustness(const GlobalOptions& global, RobustnessArgs& args) {
  if (!std::filesystem::exists(args.src))
    throw DataError("source dataset '" + args.src + "' does not exist");
  if (!std::filesystem::exists(args.tgt))
    throw DataError("target dataset '" + args.tgt + "' does not exist");
  const OtddConfig cfg = args.opts.to_config(global);
  const auto src = load_any(args.src, args.opts.label_col, !args.opts.no_header);
  const auto tgt = load_any(args.tgt, args.opts.label_col, !args.opts.no_header);
  const auto table = robustness_table(src, tgt, args.sizes, args.reps,
                                      global.seed, !args.no_stratified, cfg);
  if (global.out.empty()) {
    const auto tmp =
        (std::filesystem::temp_directory_path() / "otdd_robustness.csv").string();
    write_robustness_csv(table, tmp);
    std::ifstream echo(tmp);
    std::cout << echo.rdbuf();
    std::filesystem::remove(tmp);
  } else {
    write_robustness_csv(table, global.out);
  }
  return 0;
}

// ----------------------------------------------------------- correlate ----

struct CorrelateArgs {
  std::string table;
};

int run_correlate(const GlobalOptions& global, CorrelateArgs& args) {
  if (!std::filesystem::exists(args.table))
    throw DataError("table '" + args.table + "' does not exist");
  std::ifstream in(args.table);
  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + args.table + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_fields(line);
  int dist_col = -1, transfer_col = -1;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == "distance") dist_col = static_cast<int>(j);
    if (header[j] == "transfer") transfer_col = static_cast<int>(j);
  }
  if (dist_col < 0 || transfer_col < 0)
    throw DataError("table must have 'distance' and 'transfer' columns");

  std::vector<double> distance, transfer;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw DataError("line " + std::to_string(lineno) +
                      ": field count mismatch");
    try {
      std::size_t used = 0;
      const auto& d = fields[static_cast<std::size_t>(dist_col)];
      const auto& t = fields[static_cast<std::size_t>(transfer_col)];
      const double dv = std::stod(d, &used);
      if (used != d.size()) throw std::invalid_argument(d);
      const double tv = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      distance.push_back(dv);
      transfer.push_back(tv);
    } catch (const std::exception&) {
      throw DataError("line " + std::to_string(lineno) + ": non-numeric cell");
    }
  }
  const auto report = correlate(distance, transfer);

  if (global.format == "csv") {
    std::ostringstream os;
    os.precision(12);
    os << "n,pearson,spearman,note\n" << report.n << ',';
    if (report.pearson) os << *report.pearson;
    os << ',';
    if (report.spearman) os << *report.spearman;
    os << ',' << report.note << '\n';
    write_text(global.out, os.str());
  } else {
    nlohmann::json doc{
        {"schema_version", kResultSchemaVersion},
        {"n", report.n},
        {"pearson",
         report.pearson ? nlohmann::json(*report.pearson) : nlohmann::json()},
        {"spearman",
         report.spearman ? nlohmann::json(*report.spearman) : nlohmann::json()},
        {"note", report.note}};
    write_text(global.out, doc.dump(2) + "\n");
  }
  return 0;
}

// --------------------------------------------------------------- bench ----

struct BenchArgs {
  std::vector<std::size_t> sizes{1000};
  std::vector<std::size_t> dims{16};
  std::vector<std::size_t> classes{10};
  std::vector<std::string> methods{"gaussian", "exact"};
  DistanceOptions opts;
};

int run_bench_cmd(const GlobalOptions& global, BenchArgs& args) {
  const OtddConfig cfg = args.opts.to_config(global);
  std::vector<LabelMethod> methods;
  for (const auto& m : args.methods)
    methods.push_back(label_method_from_string(m));
  const auto cells =
      run_bench(args.sizes, args.dims, args.classes, methods, cfg, global.seed);
  if (global.out.empty()) {
    const auto tmp =
        (std::filesystem::temp_directory_path() / "otdd_bench.csv").string();
    write_bench_csv(cells, tmp);
    std::ifstream echo(tmp);
    std::cout << echo.rdbuf();
    std::filesystem::remove(tmp);
  } else {
    write_bench_csv(cells, global.out);
  }
  for (const auto& cell : cells)
    if (!cell.ok)
      global.warn("bench cell n=" + std::to_string(cell.n) + " d=" +
                  std::to_string(cell.d) + " failed: " + cell.error);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal transport dataset distances between labeled datasets"};
  app.set_version_flag("--version", otdd::kVersion);
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Random seed for subsampling");
  app.add_option("--threads", global.threads,
                 "Worker threads (default: OTDD_THREADS or all cores)");
  app.add_flag("--strict", global.strict,
               "Treat solver non-convergence as an error (exit 4)");
  app.add_option("--out", global.out, "Output file (default: stdout)");
  app.add_option("--format", global.format, "Output format for reports")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--quiet", global.quiet, "Suppress warnings");

  DistArgs dist_args;
  auto* dist = app.add_subcommand("dist", "Distance between two datasets");
  dist->fallthrough();
  dist->add_option("--src", dist_args.src, "Source dataset (CSV or OTDDSET1)");
  dist->add_option("--tgt", dist_args.tgt, "Target dataset (CSV or OTDDSET1)");
  dist_args.opts.attach(dist);
  dist->add_flag("--augmented", dist_args.augmented,
                 "Augmented-embedding fast path (diagonal covariances)");
  dist->add_option("--coupling", dist_args.coupling_path,
                   "Export the transport plan as CSV");
  dist->add_flag("--coupling-dense", dist_args.coupling_dense,
                 "Dense plan export instead of i,j,mass triplets");
  dist->add_option("--label-dist", dist_args.label_dist_path,
                   "Export the label-distance matrix as CSV");
  dist->add_option("--moment-cache", dist_args.moment_cache,
                   "Directory of reusable per-dataset moment files");
  dist->add_option("--manifest", dist_args.manifest_path,
                   "Run manifest path (default: <out>.manifest.json)");
  dist->add_option("--from-manifest", dist_args.from_manifest,
                   "Re-run the configuration recorded in a manifest");

  PairwiseArgs pairwise_args;
  auto* pairwise = app.add_subcommand("pairwise", "All-pairs distance matrix");
  pairwise->fallthrough();
  pairwise->add_option("inputs", pairwise_args.inputs, "Dataset files");
  pairwise->add_option("--dir", pairwise_args.dir,
                       "Directory of datasets (.csv/.otdd/.bin)");
  pairwise_args.opts.attach(pairwise);
  pairwise->add_option("--manifest", pairwise_args.manifest_path,
                       "Manifest path (default: <out>.manifest.json)");

  RobustnessArgs robustness_args;
  auto* robustness =
      app.add_subcommand("robustness", "Distance stability under subsampling");
  robustness->fallthrough();
  robustness->add_option("--src", robustness_args.src, "Source dataset")
      ->required();
  robustness->add_option("--tgt", robustness_args.tgt, "Target dataset")
      ->required();
  robustness
      ->add_option("--sizes", robustness_args.sizes,
                   "Subsample sizes (grid is sizes x sizes)")
      ->required()
      ->delimiter(',');
  robustness->add_option("--reps", robustness_args.reps,
                         "Repetitions per grid cell");
  robustness->add_flag("--no-stratified", robustness_args.no_stratified,
                       "Plain instead of stratified subsampling");
  robustness_args.opts.attach(robustness);

  CorrelateArgs correlate_args;
  auto* correlate_cmd = app.add_subcommand(
      "correlate", "Correlate distances with external transfer scores");
  correlate_cmd->fallthrough();
  correlate_cmd
      ->add_option("--table", correlate_args.table,
                   "CSV with pair,distance,transfer columns")
      ->required();

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Stage timings on synthetic data");
  bench->fallthrough();
  bench->add_option("--sizes", bench_args.sizes, "Dataset sizes")->delimiter(',');
  bench->add_option("--dims", bench_args.dims, "Feature dimensions")
      ->delimiter(',');
  bench->add_option("--classes", bench_args.classes, "Class counts")
      ->delimiter(',');
  bench->add_option("--methods", bench_args.methods, "Label methods to time")
      ->delimiter(',');
  bench_args.opts.attach(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;  // usage error
  }

  try {
    if (dist->parsed()) {
      if (dist_args.from_manifest.empty() &&
          (dist_args.src.empty() || dist_args.tgt.empty()))
        throw std::invalid_argument(
            "dist needs --src and --tgt (or --from-manifest)");
      return run_dist(global, dist_args);
    }
    if (pairwise->parsed()) return run_pairwise(global, pairwise_args);
    if (robustness->parsed()) return run_robustness(global, robustness_args);
    if (correlate_cmd->parsed()) return run_correlate(global, correlate_args);
    if (bench->parsed()) return run_bench_cmd(global, bench_args);
  } catch (const otdd::DataError& e) {
    std::cerr << "otdd: data error: " << e.what() << "\n";
    return 3;
  } catch (const otdd::SolverError& e) {
    std::cerr << "otdd: solver error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "otdd: usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "otdd: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
