#include "otdd/result_io.hpp"

#include <fstream>
#include <sstream>

#include "otdd/errors.hpp"
#include "otdd/version.hpp"

namespace otdd {

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find(',') == std::string::npos && s.find('"') == std::string::npos)
    return s;
  std::string quoted = "\"";
  for (char c : s) quoted += c == '"' ? "\"\"" : std::string(1, c);
  quoted += '"';
  return quoted;
}

}  // namespace

nlohmann::json config_to_json(const OtddConfig& cfg) {
  return {{"label_method", to_string(cfg.label_method)},
          {"inner_p", cfg.inner_p},
          {"outer_q", cfg.outer_q},
          {"outer_solver", to_string(cfg.outer_solver)},
          {"epsilon", cfg.epsilon},
          {"epsilon_rel", cfg.epsilon_rel},
          {"tol", cfg.tol},
          {"max_iters", cfg.max_iters},
          {"cov_reg", cfg.cov_reg},
          {"sqrt_mode", cfg.sqrt_mode == SqrtMode::exact ? "exact" : "newton_schulz"},
          {"seed", cfg.seed},
          {"max_samples", cfg.max_samples},
          {"diagonal_cov", cfg.diagonal_cov},
          {"exact_fallback_sinkhorn", cfg.exact_fallback_sinkhorn},
          {"exact_cap", cfg.exact_cap}};
}

OtddConfig config_from_json(const nlohmann::json& j) {
  OtddConfig cfg;
  cfg.label_method = label_method_from_string(
      j.value("label_method", std::string("gaussian")));
  cfg.inner_p = j.value("inner_p", 2);
  cfg.outer_q = j.value("outer_q", 2);
  cfg.outer_solver =
      outer_solver_from_string(j.value("outer_solver", std::string("sinkhorn")));
  cfg.epsilon = j.value("epsilon", 0.0);
  cfg.epsilon_rel = j.value("epsilon_rel", 0.1);
  cfg.tol = j.value("tol", 1e-6);
  cfg.max_iters = j.value("max_iters", 5000);
  cfg.cov_reg = j.value("cov_reg", 1e-6);
  cfg.sqrt_mode = j.value("sqrt_mode", std::string("exact")) == "exact"
                      ? SqrtMode::exact
                      : SqrtMode::newton_schulz;
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.max_samples = j.value("max_samples", std::size_t{0});
  cfg.diagonal_cov = j.value("diagonal_cov", false);
  cfg.exact_fallback_sinkhorn = j.value("exact_fallback_sinkhorn", false);
  cfg.exact_cap = j.value("exact_cap", std::size_t{4'000'000});
  cfg.validate();
  return cfg;
}

nlohmann::json result_to_json(const OtddResult& result, std::size_t inline_cap,
                              const std::string& sidecar_path) {
  nlohmann::json j{
      {"schema_version", kResultSchemaVersion},
      {"distance", result.distance},
      {"raw_objective", result.raw_objective},
      {"epsilon_used", result.epsilon_used},
      {"converged", result.converged},
      {"iterations", result.iterations},
      {"marginal_error", result.marginal_error},
      {"sizes",
       {{"n", result.n},
        {"m", result.m},
        {"k_src", result.k_src},
        {"k_tgt", result.k_tgt},
        {"d", result.d}}},
      {"config", config_to_json(result.config)},
      {"timings",
       {{"subsample", result.timings.subsample},
        {"moments", result.timings.moments},
        {"label_matrix", result.timings.label_matrix},
        {"ground_cost", result.timings.ground_cost},
        {"outer_solve", result.timings.outer_solve},
        {"total", result.timings.total}}},
      {"label_method", to_string(result.label_distances.method)}};

  const auto& values = result.label_distances.values;
  const auto entries =
      static_cast<std::size_t>(values.rows()) * static_cast<std::size_t>(values.cols());
  if (values.size() == 0) {
    j["label_distances"] = nullptr;  // augmented path: never materialized
  } else if (entries <= inline_cap) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index y = 0; y < values.rows(); ++y) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index yp = 0; yp < values.cols(); ++yp)
        row.push_back(values(y, yp));
      rows.push_back(std::move(row));
    }
    j["label_distances"] = std::move(rows);
  } else {
    if (sidecar_path.empty())
      throw std::invalid_argument(
          "label-distance matrix exceeds the inline cap; a sidecar path is "
          "required");
    j["label_distances_path"] = sidecar_path;
  }
  return j;
}

void write_label_distance_csv(const LabelDistanceMatrix& label_distances,
                              const std::vector<std::string>& src_names,
                              const std::vector<std::string>& tgt_names,
                              const std::string& path) {
  const auto& values = label_distances.values;
  if (static_cast<std::size_t>(values.rows()) != src_names.size() ||
      static_cast<std::size_t>(values.cols()) != tgt_names.size())
    throw std::invalid_argument("label name counts do not match the matrix");
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out.precision(17);
  out << "src_label";
  for (const auto& name : tgt_names) out << ',' << csv_quote(name);
  out << '\n';
  for (Eigen::Index y = 0; y < values.rows(); ++y) {
    out << csv_quote(src_names[static_cast<std::size_t>(y)]);
    for (Eigen::Index yp = 0; yp < values.cols(); ++yp)
      out << ',' << values(y, yp);
    out << '\n';
  }
  if (!out) throw DataError("write failure on '" + path + "'");
}

std::string result_to_csv(const OtddResult& result) {
  std::ostringstream os;
  os.precision(17);
  os << "distance,raw_objective,n,m,k_src,k_tgt,d,label_method,outer_solver,"
        "outer_q,epsilon_used,converged,iterations,marginal_error\n";
  os << result.distance << ',' << result.raw_objective << ',' << result.n << ','
     << result.m << ',' << result.k_src << ',' << result.k_tgt << ','
     << result.d << ',' << to_string(result.label_distances.method) << ','
     << to_string(result.config.outer_solver) << ',' << result.config.outer_q
     << ',' << result.epsilon_used << ',' << (result.converged ? 1 : 0) << ','
     << result.iterations << ',' << result.marginal_error << '\n';
  return os.str();
}

}  // namespace otdd
