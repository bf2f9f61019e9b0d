#ifndef OTDD_RESULT_IO_HPP
#define OTDD_RESULT_IO_HPP

#include <string>

#include <json.hpp>

#include "otdd/otdd.hpp"

namespace otdd {

nlohmann::json config_to_json(const OtddConfig& cfg);
OtddConfig config_from_json(const nlohmann::json& j);

/// Result document with a schema_version field. The label-distance matrix
/// is inlined when k_A*k_B <= inline_cap; above that it is written to
/// `sidecar_path` (which must then be non-empty) and referenced by path.
nlohmann::json result_to_json(const OtddResult& result,
                              std::size_t inline_cap = 10'000,
                              const std::string& sidecar_path = "");

/// Label-distance matrix as CSV: header row of target label names, one row
/// per source label.
void write_label_distance_csv(const LabelDistanceMatrix& label_distances,
                              const std::vector<std::string>& src_names,
                              const std::vector<std::string>& tgt_names,
                              const std::string& path);

/// One-row CSV rendering of the headline result fields.
std::string result_to_csv(const OtddResult& result);

}  // namespace otdd

#endif  // OTDD_RESULT_IO_HPP
