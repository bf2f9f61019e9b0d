#ifndef OTDD_MANIFEST_HPP
#define OTDD_MANIFEST_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace otdd {

/// Everything needed to reproduce one CLI run: command, resolved config,
/// input digests and the seed.
struct RunManifest {
  std::string command;
  std::string tool_version;
  std::string timestamp;  // ISO 8601, excluded from reproducibility checks
  std::uint64_t seed = 0;
  nlohmann::json config;

  struct Input {
    std::string path;
    std::string digest;  // fnv1a64 of the file bytes, hex
    std::uint64_t bytes = 0;
  };
  std::vector<Input> inputs;
  std::vector<std::string> outputs;
};

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64_file(const std::string& path);
std::string digest_hex(std::uint64_t digest);

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

void write_manifest(const RunManifest& m, const std::string& path);

/// Read a manifest and re-digest every input; a mismatch throws DataError.
RunManifest read_manifest(const std::string& path, bool verify_digests = true);

}  // namespace otdd

#endif  // OTDD_MANIFEST_HPP
