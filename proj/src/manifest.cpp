#include "otdd/manifest.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "otdd/errors.hpp"

namespace otdd {

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "' for digesting");
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    const auto got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ULL;
    }
  }
  return hash;
}

std::string digest_hex(std::uint64_t digest) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << digest;
  return os.str();
}

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& in : m.inputs)
    inputs.push_back({{"path", in.path},
                      {"digest", in.digest},
                      {"bytes", in.bytes}});
  return {{"schema_version", 1},
          {"command", m.command},
          {"tool_version", m.tool_version},
          {"timestamp", m.timestamp},
          {"seed", m.seed},
          {"config", m.config},
          {"inputs", inputs},
          {"outputs", m.outputs}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.timestamp = j.value("timestamp", std::string());
  m.seed = j.at("seed").get<std::uint64_t>();
  m.config = j.value("config", nlohmann::json::object());
  for (const auto& in : j.value("inputs", nlohmann::json::array())) {
    RunManifest::Input rec;
    rec.path = in.at("path").get<std::string>();
    rec.digest = in.at("digest").get<std::string>();
    rec.bytes = in.value("bytes", std::uint64_t{0});
    m.inputs.push_back(std::move(rec));
  }
  for (const auto& out : j.value("outputs", nlohmann::json::array()))
    m.outputs.push_back(out.get<std::string>());
  return m;
}

void write_manifest(const RunManifest& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << to_json(m).dump(2) << "\n";
  if (!out) throw DataError("write failure on '" + path + "'");
}

RunManifest read_manifest(const std::string& path, bool verify_digests) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("'" + path + "' is not valid manifest JSON: " + e.what());
  }
  RunManifest m = manifest_from_json(j);
  if (verify_digests) {
    for (const auto& rec : m.inputs) {
      const std::string actual = digest_hex(fnv1a64_file(rec.path));
      if (actual != rec.digest)
        throw DataError("digest mismatch for '" + rec.path + "': manifest has " +
                        rec.digest + ", file is " + actual);
    }
  }
  return m;
}

}  // namespace otdd
