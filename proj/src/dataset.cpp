#include "otdd/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "otdd/errors.hpp"

namespace otdd {

namespace {

constexpr char kMagic[8] = {'O', 'T', 'D', 'D', 'S', 'E', 'T', '1'};

// Minimal RFC-4180 line split: commas separate fields, double quotes may
// wrap a field and are doubled to escape.
std::vector<std::string> split_csv_line(const std::string& line) {
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
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is, const std::string& what) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw DataError("truncated dataset file while reading " + what);
  return v;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 step
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

void LabeledDataset::validate() const {
  const auto n = static_cast<std::size_t>(features.rows());
  if (n == 0) throw DataError("empty dataset");
  if (labels.size() != n)
    throw DataError("label count " + std::to_string(labels.size()) +
                    " does not match row count " + std::to_string(n));
  const std::size_t k = label_names.size();
  if (k == 0) throw DataError("dataset has no classes");
  std::vector<char> seen(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= k)
      throw DataError("row " + std::to_string(i) + ": label id " +
                      std::to_string(y) + " out of range for k=" +
                      std::to_string(k));
    seen[static_cast<std::size_t>(y)] = 1;
  }
  for (std::size_t c = 0; c < k; ++c)
    if (!seen[c])
      throw DataError("class " + std::to_string(c) + " (" + label_names[c] +
                      ") has no rows");
  if (!features.allFinite()) {
    for (Eigen::Index i = 0; i < features.rows(); ++i)
      for (Eigen::Index j = 0; j < features.cols(); ++j)
        if (!std::isfinite(features(i, j)))
          throw DataError("non-finite feature at row " + std::to_string(i) +
                          ", column " + std::to_string(j));
  }
  if (static_cast<std::size_t>(weights.size()) != n)
    throw DataError("weight count does not match row count");
  double total = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0))
      throw DataError("row " + std::to_string(i) + ": weight must be > 0");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw DataError("weights sum to " + std::to_string(total) +
                    ", expected 1 within 1e-12");
}

LabeledDataset make_dataset(Eigen::MatrixXd features,
                            std::vector<std::int32_t> labels,
                            std::vector<std::string> label_names,
                            Eigen::VectorXd weights) {
  LabeledDataset ds;
  ds.features = std::move(features);
  ds.labels = std::move(labels);
  if (label_names.empty()) {
    std::int32_t k = 0;
    for (auto y : ds.labels) k = std::max(k, y + 1);
    for (std::int32_t c = 0; c < k; ++c)
      label_names.push_back(std::to_string(c));
  }
  ds.label_names = std::move(label_names);
  if (weights.size() == 0) {
    const auto n = ds.features.rows();
    weights = Eigen::VectorXd::Constant(n, n > 0 ? 1.0 / static_cast<double>(n) : 0.0);
  }
  ds.weights = std::move(weights);
  ds.validate();
  return ds;
}

int resolve_label_column(const std::vector<std::string>& header,
                         const std::string& spec, bool has_header) {
  if (has_header) {
    for (std::size_t j = 0; j < header.size(); ++j)
      if (header[j] == spec) return static_cast<int>(j);
  }
  int idx = 0;
  const auto* first = spec.data();
  const auto* last = spec.data() + spec.size();
  auto [p, ec] = std::from_chars(first, last, idx);
  if (ec == std::errc() && p == last) return idx;
  throw DataError("label column '" + spec + "' is neither a header name" +
                  (has_header ? "" : " (file has no header)") +
                  " nor a column index");
}

namespace {

LabeledDataset load_csv_impl(const std::string& path, int label_index,
                             bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");

  std::vector<std::vector<double>> rows;
  std::vector<std::int32_t> labels;
  std::vector<std::string> label_names;
  std::unordered_map<std::string, std::int32_t> label_ids;

  std::string line;
  std::size_t lineno = 0;
  std::size_t ncols = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (first) {
      ncols = fields.size();
      if (label_index < 0) label_index += static_cast<int>(ncols);  // -1 = last
      if (label_index < 0 || static_cast<std::size_t>(label_index) >= ncols)
        throw DataError("label column index " + std::to_string(label_index) +
                        " out of range for " + std::to_string(ncols) +
                        " columns");
      first = false;
      if (has_header) continue;
    }
    if (fields.size() != ncols)
      throw DataError("line " + std::to_string(lineno) + ": expected " +
                      std::to_string(ncols) + " fields, got " +
                      std::to_string(fields.size()));

    const std::string label = trim(fields[static_cast<std::size_t>(label_index)]);
    if (label.empty())
      throw DataError("line " + std::to_string(lineno) + ": empty label");
    auto [it, inserted] =
        label_ids.try_emplace(label, static_cast<std::int32_t>(label_names.size()));
    if (inserted) label_names.push_back(label);
    labels.push_back(it->second);

    std::vector<double> row;
    row.reserve(ncols - 1);
    for (std::size_t j = 0; j < ncols; ++j) {
      if (j == static_cast<std::size_t>(label_index)) continue;
      double v = 0.0;
      if (!parse_double(fields[j], v) || !std::isfinite(v))
        throw DataError("line " + std::to_string(lineno) + ", column " +
                        std::to_string(j) + ": '" + fields[j] +
                        "' is not a finite number");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("'" + path + "' contains no data rows");

  const std::size_t n = rows.size();
  const std::size_t d = rows.front().size();
  Eigen::MatrixXd features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];

  return make_dataset(std::move(features), std::move(labels),
                      std::move(label_names));
}

}  // namespace

LabeledDataset load_csv(const std::string& path, int label_index,
                        bool has_header) {
  return load_csv_impl(path, label_index, has_header);
}

LabeledDataset load_csv(const std::string& path, const std::string& label_name) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  std::string header_line;
  if (!std::getline(in, header_line))
    throw DataError("'" + path + "' is empty");
  if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();
  const auto header = split_csv_line(header_line);
  const int idx = resolve_label_column(header, label_name, true);
  return load_csv_impl(path, idx, true);
}

void save_binary(const LabeledDataset& ds, const std::string& path) {
  ds.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out.write(kMagic, sizeof(kMagic));
  const std::uint64_t n = ds.size(), d = ds.dim(), k = ds.num_classes();
  write_pod(out, n);
  write_pod(out, d);
  write_pod(out, k);
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < d; ++j)
      write_pod(out, ds.features(static_cast<Eigen::Index>(i),
                                 static_cast<Eigen::Index>(j)));
  for (auto y : ds.labels) write_pod(out, static_cast<std::uint32_t>(y));
  for (const auto& name : ds.label_names) {
    write_pod(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
  }
  for (Eigen::Index i = 0; i < ds.weights.size(); ++i)
    write_pod(out, ds.weights[i]);
  if (!out) throw DataError("write failure on '" + path + "'");
}

LabeledDataset load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw DataError("'" + path + "': bad magic, not an OTDDSET1 file");
  const auto n = read_pod<std::uint64_t>(in, "row count");
  const auto d = read_pod<std::uint64_t>(in, "dimension");
  const auto k = read_pod<std::uint64_t>(in, "class count");

  LabeledDataset ds;
  ds.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < d; ++j)
      ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          read_pod<double>(in, "features");
  ds.labels.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto y = read_pod<std::uint32_t>(in, "labels");
    if (y >= k)
      throw DataError("'" + path + "': label id " + std::to_string(y) +
                      " >= declared class count " + std::to_string(k));
    ds.labels.push_back(static_cast<std::int32_t>(y));
  }
  for (std::uint64_t c = 0; c < k; ++c) {
    const auto len = read_pod<std::uint32_t>(in, "label name length");
    std::string name(len, '\0');
    in.read(name.data(), len);
    if (!in) throw DataError("truncated dataset file while reading label names");
    ds.label_names.push_back(std::move(name));
  }
  ds.weights.resize(static_cast<Eigen::Index>(n));
  for (std::uint64_t i = 0; i < n; ++i)
    ds.weights[static_cast<Eigen::Index>(i)] = read_pod<double>(in, "weights");
  ds.validate();
  return ds;
}

LabeledDataset load_any(const std::string& path, const std::string& label_spec,
                        bool has_header) {
  {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw DataError("cannot open '" + path + "' for reading");
    char magic[8] = {};
    probe.read(magic, sizeof(magic));
    if (probe.gcount() == 8 && std::memcmp(magic, kMagic, sizeof(kMagic)) == 0)
      return load_binary(path);
  }
  if (has_header) {
    std::ifstream in(path);
    std::string header_line;
    std::getline(in, header_line);
    if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();
    const int idx =
        resolve_label_column(split_csv_line(header_line), label_spec, true);
    return load_csv_impl(path, idx, true);
  }
  const int idx = resolve_label_column({}, label_spec, false);
  return load_csv_impl(path, idx, false);
}

std::vector<std::size_t> stratified_counts(const std::vector<std::size_t>& class_sizes,
                                           std::size_t n_target) {
  const std::size_t k = class_sizes.size();
  const std::size_t n =
      std::accumulate(class_sizes.begin(), class_sizes.end(), std::size_t{0});
  if (n_target < k)
    throw std::invalid_argument("stratified subsample needs n_target >= k");
  if (n_target > n)
    throw std::invalid_argument("n_target exceeds dataset size");

  // Exact integer quotas: count_c ~ n_target * size_c / n.
  std::vector<std::size_t> counts(k);
  std::vector<std::pair<std::size_t, std::size_t>> remainders(k);  // (rem, class)
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < k; ++c) {
    counts[c] = n_target * class_sizes[c] / n;
    remainders[c] = {n_target * class_sizes[c] % n, c};
    assigned += counts[c];
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;  // larger remainder first
    return a.second < b.second;                        // tiebreak: smaller class id
  });
  for (std::size_t i = 0; assigned < n_target; i = (i + 1) % k) {
    const std::size_t c = remainders[i].second;
    if (counts[c] < class_sizes[c]) {
      ++counts[c];
      ++assigned;
    }
  }
  // Every class keeps at least one row; take from the largest count.
  for (std::size_t c = 0; c < k; ++c) {
    while (counts[c] == 0) {
      std::size_t donor = k;
      for (std::size_t o = 0; o < k; ++o)
        if (counts[o] > 1 && (donor == k || counts[o] > counts[donor])) donor = o;
      if (donor == k) throw std::invalid_argument("cannot satisfy one row per class");
      --counts[donor];
      ++counts[c];
    }
  }
  return counts;
}

LabeledDataset subsample(const LabeledDataset& ds, std::size_t n_target,
                         std::uint64_t seed, bool stratified) {
  ds.validate();
  const std::size_t n = ds.size();
  if (n_target == 0) throw std::invalid_argument("n_target must be positive");
  if (n_target > n)
    throw std::invalid_argument("n_target " + std::to_string(n_target) +
                                " exceeds dataset size " + std::to_string(n));

  std::vector<std::int64_t> chosen;
  chosen.reserve(n_target);
  if (stratified) {
    const auto index = class_partition(ds);
    std::vector<std::size_t> sizes;
    sizes.reserve(index.groups.size());
    for (const auto& g : index.groups) sizes.push_back(g.size());
    const auto counts = stratified_counts(sizes, n_target);
    for (std::size_t c = 0; c < index.groups.size(); ++c) {
      auto rows = index.groups[c];
      std::mt19937_64 rng(mix_seed(seed, c));
      std::shuffle(rows.begin(), rows.end(), rng);
      chosen.insert(chosen.end(), rows.begin(), rows.begin() +
                    static_cast<std::ptrdiff_t>(counts[c]));
    }
  } else {
    std::vector<std::int64_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::mt19937_64 rng(mix_seed(seed, 0x7173ULL));
    std::shuffle(all.begin(), all.end(), rng);
    chosen.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_target));
  }
  std::sort(chosen.begin(), chosen.end());

  // Drop classes that lost every row; compact ids in original order.
  const std::size_t k = ds.num_classes();
  std::vector<std::size_t> class_rows(k, 0);
  for (auto r : chosen) ++class_rows[static_cast<std::size_t>(ds.labels[static_cast<std::size_t>(r)])];
  std::vector<std::int32_t> remap(k, -1);
  std::vector<std::string> names;
  std::int32_t next = 0;
  for (std::size_t c = 0; c < k; ++c) {
    if (class_rows[c] > 0) {
      remap[c] = next++;
      names.push_back(ds.label_names[c]);
    }
  }

  LabeledDataset out;
  out.features.resize(static_cast<Eigen::Index>(n_target), ds.features.cols());
  out.labels.reserve(n_target);
  for (std::size_t i = 0; i < n_target; ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) =
        ds.features.row(static_cast<Eigen::Index>(chosen[i]));
    out.labels.push_back(remap[static_cast<std::size_t>(
        ds.labels[static_cast<std::size_t>(chosen[i])])]);
  }
  out.label_names = std::move(names);
  out.weights = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n_target),
                                          1.0 / static_cast<double>(n_target));
  out.validate();
  return out;
}

ClassIndex class_partition(const LabeledDataset& ds) {
  ds.validate();
  ClassIndex index;
  index.groups.resize(ds.num_classes());
  for (std::size_t i = 0; i < ds.size(); ++i)
    index.groups[static_cast<std::size_t>(ds.labels[i])].push_back(
        static_cast<std::int64_t>(i));
  return index;
}

}  // namespace otdd
