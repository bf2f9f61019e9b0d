#include "otdd/stats.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "otdd/errors.hpp"
#include "otdd/parallel.hpp"

namespace otdd {

namespace {

constexpr char kMagic[8] = {'O', 'T', 'D', 'D', 'M', 'O', 'M', '1'};

template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is, const char* what) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw DataError(std::string("truncated moment cache while reading ") + what);
  return v;
}

}  // namespace

MomentSummary class_moments(const LabeledDataset& ds, int class_id,
                            std::size_t batch_size, double reg) {
  if (batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
  if (reg < 0) throw std::invalid_argument("regularizer must be nonnegative");
  if (class_id < 0 || static_cast<std::size_t>(class_id) >= ds.num_classes())
    throw std::invalid_argument("unknown class id " + std::to_string(class_id));

  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (ds.labels[i] == class_id) rows.push_back(static_cast<Eigen::Index>(i));
  if (rows.empty())
    throw std::invalid_argument("class " + std::to_string(class_id) + " has no rows");

  const auto d = ds.features.cols();
  const auto ny = static_cast<double>(rows.size());
  Eigen::MatrixXd batch(static_cast<Eigen::Index>(std::min(batch_size, rows.size())), d);

  // pass 1: mean
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
  for (std::size_t lo = 0; lo < rows.size(); lo += batch_size) {
    const std::size_t hi = std::min(rows.size(), lo + batch_size);
    const auto b = static_cast<Eigen::Index>(hi - lo);
    for (Eigen::Index r = 0; r < b; ++r)
      batch.row(r) = ds.features.row(rows[lo + static_cast<std::size_t>(r)]);
    sum += batch.topRows(b).colwise().sum().transpose();
  }
  const Eigen::VectorXd mean = sum / ny;

  // pass 2: centered scatter
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t lo = 0; lo < rows.size(); lo += batch_size) {
    const std::size_t hi = std::min(rows.size(), lo + batch_size);
    const auto b = static_cast<Eigen::Index>(hi - lo);
    for (Eigen::Index r = 0; r < b; ++r)
      batch.row(r) = ds.features.row(rows[lo + static_cast<std::size_t>(r)]) -
                     mean.transpose();
    scatter.noalias() += batch.topRows(b).transpose() * batch.topRows(b);
  }

  MomentSummary out;
  out.mean = mean;
  out.covariance = scatter / ny;
  out.covariance = ((out.covariance + out.covariance.transpose()) * 0.5).eval();
  out.covariance.diagonal().array() += reg;
  out.count = rows.size();
  out.regularizer = reg;
  return out;
}

std::vector<MomentSummary> all_moments(const LabeledDataset& ds,
                                       std::size_t batch_size, double reg,
                                       int threads) {
  const std::size_t k = ds.num_classes();
  std::vector<MomentSummary> out(k);
  parallel_blocks(k, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t c = lo; c < hi; ++c)
      out[c] = class_moments(ds, static_cast<int>(c), batch_size, reg);
  });
  return out;
}

void apply_relative_regularization(MomentSummary& m, double rel) {
  if (rel < 0) throw std::invalid_argument("regularizer must be nonnegative");
  const auto d = m.covariance.rows();
  const double lambda = rel * m.covariance.trace() / static_cast<double>(d);
  m.covariance.diagonal().array() += lambda;
  m.regularizer += lambda;
}

void apply_relative_regularization(std::vector<MomentSummary>& ms, double rel) {
  for (auto& m : ms) apply_relative_regularization(m, rel);
}

void diagonalize_covariance(MomentSummary& m) {
  m.covariance = m.covariance.diagonal().asDiagonal();
}

void save_moments(const std::vector<MomentSummary>& moments,
                  const std::string& path) {
  if (moments.empty()) throw std::invalid_argument("no moments to save");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out.write(kMagic, sizeof(kMagic));
  const std::uint64_t k = moments.size();
  const std::uint64_t d = moments.front().dim();
  write_pod(out, k);
  write_pod(out, d);
  for (std::uint64_t c = 0; c < k; ++c) {
    const auto& m = moments[c];
    if (m.dim() != d) throw std::invalid_argument("inconsistent moment dimensions");
    write_pod(out, c);
    write_pod(out, static_cast<std::uint64_t>(m.count));
    write_pod(out, m.regularizer);
    for (Eigen::Index i = 0; i < m.mean.size(); ++i) write_pod(out, m.mean[i]);
    for (Eigen::Index i = 0; i < m.covariance.rows(); ++i)
      for (Eigen::Index j = 0; j < m.covariance.cols(); ++j)
        write_pod(out, m.covariance(i, j));
  }
  if (!out) throw DataError("write failure on '" + path + "'");
}

std::vector<MomentSummary> load_moments(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw DataError("'" + path + "': bad magic, not an OTDDMOM1 file");
  const auto k = read_pod<std::uint64_t>(in, "class count");
  const auto d = read_pod<std::uint64_t>(in, "dimension");
  std::vector<MomentSummary> out(k);
  for (std::uint64_t c = 0; c < k; ++c) {
    const auto id = read_pod<std::uint64_t>(in, "class id");
    if (id != c)
      throw DataError("'" + path + "': class ids out of order");
    MomentSummary m;
    m.count = read_pod<std::uint64_t>(in, "count");
    m.regularizer = read_pod<double>(in, "regularizer");
    m.mean.resize(static_cast<Eigen::Index>(d));
    for (std::uint64_t i = 0; i < d; ++i)
      m.mean[static_cast<Eigen::Index>(i)] = read_pod<double>(in, "mean");
    m.covariance.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::uint64_t i = 0; i < d; ++i)
      for (std::uint64_t j = 0; j < d; ++j)
        m.covariance(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            read_pod<double>(in, "covariance");
    out[c] = std::move(m);
  }
  return out;
}

}  // namespace otdd
