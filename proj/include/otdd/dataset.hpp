#ifndef OTDD_DATASET_HPP
#define OTDD_DATASET_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace otdd {

/// A labeled dataset: an n x d feature matrix, one class id per row, and
/// per-sample weights of the empirical measure. Immutable by convention
/// after construction; safe to share across threads.
struct LabeledDataset {
  Eigen::MatrixXd features;            // n rows, d columns
  std::vector<std::int32_t> labels;    // class ids in 0..k-1
  std::vector<std::string> label_names;  // size k, display order
  Eigen::VectorXd weights;             // strictly positive, sums to 1

  std::size_t size() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }
  std::size_t num_classes() const { return label_names.size(); }

  /// Check all type invariants; throws DataError with a diagnostic.
  void validate() const;
};

/// Row indices grouped by class id. groups[c] is sorted ascending and the
/// groups partition 0..n-1.
struct ClassIndex {
  std::vector<std::vector<std::int64_t>> groups;

  std::size_t num_classes() const { return groups.size(); }
};

/// Build a dataset from components. Label names default to "0".."k-1" and
/// weights to uniform 1/n. Validates before returning.
LabeledDataset make_dataset(Eigen::MatrixXd features,
                            std::vector<std::int32_t> labels,
                            std::vector<std::string> label_names = {},
                            Eigen::VectorXd weights = Eigen::VectorXd());

/// Load a CSV file with one label column, given by 0-based index.
/// Distinct label strings are mapped to class ids in first-appearance
/// order; weights are uniform.
LabeledDataset load_csv(const std::string& path, int label_index,
                        bool has_header);

/// Load a CSV file with the label column given by header name.
LabeledDataset load_csv(const std::string& path,
                        const std::string& label_name);

/// Resolve a user-facing column spec (name or decimal index) against an
/// optional header row. Returns the 0-based column index.
int resolve_label_column(const std::vector<std::string>& header,
                         const std::string& spec, bool has_header);

/// Binary round-trip format, magic "OTDDSET1". Layout: u64 n, u64 d, u64 k,
/// n*d little-endian f64 features row-major, n u32 label ids, k names as
/// u32 byte length + UTF-8 bytes, n f64 weights.
void save_binary(const LabeledDataset& ds, const std::string& path);
LabeledDataset load_binary(const std::string& path);

/// Detect the on-disk format by magic bytes and load accordingly. CSV files
/// use the given label column spec.
LabeledDataset load_any(const std::string& path, const std::string& label_spec,
                        bool has_header);

/// Deterministic subsample of n_target rows. Stratified mode keeps
/// per-class counts proportional to the original shares (largest-remainder
/// rounding, every class at least one row). Weights are re-uniformized.
/// Classes that lose all rows in non-stratified mode are dropped and the
/// remaining ids compacted, preserving relative order.
LabeledDataset subsample(const LabeledDataset& ds, std::size_t n_target,
                         std::uint64_t seed, bool stratified);

/// Largest-remainder apportionment of n_target over class sizes, each
/// class at least 1. Exposed for testing.
std::vector<std::size_t> stratified_counts(const std::vector<std::size_t>& class_sizes,
                                           std::size_t n_target);

/// Group row indices by class id.
ClassIndex class_partition(const LabeledDataset& ds);

}  // namespace otdd

#endif  // OTDD_DATASET_HPP
