#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <utility>
#include <vector>

namespace mpmf {

/// Labeled samples, one row per sample. Labels are arbitrary integer class ids.
struct Dataset {
  Eigen::MatrixXd features;
  std::vector<int> labels;

  Eigen::Index rows() const { return features.rows(); }
  Eigen::Index feature_dim() const { return features.cols(); }

  /// Throws DataError when labels and rows disagree or a value is not finite.
  void validate() const;
};

/// Two-class view of a dataset with labels in {+1, -1}.
struct BinaryDataset {
  Eigen::MatrixXd features;
  std::vector<int> labels;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;

  Eigen::Index rows() const { return features.rows(); }
  Eigen::Index feature_dim() const { return features.cols(); }

  /// Builds from raw parts, checking labels and recomputing the counts.
  static BinaryDataset from_parts(Eigen::MatrixXd features, std::vector<int> labels);

  /// Rows of one class (+1 or -1), in their original order.
  Eigen::MatrixXd class_rows(int label) const;
};

/// Parses LIBSVM/svmlight text: `<label> <index>:<value> ...` with 1-based,
/// strictly increasing indices. Absent indices become 0. LF and CRLF accepted.
Dataset parse_sparse(std::istream& in);

/// Parses a headerless numeric CSV; `label_column` is removed from the features.
Dataset parse_csv(std::istream& in, std::size_t label_column);

Dataset load_sparse(const std::filesystem::path& path);
Dataset load_csv(const std::filesystem::path& path, std::size_t label_column);

/// Writes LIBSVM text, omitting zeros. Values use shortest round-trip formatting,
/// so `parse_sparse(write_sparse(d))` reproduces `d` exactly.
void write_sparse(std::ostream& out, const Dataset& data);

/// One-vs-all relabeling: `positive_label` -> +1, everything else -> -1.
BinaryDataset binarize_one_vs_all(const Dataset& data, int positive_label);

/// Stratified, seeded split. Each class contributes ceil(fraction * n_class)
/// samples to the training part, so a class with at least one sample is never
/// absent from training.
std::pair<BinaryDataset, BinaryDataset> split(const BinaryDataset& data, double train_fraction,
                                              std::uint64_t seed);

/// Deterministic Fisher-Yates permutation of [0, n) driven by mt19937_64.
/// Platform independent, unlike std::shuffle.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

/// Sorted distinct labels.
std::vector<int> distinct_labels(const std::vector<int>& labels);

}  // namespace mpmf
