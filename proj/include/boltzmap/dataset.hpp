#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "boltzmap/errors.hpp"

namespace boltzmap {

struct IdxMagicError : DataError {
  using DataError::DataError;
};
struct IdxTruncatedError : DataError {
  using DataError::DataError;
};
struct IdxDimensionError : DataError {
  using DataError::DataError;
};

/// Raw IDX container contents: unsigned-byte payload plus dimensions.
struct IdxTensor {
  std::vector<int> dims;
  std::vector<std::uint8_t> data;
  std::string source_digest;  // fnv1a-64 of the raw file bytes, hex
};

/// Reads an IDX file (big-endian header). Accepts image files
/// (magic 0x00000803, 3 dims) and label files (magic 0x00000801, 1 dim).
IdxTensor load_idx(const std::string& path);

/// Binary 0/1 dataset, rows packed one bit per feature.
class BinaryDataset {
 public:
  BinaryDataset(long n_items, int n_features, std::string source_digest = {});

  long n_items() const { return n_items_; }
  int n_features() const { return n_features_; }
  const std::string& source_digest() const { return digest_; }

  bool get(long item, int feature) const;
  void set(long item, int feature, bool value);

  Eigen::VectorXd row(long item) const;
  Eigen::MatrixXd rows(const std::vector<long>& items) const;
  Eigen::MatrixXd all_rows() const;

  /// Per-feature mean activity over all items.
  Eigen::VectorXd feature_means() const;
  double mean_activity() const;

 private:
  long n_items_;
  int n_features_;
  int row_words_;
  std::vector<std::uint64_t> bits_;
  std::string digest_;
};

/// Thresholds image bytes at `threshold` (>= maps to 1) and flattens each
/// image row-major into one binary row.
BinaryDataset binarize(const IdxTensor& images, int threshold = 128);

/// Rows of comma-separated 0/1 values; '#' lines ignored.
BinaryDataset load_binary_csv(const std::string& path);

/// Dataset from a dense 0/1 matrix (one row per item).
BinaryDataset dataset_from_rows(const Eigen::MatrixXd& rows);

/// FNV-1a 64-bit digest, hex-encoded.
std::string fnv1a_hex(const void* data, std::size_t size);
std::string file_digest(const std::string& path);

}  // namespace boltzmap
