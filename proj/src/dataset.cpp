#include "boltzmap/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace boltzmap {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::uint32_t read_be32(const std::uint8_t* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

}  // namespace

std::string fnv1a_hex(const void* data, std::size_t size) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return fnv1a_hex(bytes.data(), bytes.size());
}

IdxTensor load_idx(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() < 4) {
    throw IdxTruncatedError(path + ": file has " + std::to_string(bytes.size()) +
                            " bytes, header needs 4 (offset 0)");
  }
  const std::uint32_t magic = read_be32(bytes.data());
  int n_dims = 0;
  if (magic == kImagesMagic) {
    n_dims = 3;
  } else if (magic == kLabelsMagic) {
    n_dims = 1;
  } else {
    std::ostringstream msg;
    msg << path << ": bad magic 0x" << std::hex << magic
        << " at offset 0 (expected 0x803 images or 0x801 labels)";
    throw IdxMagicError(msg.str());
  }
  const std::size_t header = 4 + 4 * static_cast<std::size_t>(n_dims);
  if (bytes.size() < header) {
    throw IdxTruncatedError(path + ": file has " + std::to_string(bytes.size()) +
                            " bytes, header needs " + std::to_string(header) +
                            " (offset " + std::to_string(bytes.size()) + ")");
  }
  IdxTensor tensor;
  std::size_t expected = 1;
  for (int d = 0; d < n_dims; ++d) {
    const std::uint32_t dim = read_be32(bytes.data() + 4 + 4 * d);
    if (dim == 0 || dim > (1u << 30)) {
      throw IdxDimensionError(path + ": dimension " + std::to_string(d) + " is " +
                              std::to_string(dim) + " at offset " +
                              std::to_string(4 + 4 * d));
    }
    tensor.dims.push_back(static_cast<int>(dim));
    expected *= dim;
  }
  if (bytes.size() != header + expected) {
    throw IdxTruncatedError(path + ": payload expected " + std::to_string(expected) +
                            " bytes, found " + std::to_string(bytes.size() - header) +
                            " (offset " + std::to_string(bytes.size()) + ")");
  }
  tensor.source_digest = fnv1a_hex(bytes.data(), bytes.size());
  tensor.data.assign(bytes.begin() + static_cast<long>(header), bytes.end());
  return tensor;
}

BinaryDataset::BinaryDataset(long n_items, int n_features, std::string source_digest)
    : n_items_(n_items),
      n_features_(n_features),
      row_words_((n_features + 63) / 64),
      bits_(static_cast<std::size_t>(n_items) * static_cast<std::size_t>(row_words_), 0),
      digest_(std::move(source_digest)) {
  if (n_items < 1 || n_features < 1) {
    throw std::invalid_argument("dataset needs items >= 1 and features >= 1");
  }
}

bool BinaryDataset::get(long item, int feature) const {
  const std::size_t word =
      static_cast<std::size_t>(item) * row_words_ + static_cast<std::size_t>(feature / 64);
  return (bits_[word] >> (feature % 64)) & 1ull;
}

void BinaryDataset::set(long item, int feature, bool value) {
  const std::size_t word =
      static_cast<std::size_t>(item) * row_words_ + static_cast<std::size_t>(feature / 64);
  const std::uint64_t bit = 1ull << (feature % 64);
  if (value) {
    bits_[word] |= bit;
  } else {
    bits_[word] &= ~bit;
  }
}

Eigen::VectorXd BinaryDataset::row(long item) const {
  Eigen::VectorXd v(n_features_);
  for (int j = 0; j < n_features_; ++j) v(j) = get(item, j) ? 1.0 : 0.0;
  return v;
}

Eigen::MatrixXd BinaryDataset::rows(const std::vector<long>& items) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(items.size()), n_features_);
  for (std::size_t r = 0; r < items.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = row(items[r]).transpose();
  }
  return out;
}

Eigen::MatrixXd BinaryDataset::all_rows() const {
  Eigen::MatrixXd out(n_items_, n_features_);
  for (long r = 0; r < n_items_; ++r) out.row(r) = row(r).transpose();
  return out;
}

Eigen::VectorXd BinaryDataset::feature_means() const {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(n_features_);
  for (long r = 0; r < n_items_; ++r) {
    for (int j = 0; j < n_features_; ++j) {
      if (get(r, j)) mean(j) += 1.0;
    }
  }
  return mean / static_cast<double>(n_items_);
}

double BinaryDataset::mean_activity() const {
  return feature_means().mean();
}

BinaryDataset binarize(const IdxTensor& images, int threshold) {
  if (images.dims.size() != 3) {
    throw IdxDimensionError("binarize expects an image tensor with 3 dimensions");
  }
  const long n = images.dims[0];
  const int features = images.dims[1] * images.dims[2];
  BinaryDataset data(n, features, images.source_digest);
  for (long r = 0; r < n; ++r) {
    const std::uint8_t* px = images.data.data() + static_cast<std::size_t>(r) * features;
    for (int j = 0; j < features; ++j) {
      if (px[j] >= threshold) data.set(r, j, true);
    }
  }
  return data;
}

BinaryDataset load_binary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  std::vector<std::vector<bool>> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<bool> row;
    std::istringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok == "0") {
        row.push_back(false);
      } else if (tok == "1") {
        row.push_back(true);
      } else {
        throw DataError(path + ":" + std::to_string(line_no) +
                        ": entries must be 0 or 1, got '" + tok + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError(path + ":" + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(path + ": no data rows");
  BinaryDataset data(static_cast<long>(rows.size()),
                     static_cast<int>(rows.front().size()), file_digest(path));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j < rows[r].size(); ++j) {
      if (rows[r][j]) data.set(static_cast<long>(r), static_cast<int>(j), true);
    }
  }
  return data;
}

BinaryDataset dataset_from_rows(const Eigen::MatrixXd& rows) {
  BinaryDataset data(rows.rows(), static_cast<int>(rows.cols()));
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      const double x = rows(r, j);
      if (x != 0.0 && x != 1.0) {
        throw std::invalid_argument("dataset entries must be 0 or 1");
      }
      if (x == 1.0) data.set(r, static_cast<int>(j), true);
    }
  }
  return data;
}

}  // namespace boltzmap
