#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "errors.hpp"

namespace airvote::data {

struct Dataset {
  std::vector<double> features;  // n rows of f values, row-major
  std::vector<int> labels;       // each in [0, num_classes)
  std::size_t n = 0;
  std::size_t f = 0;
  int num_classes = 0;
  std::string name;

  const double* row(std::size_t i) const { return features.data() + i * f; }
};

inline void validate_dataset(const Dataset& ds) {
  if (ds.n == 0) throw ConsistencyError("dataset '" + ds.name + "' is empty");
  if (ds.features.size() != ds.n * ds.f)
    throw ConsistencyError("dataset '" + ds.name + "': feature matrix size " +
                           std::to_string(ds.features.size()) +
                           " does not match n*f");
  if (ds.labels.size() != ds.n)
    throw ConsistencyError("dataset '" + ds.name + "': label count " +
                           std::to_string(ds.labels.size()) +
                           " does not match sample count " +
                           std::to_string(ds.n));
  for (int y : ds.labels)
    if (y < 0 || y >= ds.num_classes)
      throw ConsistencyError("dataset '" + ds.name + "': label " +
                             std::to_string(y) + " outside [0, " +
                             std::to_string(ds.num_classes) + ")");
}

/// K disjoint index lists into a parent dataset, all of size subset_size;
/// trailing remainder samples are unused.
struct Partition {
  std::vector<std::vector<std::size_t>> subsets;
  std::size_t subset_size = 0;
};

/// K x K binary matrix with unit diagonal; row k lists which sub-datasets
/// worker k holds. Off-diagonal entries are independent Bernoulli(p) draws,
/// fixed for an entire run.
struct AllocationMatrix {
  std::vector<std::uint8_t> entries;  // row-major K x K
  std::size_t K = 0;
  double p = 0.0;

  std::uint8_t at(std::size_t k, std::size_t i) const {
    return entries[k * K + i];
  }
};

struct MiniBatch {
  std::vector<std::size_t> indices;  // distinct sample indices, all in one subset
  std::size_t subset = 0;
};

namespace detail {

inline std::uint32_t read_u32_be(std::istream& in, const std::string& path) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw IoError("truncated header in " + path);
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

}  // namespace detail

/// Reads an MNIST-style IDX image/label file pair. Pixels are scaled to
/// [0, 1]; labels must be digits 0-9.
inline Dataset load_mnist_idx(const std::string& images_path,
                              const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw IoError("cannot open image file " + images_path);
  std::ifstream lbl(labels_path, std::ios::binary);
  if (!lbl) throw IoError("cannot open label file " + labels_path);

  const std::uint32_t img_magic = detail::read_u32_be(img, images_path);
  if (img_magic != 2051)
    throw FormatError("bad magic " + std::to_string(img_magic) + " in " +
                      images_path + " (expected 2051 for images)");
  const std::uint32_t n_img = detail::read_u32_be(img, images_path);
  const std::uint32_t rows = detail::read_u32_be(img, images_path);
  const std::uint32_t cols = detail::read_u32_be(img, images_path);

  const std::uint32_t lbl_magic = detail::read_u32_be(lbl, labels_path);
  if (lbl_magic != 2049)
    throw FormatError("bad magic " + std::to_string(lbl_magic) + " in " +
                      labels_path + " (expected 2049 for labels)");
  const std::uint32_t n_lbl = detail::read_u32_be(lbl, labels_path);
  if (n_img != n_lbl)
    throw ConsistencyError("image/label count mismatch: " +
                           std::to_string(n_img) + " images vs " +
                           std::to_string(n_lbl) + " labels");

  Dataset ds;
  ds.n = n_img;
  ds.f = std::size_t(rows) * cols;
  ds.num_classes = 10;
  ds.name = std::filesystem::path(images_path).filename().string();

  std::vector<unsigned char> pixels(ds.n * ds.f);
  img.read(reinterpret_cast<char*>(pixels.data()),
           std::streamsize(pixels.size()));
  if (std::size_t(img.gcount()) != pixels.size())
    throw IoError("truncated image payload in " + images_path);

  std::vector<unsigned char> raw_labels(ds.n);
  lbl.read(reinterpret_cast<char*>(raw_labels.data()),
           std::streamsize(raw_labels.size()));
  if (std::size_t(lbl.gcount()) != raw_labels.size())
    throw IoError("truncated label payload in " + labels_path);

  ds.features.resize(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i)
    ds.features[i] = pixels[i] / 255.0;
  ds.labels.resize(ds.n);
  for (std::size_t i = 0; i < ds.n; ++i) {
    if (raw_labels[i] > 9)
      throw FormatError("label byte " + std::to_string(raw_labels[i]) +
                        " out of range in " + labels_path);
    ds.labels[i] = raw_labels[i];
  }
  validate_dataset(ds);
  return ds;
}

/// Gaussian blobs with unit covariance, one per class, class means at mutual
/// distance `separation`. Sample i gets class i % classes, so any prefix is
/// close to balanced.
inline Dataset generate_synthetic(int classes, std::size_t per_class,
                                  std::size_t f, double separation,
                                  std::uint64_t seed) {
  if (classes < 2) throw ConsistencyError("need at least 2 classes");
  if (per_class < 1) throw ConsistencyError("per_class must be positive");
  if (f < 1) throw ConsistencyError("feature dimension must be positive");
  if (!(separation > 0.0)) throw ConsistencyError("separation must be positive");
  if (classes > 2 && f < std::size_t(classes))
    throw ConsistencyError(
        "feature dimension too small to place " + std::to_string(classes) +
        " equidistant class means");

  // Class means. Two classes sit at +-separation/2 on the first axis; more
  // classes use scaled unit vectors e_c (mutual distance separation), shifted
  // so the centroid is at the origin.
  std::vector<std::vector<double>> means(classes, std::vector<double>(f, 0.0));
  if (classes == 2) {
    means[0][0] = -separation / 2.0;
    means[1][0] = separation / 2.0;
  } else {
    const double alpha = separation / std::sqrt(2.0);
    for (int c = 0; c < classes; ++c) {
      for (int j = 0; j < classes; ++j)
        means[c][j] = (j == c ? alpha : 0.0) - alpha / classes;
    }
  }

  Dataset ds;
  ds.n = per_class * std::size_t(classes);
  ds.f = f;
  ds.num_classes = classes;
  ds.name = "synthetic";
  ds.features.resize(ds.n * f);
  ds.labels.resize(ds.n);

  RngStream stream = make_stream(seed, "synthetic");
  for (std::size_t i = 0; i < ds.n; ++i) {
    const int c = int(i % std::size_t(classes));
    ds.labels[i] = c;
    double* x = ds.features.data() + i * f;
    for (std::size_t j = 0; j < f; ++j) x[j] = means[c][j] + stream.normal();
  }
  return ds;
}

/// Seeded shuffle of [0, N) split into K consecutive blocks of size
/// floor(N/K); the remainder samples are dropped.
inline Partition partition(const Dataset& ds, std::size_t K,
                           std::uint64_t seed) {
  if (K < 1) throw ConsistencyError("K must be positive");
  if (ds.n < K)
    throw ConsistencyError("cannot split " + std::to_string(ds.n) +
                           " samples into " + std::to_string(K) + " subsets");
  std::vector<std::size_t> perm(ds.n);
  for (std::size_t i = 0; i < ds.n; ++i) perm[i] = i;
  RngStream stream = make_stream(seed, "partition");
  for (std::size_t i = ds.n - 1; i > 0; --i) {
    const std::size_t j = stream.next_below(i + 1);
    std::swap(perm[i], perm[j]);
  }

  Partition part;
  part.subset_size = ds.n / K;
  part.subsets.resize(K);
  for (std::size_t k = 0; k < K; ++k)
    part.subsets[k].assign(perm.begin() + k * part.subset_size,
                           perm.begin() + (k + 1) * part.subset_size);
  return part;
}

inline AllocationMatrix generate_allocation(std::size_t K, double p,
                                            std::uint64_t seed) {
  if (K < 1) throw ConsistencyError("K must be positive");
  if (!(p >= 0.0 && p <= 1.0))
    throw ConsistencyError("allocation probability must be in [0, 1]");
  AllocationMatrix E;
  E.K = K;
  E.p = p;
  E.entries.assign(K * K, 0);
  RngStream stream = make_stream(seed, "allocation");
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < K; ++i) {
      E.entries[k * K + i] =
          (k == i) ? 1 : std::uint8_t(stream.uniform01() < p);
    }
  }
  return E;
}

/// Row k of the allocation matrix as an index set; k is always a member.
inline std::vector<std::vector<std::size_t>> assigned_sets(
    const AllocationMatrix& E) {
  std::vector<std::vector<std::size_t>> sets(E.K);
  for (std::size_t k = 0; k < E.K; ++k) {
    for (std::size_t i = 0; i < E.K; ++i)
      if (E.at(k, i)) sets[k].push_back(i);
  }
  return sets;
}

/// A distinct indices drawn uniformly without replacement from subset i.
inline MiniBatch sample_minibatch(const Partition& part, std::size_t i,
                                  std::size_t A, RngStream& stream) {
  if (i >= part.subsets.size())
    throw ConsistencyError("subset index " + std::to_string(i) +
                           " out of range");
  if (A < 1) throw ConsistencyError("batch size must be positive");
  const std::size_t D = part.subset_size;
  if (A > D)
    throw ConsistencyError("batch size " + std::to_string(A) +
                           " exceeds subset size " + std::to_string(D));
  std::vector<std::size_t> pool = part.subsets[i];
  for (std::size_t j = 0; j < A; ++j) {
    const std::size_t r = j + stream.next_below(D - j);
    std::swap(pool[j], pool[r]);
  }
  MiniBatch mb;
  mb.subset = i;
  mb.indices.assign(pool.begin(), pool.begin() + A);
  return mb;
}

}  // namespace airvote::data
