#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lifnet {

enum class Provenance { synthetic, csv };

/// Feature rows with binary labels (0 = healthy / negative, 1 = positive).
struct Dataset {
  std::size_t d = 0;
  std::vector<double> features;  // n x d, row-major
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  Provenance provenance = Provenance::synthetic;

  std::size_t size() const noexcept { return labels.size(); }
  std::span<const double> row(std::size_t i) const { return {features.data() + i * d, d}; }
  std::size_t count(int label) const;

  /// Rows `indices` in the given order.
  Dataset subset(std::span<const std::size_t> indices) const;

  /// Throws InputError on shape mismatch, non-finite values, labels outside
  /// {0, 1}, or (when require_both_classes) n < 2 or a missing class.
  void validate(bool require_both_classes = true) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct SyntheticSpec {
  std::size_t d = 16;
  std::size_t n = 800;
  std::vector<double> mean0;  // empty: derived from `separation`
  std::vector<double> mean1;
  double std0 = 0.1;
  double std1 = 0.1;
  double class_balance = 0.5;  // fraction of class 1
  // Euclidean distance between the default class means, in units of std0.
  double separation = 6.0;
  std::uint64_t seed = 0;

  void validate() const;

  /// Means centred on 0.5 and offset by +/- separation*std0/2 along the unit
  /// direction (1, -1, 1, -1, ...)/sqrt(d). Used when mean0/mean1 are left
  /// empty.
  std::pair<std::vector<double>, std::vector<double>> resolved_means() const;
};

/// Isotropic Gaussian per class, clamped to [0, 1]. Class-1 count is
/// round(n * class_balance); rows are interleaved in a seeded random order.
Dataset generate_synthetic(const SyntheticSpec& spec);

/// Header row, d feature columns, final column named "label" holding 0 or 1.
/// LF or CRLF line endings. Throws ParseError with the offending row number.
Dataset load_csv(const std::filesystem::path& path);
Dataset parse_csv(std::istream& in);

/// Writes features with round-trip precision (%.17g).
void write_csv(const Dataset& data, std::ostream& out);
void write_csv(const Dataset& data, const std::filesystem::path& path);

struct Split {
  Dataset train;
  Dataset val;
  std::vector<std::size_t> train_indices;  // into the source dataset
  std::vector<std::size_t> val_indices;
};

/// Per-class seeded shuffle, first round(n_c * train_fraction) of each class
/// to train. Both partitions list class 0 rows before class 1 rows. Throws
/// InputError if a class has fewer than 2 rows or the fraction leaves a
/// partition of a class empty.
Split stratified_split(const Dataset& data, double train_fraction, std::uint64_t seed);

}  // namespace lifnet
