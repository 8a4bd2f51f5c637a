#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shaprob/coalition.hpp"

namespace shaprob {

using Label = std::uint8_t;

/// Binary-classification table stored column-major. Immutable once built;
/// every shaping operation returns a new Dataset.
///
/// Invariants checked at construction: equal column lengths, labels in {0,1},
/// unique non-empty feature names, finite values. A Dataset with zero feature
/// columns is legal. Both label classes are required of loaded files and of
/// split/subsample outputs; consumers that need them (training, curves) check
/// `has_both_classes()` and raise their own error kinds.
class Dataset {
 public:
  Dataset(std::vector<std::vector<double>> columns, std::vector<Label> labels,
          std::vector<std::string> feature_names);

  std::size_t rows() const { return labels_.size(); }
  std::size_t features() const { return columns_.size(); }

  std::span<const double> column(std::size_t j) const { return columns_.at(j); }
  double at(std::size_t row, std::size_t col) const { return columns_.at(col).at(row); }
  std::span<const Label> labels() const { return labels_; }
  const std::vector<std::string>& feature_names() const { return names_; }

  std::size_t positives() const;
  std::size_t negatives() const { return rows() - positives(); }
  bool has_both_classes() const;

  /// Index of the named feature; IndexOutOfRange when absent.
  std::size_t index_of(const std::string& name) const;

  /// Rows in the given order (duplicates allowed); labels follow.
  Dataset select_rows(std::span<const std::size_t> rows) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<std::vector<double>> columns_;
  std::vector<Label> labels_;
  std::vector<std::string> names_;
};

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

struct ImbalanceSpec {
  double positive_fraction = 0.1;
  std::uint64_t seed = 0;
};

/// Comma-separated file with a header row. Every column other than
/// `label_column` becomes a feature, in file order.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column);
Dataset parse_csv(const std::string& text, const std::string& label_column);

/// Writes features then the label column under `label_column`.
void write_csv(const Dataset& d, const std::filesystem::path& path,
               const std::string& label_column = "class");

/// Uniform seeded shuffle, then the first floor(train_fraction * n) rows go to
/// train. Each partition keeps ascending original row order.
std::pair<Dataset, Dataset> split(const Dataset& d, const SplitSpec& s);

/// Keeps the columns in `c` (ascending index order), labels untouched.
Dataset project(const Dataset& d, Coalition c);

/// Downsamples one class without replacement so the positive share lands
/// within one row of the target; retained rows keep their original order.
Dataset subsample_imbalance(const Dataset& d, const ImbalanceSpec& spec);

/// Appends a bitwise copy of column `index` named `new_name`.
Dataset duplicate_feature(const Dataset& d, std::size_t index, const std::string& new_name);

/// Removes the named features; unknown names raise IndexOutOfRange.
Dataset drop_features(const Dataset& d, const std::vector<std::string>& names);

}  // namespace shaprob
