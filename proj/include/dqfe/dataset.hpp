#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace dqfe {

enum class Split { train, test };

/// N×n matrix of finite features with integer class labels and a
/// train/test tag per row. Row-major storage. Immutable once built.
class FeatureTable {
 public:
  FeatureTable() = default;

  /// Checks shapes, finiteness and label sign. Throws ValidationError.
  FeatureTable(std::vector<std::string> column_names, std::vector<double> values,
               std::vector<int> labels, std::vector<Split> splits);

  std::size_t rows() const { return labels_.size(); }
  std::size_t cols() const { return column_names_.size(); }

  double at(std::size_t row, std::size_t col) const { return values_[row * cols() + col]; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols(), cols()};
  }

  const std::vector<double>& values() const { return values_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<Split>& splits() const { return splits_; }
  const std::vector<std::string>& column_names() const { return column_names_; }

  /// max label + 1.
  int num_classes() const;

  std::vector<std::size_t> indices(Split which) const;
  std::size_t count(Split which) const;

  /// New table holding the given rows, in the given order.
  FeatureTable select_rows(std::span<const std::size_t> rows) const;

  /// Copy of column `col` restricted to rows tagged `which`.
  std::vector<double> column(std::size_t col, Split which) const;

  /// Labels contiguous over 0..C-1 and every class present among train rows.
  void validate_labels() const;

  bool operator==(const FeatureTable&) const = default;

 private:
  std::vector<std::string> column_names_;
  std::vector<double> values_;
  std::vector<int> labels_;
  std::vector<Split> splits_;
};

std::string to_string(Split split);

/// Reads a CSV with a header row. Every column other than `label_column`
/// and the optional "split" column is a feature. Rows without a split
/// column default to train.
FeatureTable load_table(const std::filesystem::path& path,
                        const std::string& label_column = "label");

/// Writes feature columns, then "label", then "split". Values use 17
/// significant digits, so load_table(save_table(t)) == t.
void save_table(const FeatureTable& table, const std::filesystem::path& path);

enum class ScalingMethod { minmax_symmetric, zscore, none };

ScalingMethod parse_scaling_method(const std::string& name);
std::string to_string(ScalingMethod method);

/// Per-column affine parameters. minmax_symmetric: y = 2 (x - offset) / scale - 1
/// with offset = train min and scale = train range. zscore: y = (x - offset) / scale
/// with the train mean and population standard deviation. scale == 0 marks a
/// degenerate column, which maps to 0.
struct ColumnScaling {
  double offset = 0.0;
  double scale = 1.0;
  bool operator==(const ColumnScaling&) const = default;
};

struct ScalingSpec {
  ScalingMethod method = ScalingMethod::none;
  std::vector<ColumnScaling> columns;
  bool operator==(const ScalingSpec&) const = default;
};

/// Learns per-column parameters from train rows only.
ScalingSpec fit_scaling(const FeatureTable& table, ScalingMethod method);

/// Transforms every row (train and test). Out-of-range test values are not
/// clipped.
FeatureTable apply_scaling(const FeatureTable& table, const ScalingSpec& spec);

/// Inverse of apply_scaling for non-degenerate columns.
FeatureTable invert_scaling(const FeatureTable& table, const ScalingSpec& spec);

}  // namespace dqfe
