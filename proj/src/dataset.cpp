#include "dqfe/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "dqfe/error.hpp"

namespace dqfe {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  std::string out(s.substr(b, e - b));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(std::string_view(line).substr(start)));
      return fields;
    }
    fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
    start = comma + 1;
  }
}

std::string location(const std::filesystem::path& path, std::size_t line, std::size_t col,
                     const std::string& name) {
  std::ostringstream os;
  os << path.string() << ": row " << line << ", column " << col << " (" << name << ")";
  return os.str();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

FeatureTable::FeatureTable(std::vector<std::string> column_names, std::vector<double> values,
                           std::vector<int> labels, std::vector<Split> splits)
    : column_names_(std::move(column_names)),
      values_(std::move(values)),
      labels_(std::move(labels)),
      splits_(std::move(splits)) {
  if (column_names_.empty()) throw ValidationError("feature table needs at least one column");
  if (labels_.empty()) throw ValidationError("feature table needs at least one row");
  if (splits_.size() != labels_.size())
    throw ValidationError("split tag count does not match label count");
  if (values_.size() != labels_.size() * column_names_.size())
    throw ValidationError("feature value count does not match rows x columns");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      const std::size_t r = i / cols();
      const std::size_t c = i % cols();
      throw ValidationError("non-finite feature at row " + std::to_string(r) + ", column '" +
                            column_names_[c] + "'");
    }
  }
  for (std::size_t r = 0; r < labels_.size(); ++r)
    if (labels_[r] < 0)
      throw ValidationError("negative label at row " + std::to_string(r));
}

int FeatureTable::num_classes() const {
  return labels_.empty() ? 0 : *std::max_element(labels_.begin(), labels_.end()) + 1;
}

std::vector<std::size_t> FeatureTable::indices(Split which) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < rows(); ++r)
    if (splits_[r] == which) out.push_back(r);
  return out;
}

std::size_t FeatureTable::count(Split which) const {
  return static_cast<std::size_t>(std::count(splits_.begin(), splits_.end(), which));
}

FeatureTable FeatureTable::select_rows(std::span<const std::size_t> rows) const {
  std::vector<double> values;
  values.reserve(rows.size() * cols());
  std::vector<int> labels;
  std::vector<Split> splits;
  for (std::size_t r : rows) {
    const auto src = row(r);
    values.insert(values.end(), src.begin(), src.end());
    labels.push_back(labels_.at(r));
    splits.push_back(splits_.at(r));
  }
  return FeatureTable(column_names_, std::move(values), std::move(labels), std::move(splits));
}

std::vector<double> FeatureTable::column(std::size_t col, Split which) const {
  std::vector<double> out;
  for (std::size_t r = 0; r < rows(); ++r)
    if (splits_[r] == which) out.push_back(at(r, col));
  return out;
}

void FeatureTable::validate_labels() const {
  const int classes = num_classes();
  std::vector<bool> seen(static_cast<std::size_t>(classes), false);
  std::vector<bool> in_train(static_cast<std::size_t>(classes), false);
  for (std::size_t r = 0; r < rows(); ++r) {
    seen[labels_[r]] = true;
    if (splits_[r] == Split::train) in_train[labels_[r]] = true;
  }
  for (int c = 0; c < classes; ++c) {
    if (!seen[c])
      throw ValidationError("labels are not contiguous: class " + std::to_string(c) +
                            " is missing from 0.." + std::to_string(classes - 1));
    if (!in_train[c])
      throw ValidationError("class " + std::to_string(c) + " has no train rows");
  }
}

std::string to_string(Split split) { return split == Split::train ? "train" : "test"; }

FeatureTable load_table(const std::filesystem::path& path, const std::string& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty file, expected a header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const std::vector<std::string> header = split_fields(line);

  std::ptrdiff_t label_idx = -1;
  std::ptrdiff_t split_idx = -1;
  std::vector<std::size_t> feature_idx;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == label_column) {
      label_idx = static_cast<std::ptrdiff_t>(c);
    } else if (header[c] == "split") {
      split_idx = static_cast<std::ptrdiff_t>(c);
    } else {
      feature_idx.push_back(c);
      names.push_back(header[c]);
    }
  }
  if (label_idx < 0) throw IoError(path.string() + ": label column '" + label_column + "' not found");
  if (names.size() < 2)
    throw ValidationError(path.string() + ": at least two feature columns are required");
  {
    std::set<std::string> unique(names.begin(), names.end());
    if (unique.size() != names.size()) throw IoError(path.string() + ": duplicate column names");
  }

  std::vector<double> values;
  std::vector<int> labels;
  std::vector<Split> splits;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw IoError(path.string() + ": row " + std::to_string(line_no) + " has " +
                    std::to_string(fields.size()) + " fields, header has " +
                    std::to_string(header.size()));
    }
    for (std::size_t k = 0; k < feature_idx.size(); ++k) {
      const std::size_t c = feature_idx[k];
      const std::string& f = fields[c];
      double v = 0.0;
      const char* first = f.data();
      const char* last = f.data() + f.size();
      if (!f.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (f.empty() || ec != std::errc() || ptr != last)
        throw IoError("cannot parse number '" + f + "' at " + location(path, line_no, c + 1, header[c]));
      if (!std::isfinite(v))
        throw ValidationError("non-finite value '" + f + "' at " +
                              location(path, line_no, c + 1, header[c]));
      values.push_back(v);
    }
    {
      const std::string& f = fields[static_cast<std::size_t>(label_idx)];
      int label = 0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), label);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || label < 0)
        throw IoError("invalid label '" + f + "' at " +
                      location(path, line_no, static_cast<std::size_t>(label_idx) + 1, label_column));
      labels.push_back(label);
    }
    if (split_idx >= 0) {
      const std::string& f = fields[static_cast<std::size_t>(split_idx)];
      if (f == "train") {
        splits.push_back(Split::train);
      } else if (f == "test") {
        splits.push_back(Split::test);
      } else {
        throw IoError("invalid split tag '" + f + "' at " +
                      location(path, line_no, static_cast<std::size_t>(split_idx) + 1, "split"));
      }
    } else {
      splits.push_back(Split::train);
    }
  }
  if (labels.empty()) throw ValidationError(path.string() + ": no data rows");

  FeatureTable table(std::move(names), std::move(values), std::move(labels), std::move(splits));
  table.validate_labels();
  return table;
}

void save_table(const FeatureTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& name : table.column_names()) out << name << ',';
  out << "label,split\n";
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (double v : table.row(r)) out << format_double(v) << ',';
    out << table.labels()[r] << ',' << to_string(table.splits()[r]) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

ScalingMethod parse_scaling_method(const std::string& name) {
  if (name == "minmax_symmetric" || name == "minmax") return ScalingMethod::minmax_symmetric;
  if (name == "zscore") return ScalingMethod::zscore;
  if (name == "none") return ScalingMethod::none;
  throw ValidationError("unknown scaling method '" + name + "'");
}

std::string to_string(ScalingMethod method) {
  switch (method) {
    case ScalingMethod::minmax_symmetric: return "minmax_symmetric";
    case ScalingMethod::zscore: return "zscore";
    case ScalingMethod::none: return "none";
  }
  return "none";
}

ScalingSpec fit_scaling(const FeatureTable& table, ScalingMethod method) {
  const auto train = table.indices(Split::train);
  if (train.empty()) throw ValidationError("fit_scaling: train split is empty");

  ScalingSpec spec{method, std::vector<ColumnScaling>(table.cols())};
  if (method == ScalingMethod::none) return spec;

  for (std::size_t c = 0; c < table.cols(); ++c) {
    ColumnScaling& p = spec.columns[c];
    if (method == ScalingMethod::minmax_symmetric) {
      double lo = table.at(train.front(), c);
      double hi = lo;
      for (std::size_t r : train) {
        lo = std::min(lo, table.at(r, c));
        hi = std::max(hi, table.at(r, c));
      }
      p.offset = lo;
      p.scale = hi - lo;
    } else {
      double sum = 0.0;
      for (std::size_t r : train) sum += table.at(r, c);
      const double mean = sum / static_cast<double>(train.size());
      double ss = 0.0;
      for (std::size_t r : train) {
        const double d = table.at(r, c) - mean;
        ss += d * d;
      }
      p.offset = mean;
      p.scale = std::sqrt(ss / static_cast<double>(train.size()));
    }
  }
  return spec;
}

FeatureTable apply_scaling(const FeatureTable& table, const ScalingSpec& spec) {
  if (spec.columns.size() != table.cols())
    throw ValidationError("apply_scaling: spec has " + std::to_string(spec.columns.size()) +
                          " columns, table has " + std::to_string(table.cols()));
  if (spec.method == ScalingMethod::none) return table;

  const bool minmax = spec.method == ScalingMethod::minmax_symmetric;
  std::vector<double> values = table.values();
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      const ColumnScaling& p = spec.columns[c];
      double& v = values[r * table.cols() + c];
      if (!(p.scale > 0.0)) {
        v = 0.0;
      } else if (minmax) {
        v = 2.0 * ((v - p.offset) / p.scale) - 1.0;
      } else {
        v = (v - p.offset) / p.scale;
      }
    }
  }
  return FeatureTable(table.column_names(), std::move(values), table.labels(), table.splits());
}

FeatureTable invert_scaling(const FeatureTable& table, const ScalingSpec& spec) {
  if (spec.columns.size() != table.cols())
    throw ValidationError("invert_scaling: column count mismatch");
  if (spec.method == ScalingMethod::none) return table;

  const bool minmax = spec.method == ScalingMethod::minmax_symmetric;
  std::vector<double> values = table.values();
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      const ColumnScaling& p = spec.columns[c];
      double& v = values[r * table.cols() + c];
      if (!(p.scale > 0.0)) {
        v = p.offset;
      } else if (minmax) {
        v = (v + 1.0) / 2.0 * p.scale + p.offset;
      } else {
        v = v * p.scale + p.offset;
      }
    }
  }
  return FeatureTable(table.column_names(), std::move(values), table.labels(), table.splits());
}

}  // namespace dqfe
