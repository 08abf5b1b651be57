#include "dqfe/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "dqfe/error.hpp"

namespace dqfe {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::uint64_t ConfusionMatrix::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (int c = 0; c < classes; ++c) t += (*this)(c, c);
  return t;
}

double ConfusionMatrix::accuracy() const {
  const auto n = total();
  return n == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(n);
}

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted, int classes) {
  if (truth.size() != predicted.size())
    throw ValidationError("confusion: " + std::to_string(truth.size()) + " labels vs " +
                          std::to_string(predicted.size()) + " predictions");
  if (classes < 1) throw ValidationError("confusion: classes must be positive");
  ConfusionMatrix cm{classes, std::vector<std::uint64_t>(static_cast<std::size_t>(classes * classes), 0)};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= classes || predicted[i] < 0 || predicted[i] >= classes)
      throw ValidationError("confusion: label out of range at position " + std::to_string(i));
    ++cm.counts[static_cast<std::size_t>(truth[i] * classes + predicted[i])];
  }
  return cm;
}

void symmetric_eigen(std::vector<double> a, std::size_t n, std::vector<double>& values,
                     std::vector<double>& vectors) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diag += at(i, i) * at(i, i);
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    }
    if (off <= 1e-30 * diag || off == 0.0) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return at(x, x) > at(y, y); });
  values.resize(n);
  vectors.assign(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = at(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) vectors[i * n + k] = v[i * n + order[k]];
  }
}

PcaProjection pca2(std::span<const double> x, std::size_t rows, std::size_t cols) {
  if (rows < 3 || cols < 2) throw ValidationError("pca2 needs at least 3 rows and 2 columns");
  if (x.size() != rows * cols) throw ValidationError("pca2: matrix size does not match rows x cols");

  PcaProjection out;
  out.rows = rows;
  out.mean.assign(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out.mean[c] += x[r * cols + c];
  for (double& m : out.mean) m /= static_cast<double>(rows);

  std::vector<double> cov(cols * cols, 0.0);
  std::vector<double> centered(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) centered[c] = x[r * cols + c] - out.mean[c];
    for (std::size_t i = 0; i < cols; ++i)
      for (std::size_t j = i; j < cols; ++j) cov[i * cols + j] += centered[i] * centered[j];
  }
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = i; j < cols; ++j) {
      cov[i * cols + j] /= static_cast<double>(rows - 1);
      cov[j * cols + i] = cov[i * cols + j];
    }

  std::vector<double> values;
  std::vector<double> vectors;
  symmetric_eigen(cov, cols, values, vectors);
  double total = 0.0;
  for (std::size_t i = 0; i < cols; ++i) total += cov[i * cols + i];
  if (!(total > 0.0) || values[1] <= 1e-12 * values[0])
    throw ValidationError("pca2: data has rank < 2 (points are collinear or identical)");

  out.components.assign(2 * cols, 0.0);
  for (std::size_t k = 0; k < 2; ++k) {
    std::size_t largest = 0;
    for (std::size_t i = 1; i < cols; ++i)
      if (std::abs(vectors[i * cols + k]) > std::abs(vectors[largest * cols + k])) largest = i;
    const double sign = vectors[largest * cols + k] < 0.0 ? -1.0 : 1.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < cols; ++i) norm += vectors[i * cols + k] * vectors[i * cols + k];
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < cols; ++i) out.components[k * cols + i] = sign * vectors[i * cols + k] / norm;
    out.eigenvalues[k] = values[k];
    out.explained[k] = std::clamp(values[k] / total, 0.0, 1.0);
  }

  out.scores.assign(rows * 2, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t k = 0; k < 2; ++k) {
      double s = 0.0;
      for (std::size_t c = 0; c < cols; ++c) s += (x[r * cols + c] - out.mean[c]) * out.components[k * cols + c];
      out.scores[r * 2 + k] = s;
    }
  return out;
}

PcaProjection pca2(const FeatureTable& table) { return pca2(table.values(), table.rows(), table.cols()); }

FisherReport fisher_mean(std::span<const double> x, std::size_t rows, std::size_t cols,
                         std::span<const int> labels, double cap) {
  if (labels.size() != rows || x.size() != rows * cols)
    throw ValidationError("fisher_mean: matrix and labels disagree in size");
  if (cols == 0) throw ValidationError("fisher_mean: no features");
  int classes = 0;
  for (int l : labels) {
    if (l < 0) throw ValidationError("fisher_mean: negative label");
    classes = std::max(classes, l + 1);
  }
  std::vector<std::size_t> size(static_cast<std::size_t>(classes), 0);
  for (int l : labels) ++size[static_cast<std::size_t>(l)];
  std::size_t present = 0;
  for (int c = 0; c < classes; ++c) {
    if (size[static_cast<std::size_t>(c)] == 0) continue;
    if (size[static_cast<std::size_t>(c)] < 2)
      throw ValidationError("fisher_mean: class " + std::to_string(c) + " has fewer than 2 samples");
    ++present;
  }
  if (present < 2) throw ValidationError("fisher_mean: at least two classes are required");

  const double n = static_cast<double>(rows);
  FisherReport report;
  report.ratios.resize(cols);
  std::vector<double> class_mean(static_cast<std::size_t>(classes));
  for (std::size_t f = 0; f < cols; ++f) {
    double lo = x[f];
    double hi = x[f];
    for (std::size_t r = 0; r < rows; ++r) {
      lo = std::min(lo, x[r * cols + f]);
      hi = std::max(hi, x[r * cols + f]);
    }
    const double range = hi - lo;
    if (range == 0.0) {
      report.ratios[f] = 0.0;
      continue;
    }
    // Shift by lo and scale by range so the thresholds below are affine invariant.
    auto z = [&](std::size_t r) { return (x[r * cols + f] - lo) / range; };
    std::fill(class_mean.begin(), class_mean.end(), 0.0);
    double mean = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      class_mean[static_cast<std::size_t>(labels[r])] += z(r);
      mean += z(r);
    }
    mean /= n;
    for (std::size_t c = 0; c < class_mean.size(); ++c)
      if (size[c] > 0) class_mean[c] /= static_cast<double>(size[c]);
    double between = 0.0;
    for (std::size_t c = 0; c < class_mean.size(); ++c)
      if (size[c] > 0) between += static_cast<double>(size[c]) / n * (class_mean[c] - mean) * (class_mean[c] - mean);
    double within = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const double d = z(r) - class_mean[static_cast<std::size_t>(labels[r])];
      within += d * d;
    }
    within /= n;
    constexpr double kTiny = 1e-24;
    if (within <= kTiny) {
      report.ratios[f] = between <= kTiny ? 0.0 : cap;
    } else {
      report.ratios[f] = std::min(between / within, cap);
    }
  }
  double sum = 0.0;
  for (double r : report.ratios) sum += r;
  report.mean = sum / static_cast<double>(cols);
  return report;
}

FisherReport fisher_mean(const FeatureTable& table, double cap) {
  return fisher_mean(table.values(), table.rows(), table.cols(), table.labels(), cap);
}

std::string confusion_to_csv(const ConfusionMatrix& cm) {
  std::ostringstream os;
  os << "true\\pred";
  for (int c = 0; c < cm.classes; ++c) os << ',' << c;
  os << '\n';
  for (int t = 0; t < cm.classes; ++t) {
    os << t;
    for (int p = 0; p < cm.classes; ++p) os << ',' << cm(t, p);
    os << '\n';
  }
  return os.str();
}

std::string projection_to_csv(const PcaProjection& pca, std::span<const int> labels) {
  if (labels.size() != pca.rows) throw ValidationError("projection_to_csv: label count mismatch");
  std::ostringstream os;
  os << "pc1,pc2,label\n";
  for (std::size_t r = 0; r < pca.rows; ++r)
    os << fmt(pca.scores[r * 2]) << ',' << fmt(pca.scores[r * 2 + 1]) << ',' << labels[r] << '\n';
  return os.str();
}

}  // namespace dqfe
