#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dqfe/dataset.hpp"

namespace dqfe {

/// rows = true class, columns = predicted class.
struct ConfusionMatrix {
  int classes = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t operator()(int truth, int predicted) const {
    return counts[static_cast<std::size_t>(truth * classes + predicted)];
  }
  std::uint64_t total() const;
  std::uint64_t trace() const;
  double accuracy() const;
};

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted, int classes);

struct PcaProjection {
  std::size_t rows = 0;
  std::vector<double> scores;      // rows x 2, row-major
  std::vector<double> components;  // 2 x features, row-major, unit norm
  std::vector<double> mean;        // per feature
  double explained[2] = {0.0, 0.0};
  double eigenvalues[2] = {0.0, 0.0};
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations. Eigenvalues are
/// returned in descending order; eigenvectors are the matching columns of
/// the row-major n x n `vectors`.
void symmetric_eigen(std::vector<double> matrix, std::size_t n, std::vector<double>& values,
                     std::vector<double>& vectors);

/// Top two principal components of the sample covariance of the rows of an
/// N x n row-major matrix. Each component is signed so its largest-magnitude
/// loading is positive. Throws ValidationError when the data has rank < 2.
PcaProjection pca2(std::span<const double> matrix, std::size_t rows, std::size_t cols);
PcaProjection pca2(const FeatureTable& table);

struct FisherReport {
  std::vector<double> ratios;
  double mean = 0.0;
};

/// Per-feature Fisher discriminant ratio:
///   sum_c (n_c/N)(mu_c - mu)^2 / sum_c (n_c/N) var_c
/// Constant features score 0; features with no within-class spread but
/// separated class means score `cap`.
FisherReport fisher_mean(std::span<const double> matrix, std::size_t rows, std::size_t cols,
                         std::span<const int> labels, double cap = 1e6);
FisherReport fisher_mean(const FeatureTable& table, double cap = 1e6);

std::string confusion_to_csv(const ConfusionMatrix& cm);
std::string projection_to_csv(const PcaProjection& pca, std::span<const int> labels);

}  // namespace dqfe
