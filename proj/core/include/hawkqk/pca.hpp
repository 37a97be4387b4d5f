#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hawkqk/matrix.hpp"

namespace hawkqk::pca {

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Matrix vectors;              // column j is the eigenvector of values[j]
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm falls below
// tol * ||A||_F. Throws NumericalError if that takes more than max_sweeps.
SymmetricEigen symmetric_eigen(const Matrix& a, double tol = 1e-12, int max_sweeps = 100);

struct PcaModel {
  std::vector<double> mean;               // length d
  Matrix components;                      // k x d, orthonormal rows
  std::vector<double> explained_variance; // length k, descending

  std::size_t dimension() const noexcept { return mean.size(); }
  std::size_t k() const noexcept { return components.rows(); }
};

// Top-k principal directions of the (n-1)-normalized sample covariance.
// With d > n the n x n Gram matrix is decomposed instead of the d x d
// covariance. Each component's largest-magnitude entry is made positive.
PcaModel pca_fit(const Matrix& x, std::size_t k);

// (x - mean) * components^T.
Matrix pca_transform(const PcaModel& model, const Matrix& x);

// Projection back into gene space: z * components + mean.
Matrix pca_reconstruct(const PcaModel& model, const Matrix& z);

// Three-section CSV: mean, variance and component rows.
void save_model(const std::filesystem::path& path, const PcaModel& model,
                const std::string& header_comment = {});
PcaModel load_model(const std::filesystem::path& path);

}  // namespace hawkqk::pca
