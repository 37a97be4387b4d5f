#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hawkqk {

// Dense row-major matrix of doubles. Rows are samples wherever a matrix
// carries data.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<double> column(std::size_t c) const;

  std::span<const double> values() const noexcept { return data_; }

  void append_row(std::span<const double> values);

  Matrix transpose() const;
  Matrix select_rows(std::span<const std::size_t> indices) const;
  Matrix select_cols(std::span<const std::size_t> indices) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
// a * b^T without materializing the transpose.
Matrix multiply_transposed(const Matrix& a, const Matrix& b);

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

// Largest |a_ij - a_ji|.
double asymmetry(const Matrix& m);

}  // namespace hawkqk
