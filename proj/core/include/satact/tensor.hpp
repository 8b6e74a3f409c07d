#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace satact {

class Rng;

// Dense row-major matrix of doubles.
//
// Batches are stored as columns: a batch of N samples of width n is an n x N
// matrix, so x = W * y + b transcribes directly.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix column(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  // "RxC", used in error messages.
  std::string shape_string() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
// a^T * b without materializing the transpose.
Matrix matmul_at_b(const Matrix& a, const Matrix& b);
// a * b^T without materializing the transpose.
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& m);
Matrix hadamard(const Matrix& a, const Matrix& b);

// m + bias broadcast across columns; bias is rows x 1.
Matrix add_column_bias(const Matrix& m, const Matrix& bias);
// Sum over columns, returned as rows x 1.
Matrix row_sums(const Matrix& m);

// Unbiased sample variance of each row. Requires cols >= 2.
std::vector<double> variance_per_row(const Matrix& m);

double max_abs(const Matrix& m);
bool all_finite(const Matrix& m);

// i.i.d. N(mean, std^2) entries drawn in row-major order.
Matrix sample_normal(Rng& rng, double mean, double std, std::size_t rows, std::size_t cols);

}  // namespace satact
