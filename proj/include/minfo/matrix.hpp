#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace minfo {

// Dense row-major matrix of doubles; the only numeric container in the library.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  // Column c copied out as a contiguous vector.
  std::vector<double> column(std::size_t c) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// [a | b]; row counts must agree.
Matrix hstack(const Matrix& a, const Matrix& b);
// a on top of b; column counts must agree.
Matrix vstack(const Matrix& a, const Matrix& b);
// Rows of m in the order given by idx.
Matrix gather_rows(const Matrix& m, std::span<const std::size_t> idx);

bool all_finite(std::span<const double> values) noexcept;

}  // namespace minfo
