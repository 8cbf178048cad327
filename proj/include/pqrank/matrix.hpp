#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pqrank {

// Row-major dense matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  // Copy of column subset `columns`, in the given order.
  Matrix select_columns(std::span<const std::size_t> columns) const {
    Matrix out(rows, columns.size());
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < columns.size(); ++j) out(i, j) = (*this)(i, columns[j]);
    return out;
  }
};

}  // namespace pqrank
