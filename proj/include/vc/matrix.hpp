#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace vc {

// Row-major dense matrix of doubles. The single carrier type for frame
// batches, network parameters and feature matrices.
struct DenseMatrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;  // rows * cols, row-major

  DenseMatrix() = default;
  DenseMatrix(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(size_t r, size_t c) { return data[r * cols + c]; }
  double operator()(size_t r, size_t c) const { return data[r * cols + c]; }

  size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }

  double* row_ptr(size_t r) { return data.data() + r * cols; }
  const double* row_ptr(size_t r) const { return data.data() + r * cols; }

  DenseMatrix row(size_t r) const;
  void set_row(size_t r, const DenseMatrix& v);
};

// All products reject mismatched shapes with ShapeError; nothing broadcasts.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);        // a * b
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);     // a^T * b
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);     // a * b^T

// y(r, :) += v(0, :) for every row r; v must be 1 x cols.
void add_row_inplace(DenseMatrix& m, const DenseMatrix& v);

// Column sums as a 1 x cols matrix.
DenseMatrix col_sums(const DenseMatrix& m);

// Horizontal concatenation [a | b]; row counts must match.
DenseMatrix hcat(const DenseMatrix& a, const DenseMatrix& b);

bool all_finite(const DenseMatrix& m);

// Throws NumericError naming `what` if any entry is NaN or infinite.
void require_finite(const DenseMatrix& m, const std::string& what);

void require_shape(const DenseMatrix& m, size_t rows, size_t cols, const std::string& what);

}  // namespace vc
