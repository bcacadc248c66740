#include "vc/matrix.hpp"

#include <Eigen/Core>
#include <cmath>

#include "vc/errors.hpp"

namespace vc {

namespace {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Map = Eigen::Map<EMat>;
using CMap = Eigen::Map<const EMat>;

CMap cmap(const DenseMatrix& m) {
  return CMap(m.data.data(), static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
}

Map map(DenseMatrix& m) {
  return Map(m.data.data(), static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
}

}  // namespace

DenseMatrix DenseMatrix::row(size_t r) const {
  DenseMatrix out(1, cols);
  for (size_t c = 0; c < cols; ++c) out.data[c] = (*this)(r, c);
  return out;
}

void DenseMatrix::set_row(size_t r, const DenseMatrix& v) {
  if (v.rows != 1 || v.cols != cols) throw ShapeError("set_row: vector shape mismatch");
  for (size_t c = 0; c < cols; ++c) (*this)(r, c) = v.data[c];
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.rows)
    throw ShapeError("matmul: inner dimensions " + std::to_string(a.cols) + " vs " +
                     std::to_string(b.rows));
  DenseMatrix out(a.rows, b.cols);
  map(out).noalias() = cmap(a) * cmap(b);
  return out;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows != b.rows)
    throw ShapeError("matmul_tn: row counts " + std::to_string(a.rows) + " vs " +
                     std::to_string(b.rows));
  DenseMatrix out(a.cols, b.cols);
  map(out).noalias() = cmap(a).transpose() * cmap(b);
  return out;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.cols)
    throw ShapeError("matmul_nt: column counts " + std::to_string(a.cols) + " vs " +
                     std::to_string(b.cols));
  DenseMatrix out(a.rows, b.rows);
  map(out).noalias() = cmap(a) * cmap(b).transpose();
  return out;
}

void add_row_inplace(DenseMatrix& m, const DenseMatrix& v) {
  if (v.rows != 1 || v.cols != m.cols) throw ShapeError("add_row_inplace: vector shape mismatch");
  map(m).rowwise() += Eigen::Map<const Eigen::RowVectorXd>(v.data.data(),
                                                           static_cast<Eigen::Index>(v.cols));
}

DenseMatrix col_sums(const DenseMatrix& m) {
  DenseMatrix out(1, m.cols);
  Eigen::Map<Eigen::RowVectorXd>(out.data.data(), static_cast<Eigen::Index>(m.cols)) =
      cmap(m).colwise().sum();
  return out;
}

DenseMatrix hcat(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows != b.rows) throw ShapeError("hcat: row counts differ");
  DenseMatrix out(a.rows, a.cols + b.cols);
  for (size_t r = 0; r < a.rows; ++r) {
    for (size_t c = 0; c < a.cols; ++c) out(r, c) = a(r, c);
    for (size_t c = 0; c < b.cols; ++c) out(r, a.cols + c) = b(r, c);
  }
  return out;
}

bool all_finite(const DenseMatrix& m) {
  for (double x : m.data)
    if (!std::isfinite(x)) return false;
  return true;
}

void require_finite(const DenseMatrix& m, const std::string& what) {
  if (!all_finite(m)) throw NumericError(what + " contains non-finite values");
}

void require_shape(const DenseMatrix& m, size_t rows, size_t cols, const std::string& what) {
  if (m.rows != rows || m.cols != cols)
    throw ShapeError(what + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                     ", got " + std::to_string(m.rows) + "x" + std::to_string(m.cols));
}

}  // namespace vc
