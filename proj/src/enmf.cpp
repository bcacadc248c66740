#include "vc/enmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vc/errors.hpp"
#include "vc/rng.hpp"

namespace vc {

namespace {
constexpr double kFloor = 1e-12;
}

EnmfDictionary build_dictionary(const AlignedFramePool& pool, size_t k, uint64_t seed) {
  if (pool.src.rows != pool.tgt.rows) throw ShapeError("build_dictionary: pair counts differ");
  if (k == 0) throw ConfigError("build_dictionary: K must be positive");
  if (pool.src.rows < k)
    throw ConfigError("build_dictionary: need at least K=" + std::to_string(k) +
                      " aligned pairs, have " + std::to_string(pool.src.rows));
  for (double v : pool.src.data)
    if (v < 0.0) throw NumericError("build_dictionary: negative source frame entry");
  for (double v : pool.tgt.data)
    if (v < 0.0) throw NumericError("build_dictionary: negative target frame entry");

  // Partial Fisher-Yates: the first K slots of a shuffled index vector are a
  // uniform sample without replacement.
  std::vector<size_t> idx(pool.src.rows);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(mix_seed(seed, 0xD1C7));
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + rng.below(idx.size() - i);
    std::swap(idx[i], idx[j]);
  }

  EnmfDictionary dict;
  dict.src_basis = DenseMatrix(pool.src.cols, k);
  dict.tgt_basis = DenseMatrix(pool.tgt.cols, k);
  for (size_t col = 0; col < k; ++col) {
    const size_t row = idx[col];
    for (size_t d = 0; d < pool.src.cols; ++d) dict.src_basis(d, col) = pool.src(row, d);
    for (size_t d = 0; d < pool.tgt.cols; ++d) dict.tgt_basis(d, col) = pool.tgt(row, d);
  }
  return dict;
}

double kl_objective(const EnmfDictionary& dict, const DenseMatrix& x_row, const Activation& h) {
  const size_t dims = dict.src_basis.rows;
  require_shape(x_row, 1, dims, "kl_objective frame");
  double obj = 0.0;
  for (size_t d = 0; d < dims; ++d) {
    double recon = 0.0;
    for (size_t j = 0; j < dict.exemplars(); ++j) recon += dict.src_basis(d, j) * h[j];
    recon = std::max(recon, kFloor);
    const double x = x_row.data[d];
    if (x > 0.0) obj += x * std::log(x / recon) - x + recon;
    else obj += recon;
  }
  return obj;
}

Activation solve_activation(const EnmfDictionary& dict, const DenseMatrix& x_row,
                            const EnmfConfig& cfg) {
  const size_t dims = dict.src_basis.rows;
  const size_t k = dict.exemplars();
  require_shape(x_row, 1, dims, "solve_activation frame");
  for (double v : x_row.data)
    if (v < 0.0) throw NumericError("solve_activation: negative frame entry");

  // Column sums of the basis; constant across iterations.
  std::vector<double> colsum(k, 0.0);
  for (size_t d = 0; d < dims; ++d)
    for (size_t j = 0; j < k; ++j) colsum[j] += dict.src_basis(d, j);

  Activation h(k, 1.0 / static_cast<double>(k));
  std::vector<double> recon(dims);
  for (size_t it = 0; it < cfg.iterations; ++it) {
    for (size_t d = 0; d < dims; ++d) {
      double acc = 0.0;
      for (size_t j = 0; j < k; ++j) acc += dict.src_basis(d, j) * h[j];
      recon[d] = std::max(acc, kFloor);
    }
    for (size_t j = 0; j < k; ++j) {
      double num = 0.0;
      for (size_t d = 0; d < dims; ++d) num += dict.src_basis(d, j) * x_row.data[d] / recon[d];
      h[j] *= num / std::max(colsum[j], kFloor);
    }
  }
  return h;
}

DenseMatrix enmf_convert(const EnmfDictionary& dict, const DenseMatrix& frames,
                         const EnmfConfig& cfg) {
  if (frames.cols != dict.src_basis.rows)
    throw ShapeError("enmf_convert: frame dim does not match dictionary");
  DenseMatrix out(frames.rows, dict.tgt_basis.rows);
  for (size_t r = 0; r < frames.rows; ++r) {
    const DenseMatrix row = frames.row(r);
    const Activation h = solve_activation(dict, row, cfg);
    double sum = 0.0;
    for (size_t d = 0; d < dict.tgt_basis.rows; ++d) {
      double acc = 0.0;
      for (size_t j = 0; j < dict.exemplars(); ++j) acc += dict.tgt_basis(d, j) * h[j];
      out(r, d) = acc;
      sum += acc;
    }
    if (sum > kFloor) {
      const double inv = 1.0 / sum;
      for (size_t d = 0; d < dict.tgt_basis.rows; ++d) out(r, d) *= inv;
    } else {
      const double uniform = 1.0 / static_cast<double>(dict.tgt_basis.rows);
      for (size_t d = 0; d < dict.tgt_basis.rows; ++d) out(r, d) = uniform;
    }
  }
  return out;
}

}  // namespace vc
