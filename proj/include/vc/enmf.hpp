#pragma once

#include <cstdint>
#include <vector>

#include "vc/matrix.hpp"

namespace vc {

// Paired exemplar dictionaries; column j of both sides comes from the same
// DTW-aligned frame pair. Requires no training.
struct EnmfDictionary {
  DenseMatrix src_basis;  // dims x K, nonnegative
  DenseMatrix tgt_basis;  // dims x K, nonnegative
  size_t exemplars() const { return src_basis.cols; }
};

// Aligned frame pair pool: rows are frames (unit-sum linear spectra).
struct AlignedFramePool {
  DenseMatrix src;  // N x dims
  DenseMatrix tgt;  // N x dims
};

// Uniformly samples K aligned pairs without replacement.
EnmfDictionary build_dictionary(const AlignedFramePool& pool, size_t k, uint64_t seed);

struct EnmfConfig {
  size_t iterations = 100;
};

// Nonnegative activation weights solved against the source basis by
// multiplicative updates on the generalized KL divergence, uniform init.
using Activation = std::vector<double>;

Activation solve_activation(const EnmfDictionary& dict, const DenseMatrix& x_row,
                            const EnmfConfig& cfg = {});

// Generalized KL divergence D(x || W h); exposed for monotonicity checks.
double kl_objective(const EnmfDictionary& dict, const DenseMatrix& x_row, const Activation& h);

// Per frame: solve activations on the source basis, reconstruct with the
// target basis, renormalize to unit sum.
DenseMatrix enmf_convert(const EnmfDictionary& dict, const DenseMatrix& frames,
                         const EnmfConfig& cfg = {});

}  // namespace vc
