#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "vc/features.hpp"
#include "vc/matrix.hpp"

namespace vc {

// Monotonic DTW path from (0,0) to (Ns-1, Nt-1); each step advances source
// and/or target by one.
using AlignmentPath = std::vector<std::pair<size_t, size_t>>;

using VadMask = std::vector<bool>;

// Energy-based voice activity detection: a frame is speech iff its energy
// lies within margin_db (amplitude decibels) of the utterance maximum.
VadMask vad(const EnergyTrack& energy, double margin_db = 40.0);

// Minimum summed squared-Euclidean cost under steps {(1,0),(0,1),(1,1)};
// backtrace ties prefer (1,1), then (1,0), then (0,1).
struct DtwResult {
  AlignmentPath path;
  double cost = 0.0;
};
DtwResult dtw(const DenseMatrix& src, const DenseMatrix& tgt);

// True iff the path satisfies boundary, step and monotonicity rules.
bool path_valid(const AlignmentPath& path, size_t n_src, size_t n_tgt);

// One output pair per source frame: the first target matched to it on the
// path. Both outputs have the source's frame count.
struct AlignedPair {
  DenseMatrix src;
  DenseMatrix tgt;
};
AlignedPair apply_alignment(const AlignmentPath& path, const DenseMatrix& src_frames,
                            const DenseMatrix& tgt_frames);

}  // namespace vc
