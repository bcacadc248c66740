#include "vc/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vc/errors.hpp"

namespace vc {

VadMask vad(const EnergyTrack& energy, double margin_db) {
  if (energy.empty()) throw DataError("vad: empty energy track");
  const double max_e = *std::max_element(energy.begin(), energy.end());
  // margin_db is an amplitude ratio in dB; energies are natural logs of
  // frame magnitude sums.
  const double threshold = max_e - margin_db * std::log(10.0) / 20.0;
  VadMask mask(energy.size());
  for (size_t i = 0; i < energy.size(); ++i) mask[i] = energy[i] > threshold;
  return mask;
}

namespace {

double sq_dist(const DenseMatrix& a, size_t ra, const DenseMatrix& b, size_t rb) {
  double acc = 0.0;
  const double* pa = a.row_ptr(ra);
  const double* pb = b.row_ptr(rb);
  for (size_t c = 0; c < a.cols; ++c) {
    const double d = pa[c] - pb[c];
    acc += d * d;
  }
  return acc;
}

}  // namespace

DtwResult dtw(const DenseMatrix& src, const DenseMatrix& tgt) {
  if (src.rows == 0 || tgt.rows == 0) throw ShapeError("dtw: empty input sequence");
  if (src.cols != tgt.cols) throw ShapeError("dtw: feature dimensions differ");

  const size_t ns = src.rows, nt = tgt.rows;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  DenseMatrix acc(ns, nt, kInf);

  acc(0, 0) = sq_dist(src, 0, tgt, 0);
  for (size_t i = 1; i < ns; ++i) acc(i, 0) = acc(i - 1, 0) + sq_dist(src, i, tgt, 0);
  for (size_t j = 1; j < nt; ++j) acc(0, j) = acc(0, j - 1) + sq_dist(src, 0, tgt, j);
  for (size_t i = 1; i < ns; ++i) {
    for (size_t j = 1; j < nt; ++j) {
      const double best = std::min({acc(i - 1, j - 1), acc(i - 1, j), acc(i, j - 1)});
      acc(i, j) = best + sq_dist(src, i, tgt, j);
    }
  }

  AlignmentPath rev;
  size_t i = ns - 1, j = nt - 1;
  rev.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double diag = acc(i - 1, j - 1), up = acc(i - 1, j), left = acc(i, j - 1);
      const double best = std::min({diag, up, left});
      if (diag == best) {
        --i;
        --j;
      } else if (up == best) {
        --i;
      } else {
        --j;
      }
    }
    rev.emplace_back(i, j);
  }
  DtwResult res;
  res.cost = acc(ns - 1, nt - 1);
  res.path.assign(rev.rbegin(), rev.rend());
  return res;
}

bool path_valid(const AlignmentPath& path, size_t n_src, size_t n_tgt) {
  if (path.empty()) return false;
  if (path.front() != std::pair<size_t, size_t>(0, 0)) return false;
  if (path.back() != std::pair<size_t, size_t>(n_src - 1, n_tgt - 1)) return false;
  for (size_t k = 1; k < path.size(); ++k) {
    const size_t di = path[k].first - path[k - 1].first;
    const size_t dj = path[k].second - path[k - 1].second;
    if (path[k].first < path[k - 1].first || path[k].second < path[k - 1].second) return false;
    if (di > 1 || dj > 1 || (di == 0 && dj == 0)) return false;
  }
  return true;
}

AlignedPair apply_alignment(const AlignmentPath& path, const DenseMatrix& src_frames,
                            const DenseMatrix& tgt_frames) {
  if (!path_valid(path, src_frames.rows, tgt_frames.rows))
    throw DataError("apply_alignment: malformed path");

  AlignedPair out;
  out.src = DenseMatrix(src_frames.rows, src_frames.cols);
  out.tgt = DenseMatrix(src_frames.rows, tgt_frames.cols);
  size_t next = 0;
  for (size_t k = 0; k < path.size(); ++k) {
    const auto [si, ti] = path[k];
    if (si != next) continue;  // keep only the first target match per source
    std::copy_n(src_frames.row_ptr(si), src_frames.cols, out.src.row_ptr(si));
    std::copy_n(tgt_frames.row_ptr(ti), tgt_frames.cols, out.tgt.row_ptr(si));
    ++next;
  }
  return out;
}

}  // namespace vc
