#pragma once

#include <vector>

#include "vc/matrix.hpp"
#include "vc/wav.hpp"

namespace vc {

// Fixed analysis geometry: 16 kHz, 25 ms Hann window, 5 ms hop, 1024-point
// FFT, 513 magnitude bins.
struct AnalysisConfig {
  int sample_rate = 16000;
  size_t window = 400;
  size_t hop = 80;
  size_t fft_size = 1024;
  size_t bins() const { return fft_size / 2 + 1; }

  // F0 search and voicing decision.
  double f0_min = 50.0;
  double f0_max = 500.0;
  double voicing_threshold = 0.3;
  size_t f0_window = 640;  // 40 ms, centered on the frame
};

enum class FeatureKind { kLinearSp, kLogSp, kMcc, kF0, kEnergy };

struct FeatureMatrix {
  DenseMatrix data;  // frames x dims
  FeatureKind kind = FeatureKind::kLinearSp;
};

// Per-frame scalar normalizing factor in the natural-log domain.
using EnergyTrack = std::vector<double>;

// Per-frame F0 in Hz; 0 marks unvoiced frames.
using F0Track = std::vector<double>;

struct F0Stats {
  double mean = 0.0;   // of log-F0 over voiced frames
  double stddev = 0.0;
};

struct AnalysisResult {
  FeatureMatrix sp;   // linear magnitudes, frames x 513
  DenseMatrix phase;  // frames x 513, radians; pass-through for resynthesis
  F0Track f0;
};

size_t frame_count(size_t samples, const AnalysisConfig& cfg);

// Hann-windowed STFT magnitudes + phase, and autocorrelation F0.
AnalysisResult analyze(const Waveform& w, const AnalysisConfig& cfg = {});

// Divides each frame by its sum and records log(sum) as the energy. Frames
// summing to ~0 become uniform with energy log(kLogFloor).
struct NormalizeResult {
  FeatureMatrix sp;  // unit-sum rows
  EnergyTrack energy;
};
NormalizeResult normalize_energy(const FeatureMatrix& sp);

// Exact inverse of normalize_energy.
FeatureMatrix denormalize_energy(const FeatureMatrix& sp, const EnergyTrack& energy);

inline constexpr double kLogFloor = 1e-10;

FeatureMatrix to_log_sp(const FeatureMatrix& sp);    // log(x + floor)
FeatureMatrix from_log_sp(const FeatureMatrix& sp);  // max(exp(x) - floor, 0)

// Mel-cepstral coefficients 1..order (c0 excluded): log spectrum resampled
// on the all-pass warped frequency axis, then DCT-II.
FeatureMatrix mcc(const FeatureMatrix& sp, size_t order = 24, double alpha = 0.42);

// Warped-axis resampling used by mcc(); exposed for tests.
std::vector<double> warp_log_spectrum(const std::vector<double>& log_spec, double alpha);

F0Stats f0_stats(const std::vector<F0Track>& tracks);

// Linear mean-variance transform in the log-F0 domain; unvoiced stays 0.
F0Track f0_convert(const F0Track& f0, const F0Stats& src, const F0Stats& tgt);

// Energy recompensation + inverse STFT with the source phase and Hann
// overlap-add. Output clipped to [-1, 1].
Waveform synthesize(const FeatureMatrix& sp, const EnergyTrack& energy, const DenseMatrix& phase,
                    const AnalysisConfig& cfg = {});

}  // namespace vc
