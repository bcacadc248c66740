#include "vc/features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "vc/dsp.hpp"
#include "vc/errors.hpp"

namespace vc {

size_t frame_count(size_t samples, const AnalysisConfig& cfg) {
  if (samples < cfg.window) return 0;
  return (samples - cfg.window) / cfg.hop + 1;
}

namespace {

// Normalized autocorrelation pitch estimate for one frame. Returns 0 when
// unvoiced.
double estimate_f0(const std::vector<double>& x, size_t center, const AnalysisConfig& cfg) {
  const size_t half = cfg.f0_window / 2;
  const size_t lo = center > half ? center - half : 0;
  const size_t hi = std::min(x.size(), lo + cfg.f0_window);
  const size_t n = hi - lo;
  const double fs = static_cast<double>(cfg.sample_rate);
  const size_t lag_min = static_cast<size_t>(fs / cfg.f0_max);
  const size_t lag_max = std::min(n > 1 ? n - 1 : 0, static_cast<size_t>(fs / cfg.f0_min));
  if (lag_max <= lag_min) return 0.0;

  double energy = 0.0;
  for (size_t i = lo; i < hi; ++i) energy += x[i] * x[i];
  if (energy / static_cast<double>(n) < 1e-10) return 0.0;  // silence guard

  double best_r = 0.0;
  size_t best_lag = 0;
  std::vector<double> rs(lag_max + 1, 0.0);
  for (size_t lag = lag_min; lag <= lag_max; ++lag) {
    double num = 0.0, e0 = 0.0, e1 = 0.0;
    for (size_t i = lo; i + lag < hi; ++i) {
      num += x[i] * x[i + lag];
      e0 += x[i] * x[i];
      e1 += x[i + lag] * x[i + lag];
    }
    const double denom = std::sqrt(e0 * e1);
    const double r = denom > 1e-12 ? num / denom : 0.0;
    rs[lag] = r;
    if (r > best_r) {
      best_r = r;
      best_lag = lag;
    }
  }
  if (best_r < cfg.voicing_threshold || best_lag == 0) return 0.0;

  // Parabolic interpolation around the autocorrelation peak.
  double lag = static_cast<double>(best_lag);
  if (best_lag > lag_min && best_lag < lag_max) {
    const double ym = rs[best_lag - 1], y0 = rs[best_lag], yp = rs[best_lag + 1];
    const double denom = ym - 2.0 * y0 + yp;
    if (std::abs(denom) > 1e-12) {
      const double delta = 0.5 * (ym - yp) / denom;
      if (std::abs(delta) < 1.0) lag += delta;
    }
  }
  const double f0 = fs / lag;
  return std::clamp(f0, cfg.f0_min, cfg.f0_max);
}

}  // namespace

AnalysisResult analyze(const Waveform& w, const AnalysisConfig& cfg) {
  if (w.sample_rate != cfg.sample_rate)
    throw DataError("analyze: expected " + std::to_string(cfg.sample_rate) + " Hz input, got " +
                    std::to_string(w.sample_rate));
  if (w.samples.size() < cfg.window)
    throw DataError("analyze: signal shorter than one analysis window");
  for (double s : w.samples)
    if (!std::isfinite(s)) throw NumericError("analyze: waveform contains non-finite samples");

  const size_t frames = frame_count(w.samples.size(), cfg);
  const size_t bins = cfg.bins();
  AnalysisResult res;
  res.sp.kind = FeatureKind::kLinearSp;
  res.sp.data = DenseMatrix(frames, bins);
  res.phase = DenseMatrix(frames, bins);
  res.f0.resize(frames);

  const std::vector<double> window = hann_window(cfg.window);
  std::vector<std::complex<double>> buf(cfg.fft_size);
  for (size_t m = 0; m < frames; ++m) {
    const size_t start = m * cfg.hop;
    for (size_t i = 0; i < cfg.window; ++i)
      buf[i] = std::complex<double>(w.samples[start + i] * window[i], 0.0);
    std::fill(buf.begin() + static_cast<long>(cfg.window), buf.end(),
              std::complex<double>(0.0, 0.0));
    fft_inplace(buf, false);
    for (size_t k = 0; k < bins; ++k) {
      res.sp.data(m, k) = std::abs(buf[k]);
      res.phase(m, k) = std::arg(buf[k]);
    }
    res.f0[m] = estimate_f0(w.samples, start + cfg.window / 2, cfg);
  }
  return res;
}

NormalizeResult normalize_energy(const FeatureMatrix& sp) {
  if (sp.kind != FeatureKind::kLinearSp)
    throw ConfigError("normalize_energy: expects linear spectra");
  NormalizeResult res;
  res.sp.kind = FeatureKind::kLinearSp;
  res.sp.data = DenseMatrix(sp.data.rows, sp.data.cols);
  res.energy.resize(sp.data.rows);
  const double uniform = 1.0 / static_cast<double>(sp.data.cols);
  for (size_t r = 0; r < sp.data.rows; ++r) {
    double sum = 0.0;
    for (size_t c = 0; c < sp.data.cols; ++c) {
      const double v = sp.data(r, c);
      if (v < 0.0) throw NumericError("normalize_energy: negative magnitude");
      sum += v;
    }
    if (sum <= kLogFloor) {
      for (size_t c = 0; c < sp.data.cols; ++c) res.sp.data(r, c) = uniform;
      res.energy[r] = std::log(kLogFloor);
    } else {
      const double inv = 1.0 / sum;
      for (size_t c = 0; c < sp.data.cols; ++c) res.sp.data(r, c) = sp.data(r, c) * inv;
      res.energy[r] = std::log(sum);
    }
  }
  return res;
}

FeatureMatrix denormalize_energy(const FeatureMatrix& sp, const EnergyTrack& energy) {
  if (sp.data.rows != energy.size())
    throw ShapeError("denormalize_energy: frame counts differ");
  FeatureMatrix out;
  out.kind = FeatureKind::kLinearSp;
  out.data = DenseMatrix(sp.data.rows, sp.data.cols);
  for (size_t r = 0; r < sp.data.rows; ++r) {
    const double gain = std::exp(energy[r]);
    for (size_t c = 0; c < sp.data.cols; ++c) out.data(r, c) = sp.data(r, c) * gain;
  }
  return out;
}

FeatureMatrix to_log_sp(const FeatureMatrix& sp) {
  if (sp.kind != FeatureKind::kLinearSp) throw ConfigError("to_log_sp: expects linear spectra");
  FeatureMatrix out;
  out.kind = FeatureKind::kLogSp;
  out.data = DenseMatrix(sp.data.rows, sp.data.cols);
  for (size_t k = 0; k < sp.data.data.size(); ++k)
    out.data.data[k] = std::log(sp.data.data[k] + kLogFloor);
  return out;
}

FeatureMatrix from_log_sp(const FeatureMatrix& sp) {
  if (sp.kind != FeatureKind::kLogSp) throw ConfigError("from_log_sp: expects log spectra");
  FeatureMatrix out;
  out.kind = FeatureKind::kLinearSp;
  out.data = DenseMatrix(sp.data.rows, sp.data.cols);
  for (size_t k = 0; k < sp.data.data.size(); ++k)
    out.data.data[k] = std::max(std::exp(sp.data.data[k]) - kLogFloor, 0.0);
  return out;
}

std::vector<double> warp_log_spectrum(const std::vector<double>& log_spec, double alpha) {
  const size_t n = log_spec.size();
  std::vector<double> warped(n);
  const double step = M_PI / static_cast<double>(n - 1);
  for (size_t j = 0; j < n; ++j) {
    // Uniform grid on the warped axis; map back through the inverse
    // all-pass warp (the same map with -alpha) and interpolate linearly.
    const double wt = step * static_cast<double>(j);
    const double omega =
        wt - 2.0 * std::atan2(alpha * std::sin(wt), 1.0 + alpha * std::cos(wt));
    double pos = omega / step;
    pos = std::clamp(pos, 0.0, static_cast<double>(n - 1));
    const size_t i0 = static_cast<size_t>(pos);
    const size_t i1 = std::min(i0 + 1, n - 1);
    const double frac = pos - static_cast<double>(i0);
    warped[j] = (1.0 - frac) * log_spec[i0] + frac * log_spec[i1];
  }
  return warped;
}

FeatureMatrix mcc(const FeatureMatrix& sp, size_t order, double alpha) {
  if (sp.kind != FeatureKind::kLinearSp) throw ConfigError("mcc: expects linear spectra");
  const size_t n = sp.data.cols;
  if (n < 2 || order >= n) throw ConfigError("mcc: order must be below the bin count");

  FeatureMatrix out;
  out.kind = FeatureKind::kMcc;
  out.data = DenseMatrix(sp.data.rows, order);

  std::vector<double> log_spec(n);
  const double scale = std::sqrt(2.0 / static_cast<double>(n));
  for (size_t r = 0; r < sp.data.rows; ++r) {
    for (size_t c = 0; c < n; ++c) log_spec[c] = std::log(std::max(sp.data(r, c), kLogFloor));
    const std::vector<double> warped = warp_log_spectrum(log_spec, alpha);
    for (size_t k = 1; k <= order; ++k) {
      double acc = 0.0;
      for (size_t c = 0; c < n; ++c)
        acc += warped[c] * std::cos(M_PI * static_cast<double>(k) *
                                    (static_cast<double>(c) + 0.5) / static_cast<double>(n));
      out.data(r, k - 1) = scale * acc;
    }
  }
  return out;
}

F0Stats f0_stats(const std::vector<F0Track>& tracks) {
  double sum = 0.0;
  size_t n = 0;
  for (const auto& t : tracks)
    for (double f : t)
      if (f > 0.0) {
        sum += std::log(f);
        ++n;
      }
  if (n == 0) throw DataError("f0_stats: no voiced frames");
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const auto& t : tracks)
    for (double f : t)
      if (f > 0.0) {
        const double d = std::log(f) - mean;
        ss += d * d;
      }
  const double stddev = std::sqrt(ss / static_cast<double>(n));
  if (!(stddev > 0.0)) throw DataError("f0_stats: zero log-F0 variance");
  return {mean, stddev};
}

F0Track f0_convert(const F0Track& f0, const F0Stats& src, const F0Stats& tgt) {
  if (!(src.stddev > 0.0) || !(tgt.stddev > 0.0))
    throw DataError("f0_convert: stats require positive stddev");
  F0Track out(f0.size(), 0.0);
  const double ratio = tgt.stddev / src.stddev;
  for (size_t i = 0; i < f0.size(); ++i) {
    if (f0[i] > 0.0)
      out[i] = std::exp((std::log(f0[i]) - src.mean) * ratio + tgt.mean);
  }
  return out;
}

Waveform synthesize(const FeatureMatrix& sp, const EnergyTrack& energy, const DenseMatrix& phase,
                    const AnalysisConfig& cfg) {
  const size_t frames = sp.data.rows;
  if (energy.size() != frames || phase.rows != frames)
    throw ShapeError("synthesize: sp/energy/phase frame counts differ");
  if (sp.data.cols != cfg.bins() || phase.cols != cfg.bins())
    throw ShapeError("synthesize: expected " + std::to_string(cfg.bins()) + " bins");
  if (frames == 0) throw DataError("synthesize: no frames");

  const size_t out_len = (frames - 1) * cfg.hop + cfg.window;
  std::vector<double> acc(out_len, 0.0);
  std::vector<double> norm(out_len, 0.0);
  const std::vector<double> window = hann_window(cfg.window);

  std::vector<std::complex<double>> buf(cfg.fft_size);
  for (size_t m = 0; m < frames; ++m) {
    const double gain = std::exp(energy[m]);
    const size_t bins = cfg.bins();
    for (size_t k = 0; k < bins; ++k) {
      const double mag = sp.data(m, k) * gain;
      buf[k] = std::polar(mag, phase(m, k));
    }
    for (size_t k = bins; k < cfg.fft_size; ++k) buf[k] = std::conj(buf[cfg.fft_size - k]);
    fft_inplace(buf, true);

    const size_t start = m * cfg.hop;
    for (size_t i = 0; i < cfg.window; ++i) {
      acc[start + i] += buf[i].real();
      norm[start + i] += window[i];
    }
  }

  Waveform out;
  out.sample_rate = cfg.sample_rate;
  out.samples.resize(out_len);
  for (size_t i = 0; i < out_len; ++i) {
    const double v = norm[i] > 1e-8 ? acc[i] / norm[i] : 0.0;
    out.samples[i] = std::clamp(v, -1.0, 1.0);
  }
  return out;
}

}  // namespace vc
