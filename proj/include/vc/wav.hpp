#pragma once

#include <filesystem>
#include <vector>

namespace vc {

struct Waveform {
  std::vector<double> samples;  // in [-1, 1]
  int sample_rate = 16000;
};

// 16-bit PCM mono little-endian RIFF. Samples are clamped to [-1, 1] and
// rounded to the nearest step on write; read returns sample / 32767.
void write_wav(const std::filesystem::path& path, const Waveform& w);
Waveform read_wav(const std::filesystem::path& path);

}  // namespace vc
