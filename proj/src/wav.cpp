#include "vc/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "vc/errors.hpp"

namespace vc {

namespace {

void put_u32(std::string& buf, uint32_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
  buf.push_back(static_cast<char>((v >> 16) & 0xff));
  buf.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& buf, uint16_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
}

uint32_t get_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t get_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

void write_wav(const std::filesystem::path& path, const Waveform& w) {
  if (w.samples.empty()) throw DataError("write_wav: empty waveform");
  std::string buf;
  const uint32_t data_bytes = static_cast<uint32_t>(w.samples.size() * 2);
  buf.append("RIFF");
  put_u32(buf, 36 + data_bytes);
  buf.append("WAVE");
  buf.append("fmt ");
  put_u32(buf, 16);
  put_u16(buf, 1);  // PCM
  put_u16(buf, 1);  // mono
  put_u32(buf, static_cast<uint32_t>(w.sample_rate));
  put_u32(buf, static_cast<uint32_t>(w.sample_rate * 2));
  put_u16(buf, 2);   // block align
  put_u16(buf, 16);  // bits per sample
  buf.append("data");
  put_u32(buf, data_bytes);
  for (double s : w.samples) {
    const double clamped = std::clamp(s, -1.0, 1.0);
    const int v = static_cast<int>(std::lrint(clamped * 32767.0));
    put_u16(buf, static_cast<uint16_t>(static_cast<int16_t>(v)));
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("write_wav: cannot open " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write_wav: write failed for " + path.string());
}

Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_wav: cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw IoError("read_wav: " + path.string() + " is not a RIFF/WAVE file");

  Waveform w;
  bool have_fmt = false, have_data = false;
  size_t pos = 12;
  // Chunk scan; unknown chunks are skipped.
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const uint32_t size = get_u32(bytes.data() + pos + 4);
    const size_t body = pos + 8;
    if (body + size > bytes.size())
      throw IoError("read_wav: truncated chunk in " + path.string());
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (size < 16) throw IoError("read_wav: malformed fmt chunk in " + path.string());
      const uint16_t format = get_u16(bytes.data() + body);
      const uint16_t channels = get_u16(bytes.data() + body + 2);
      const uint16_t bits = get_u16(bytes.data() + body + 14);
      if (format != 1 || channels != 1 || bits != 16)
        throw IoError("read_wav: " + path.string() + " must be 16-bit PCM mono");
      w.sample_rate = static_cast<int>(get_u32(bytes.data() + body + 4));
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      if (!have_fmt) throw IoError("read_wav: data chunk before fmt in " + path.string());
      const size_t n = size / 2;
      w.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        const int16_t v = static_cast<int16_t>(get_u16(bytes.data() + body + 2 * i));
        w.samples[i] = static_cast<double>(v) / 32767.0;
      }
      have_data = true;
    }
    pos = body + size + (size & 1);  // RIFF chunks are word-aligned
  }
  if (!have_fmt || !have_data)
    throw IoError("read_wav: missing fmt or data chunk in " + path.string());
  if (w.samples.empty()) throw DataError("read_wav: empty data chunk in " + path.string());
  return w;
}

}  // namespace vc
