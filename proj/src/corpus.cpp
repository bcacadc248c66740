#include "vc/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "vc/errors.hpp"
#include "vc/manifest.hpp"
#include "vc/rng.hpp"

namespace vc {

namespace {

constexpr double kSampleRate = 16000.0;

// Shared vowel inventory (first three formants, Hz).
constexpr std::array<std::array<double, 3>, 5> kVowelFormants{{
    {730.0, 1090.0, 2440.0},   // a
    {530.0, 1840.0, 2480.0},   // e
    {270.0, 2290.0, 3010.0},   // i
    {570.0, 840.0, 2410.0},    // o
    {300.0, 870.0, 2240.0},    // u
}};
constexpr std::array<double, 3> kFormantBandwidth{90.0, 110.0, 160.0};

struct SpeakerProfile {
  double formant_scale;
  double f0_base;
  double bandwidth_scale;
};

// Fixed profiles; the first two are deliberately far apart (>30% formant
// separation) so conversion has something to do.
constexpr std::array<SpeakerProfile, 8> kProfiles{{
    {0.86, 115.0, 1.00},
    {1.14, 235.0, 0.90},
    {0.95, 150.0, 1.10},
    {1.25, 320.0, 0.85},
    {0.80, 100.0, 1.05},
    {1.05, 185.0, 0.95},
    {0.90, 130.0, 1.15},
    {1.20, 280.0, 0.80},
}};

struct Phone {
  int vowel;            // -1 for silence
  double duration_sec;  // before jitter
};

// Sentence content depends only on (seed, sentence index), never on the
// speaker, so parallel corpora share labels and eval sets match across
// parallel/disjoint generation runs with the same seed.
std::vector<Phone> sentence_phones(uint64_t seed, size_t sentence, size_t phones) {
  Rng rng(mix_seed(seed, 0xC0DE, sentence));
  std::vector<Phone> seq;
  seq.push_back({-1, rng.uniform(0.06, 0.10)});
  for (size_t p = 0; p < phones; ++p) {
    seq.push_back({static_cast<int>(rng.below(kVowelFormants.size())),
                   rng.uniform(0.12, 0.20)});
    if (p + 1 < phones && rng.uniform() < 0.35)
      seq.push_back({-1, rng.uniform(0.04, 0.08)});
  }
  seq.push_back({-1, rng.uniform(0.06, 0.10)});
  return seq;
}

// Two-pole resonator; unity gain at the resonance.
struct Resonator {
  double b0, a1, a2;
  double y1 = 0.0, y2 = 0.0;
  Resonator(double freq, double bandwidth) {
    const double r = std::exp(-M_PI * bandwidth / kSampleRate);
    const double theta = 2.0 * M_PI * freq / kSampleRate;
    a1 = -2.0 * r * std::cos(theta);
    a2 = r * r;
    b0 = (1.0 - r) * std::sqrt(1.0 - 2.0 * r * std::cos(2.0 * theta) + r * r);
  }
  double step(double x) {
    const double y = b0 * x - a1 * y1 - a2 * y2;
    y2 = y1;
    y1 = y;
    return y;
  }
};

RenderedUtterance render(uint64_t seed, size_t speaker_idx, const SpeakerProfile& prof,
                         size_t sentence, size_t phones, double jitter) {
  const std::vector<Phone> seq = sentence_phones(seed, sentence, phones);
  Rng rng(mix_seed(seed, 0xF00D + speaker_idx, sentence));

  RenderedUtterance utt;
  utt.wav.sample_rate = static_cast<int>(kSampleRate);
  for (const Phone& ph : seq) {
    double dur = ph.duration_sec;
    if (ph.vowel >= 0) {
      utt.vowel_seq.push_back(ph.vowel);
      dur *= rng.uniform(1.0 - jitter, 1.0 + jitter);
    }
    const size_t n = static_cast<size_t>(std::lround(dur * kSampleRate));
    if (ph.vowel < 0) {
      utt.wav.samples.insert(utt.wav.samples.end(), n, 0.0);
      utt.sample_label.insert(utt.sample_label.end(), n, -1);
      continue;
    }

    std::array<Resonator, 3> filt{
        Resonator(kVowelFormants[static_cast<size_t>(ph.vowel)][0] * prof.formant_scale,
                  kFormantBandwidth[0] * prof.bandwidth_scale),
        Resonator(kVowelFormants[static_cast<size_t>(ph.vowel)][1] * prof.formant_scale,
                  kFormantBandwidth[1] * prof.bandwidth_scale),
        Resonator(kVowelFormants[static_cast<size_t>(ph.vowel)][2] * prof.formant_scale,
                  kFormantBandwidth[2] * prof.bandwidth_scale)};

    const double f0_start = prof.f0_base * std::exp2(rng.uniform(-0.12, 0.12));
    const double f0_end = prof.f0_base * std::exp2(rng.uniform(-0.12, 0.12));
    const double amp = rng.uniform(0.25, 0.40);
    const size_t fade = std::min<size_t>(n / 4, 160);  // 10 ms raised cosine

    double phase = 1.0;  // emit a pulse on the first sample
    for (size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / std::max<double>(1.0, static_cast<double>(n - 1));
      const double f0 = f0_start + (f0_end - f0_start) * t;
      phase += f0 / kSampleRate;
      double excitation = 0.0;
      if (phase >= 1.0) {
        phase -= 1.0;
        excitation = 1.0;
      }
      double y = 0.0;
      for (auto& f : filt) y += f.step(excitation);
      double env = 1.0;
      if (i < fade) env = 0.5 - 0.5 * std::cos(M_PI * static_cast<double>(i) / fade);
      if (n - 1 - i < fade)
        env = std::min(env, 0.5 - 0.5 * std::cos(M_PI * static_cast<double>(n - 1 - i) / fade));
      utt.wav.samples.push_back(amp * env * y);
      utt.sample_label.push_back(ph.vowel);
    }
  }

  // Deterministic peak normalization; energy is factored out downstream, so
  // only headroom matters here.
  double peak = 0.0;
  for (double s : utt.wav.samples) peak = std::max(peak, std::abs(s));
  if (peak > 0.0) {
    const double gain = 0.35 / peak;
    for (double& s : utt.wav.samples) s *= gain;
  }
  return utt;
}

std::string utterance_name(const char* prefix, size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%s%04zu", prefix, index);
  return buf;
}

}  // namespace

SyntheticCorpus gen_synthetic_corpus(const CorpusSpec& spec) {
  if (spec.speakers < 2) throw ConfigError("gen_synthetic_corpus: need at least 2 speakers");
  if (spec.speakers > kProfiles.size())
    throw ConfigError("gen_synthetic_corpus: at most " + std::to_string(kProfiles.size()) +
                      " speakers supported");
  if (spec.train_utterances == 0 || spec.eval_utterances == 0 || spec.phones_per_utterance == 0)
    throw ConfigError("gen_synthetic_corpus: utterance and phone counts must be positive");
  if (!spec.parallel && spec.train_utterances < spec.speakers)
    throw ConfigError("gen_synthetic_corpus: disjoint mode needs at least one sentence per speaker");

  SyntheticCorpus corpus;
  for (size_t k = 0; k < spec.speakers; ++k)
    corpus.speaker_ids.push_back("spk" + std::to_string(k));

  // Eval sentences live in a separate index range and are rendered for all
  // speakers regardless of mode, so evaluation references always exist.
  constexpr size_t kEvalBase = 100000;

  for (size_t k = 0; k < spec.speakers; ++k) {
    const SpeakerProfile& prof = kProfiles[k];
    size_t train_lo = 0, train_hi = spec.train_utterances;
    if (!spec.parallel) {
      const size_t chunk = spec.train_utterances / spec.speakers;
      train_lo = k * chunk;
      train_hi = (k + 1 == spec.speakers) ? spec.train_utterances : (k + 1) * chunk;
    }
    for (size_t s = train_lo; s < train_hi; ++s) {
      RenderedUtterance utt = render(spec.seed, k, prof, s, spec.phones_per_utterance,
                                     spec.duration_jitter);
      utt.speaker_id = corpus.speaker_ids[k];
      utt.utterance_id = utterance_name("u", s);
      utt.subset = "train";
      corpus.utterances.push_back(std::move(utt));
    }
    for (size_t e = 0; e < spec.eval_utterances; ++e) {
      RenderedUtterance utt = render(spec.seed, k, prof, kEvalBase + e,
                                     spec.phones_per_utterance, spec.duration_jitter);
      utt.speaker_id = corpus.speaker_ids[k];
      utt.utterance_id = utterance_name("e", e);
      utt.subset = "eval";
      corpus.utterances.push_back(std::move(utt));
    }
  }
  return corpus;
}

std::vector<int> frame_labels(const RenderedUtterance& utt, const AnalysisConfig& cfg) {
  const size_t frames = frame_count(utt.wav.samples.size(), cfg);
  std::vector<int> labels(frames, -1);
  for (size_t m = 0; m < frames; ++m) {
    const size_t center = m * cfg.hop + cfg.window / 2;
    if (center < utt.sample_label.size()) labels[m] = utt.sample_label[center];
  }
  return labels;
}

void write_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "wav");
  CorpusManifest manifest;
  for (const auto& utt : corpus.utterances) {
    const std::string rel = "wav/" + utt.speaker_id + "__" + utt.utterance_id + ".wav";
    write_wav(dir / rel, utt.wav);
    manifest.records.push_back({rel, utt.speaker_id, utt.utterance_id, utt.subset});
  }
  save_manifest(manifest, dir / "manifest.tsv");
}

}  // namespace vc
