#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vc/features.hpp"
#include "vc/wav.hpp"

namespace vc {

// Synthetic speakers are formant-filter profiles over a shared vowel
// inventory: pulse trains through resonator cascades. Parallel corpora
// reuse the same vowel sequences across speakers (with per-speaker
// duration jitter); disjoint corpora partition the train sentences into
// per-speaker chunks, so no sentence is shared.
struct CorpusSpec {
  size_t speakers = 2;
  size_t train_utterances = 40;  // size of the train sentence pool
  size_t eval_utterances = 8;    // always parallel across speakers
  size_t phones_per_utterance = 4;
  uint64_t seed = 1;
  bool parallel = true;
  double duration_jitter = 0.12;  // +- fraction applied per phone and speaker
};

struct RenderedUtterance {
  std::string speaker_id;
  std::string utterance_id;
  std::string subset;  // "train" | "eval"
  Waveform wav;
  std::vector<int> sample_label;  // -1 silence, otherwise vowel index
  std::vector<int> vowel_seq;
};

struct SyntheticCorpus {
  std::vector<RenderedUtterance> utterances;
  std::vector<std::string> speaker_ids;
};

SyntheticCorpus gen_synthetic_corpus(const CorpusSpec& spec);

// Frame-level vowel labels (label at each frame center).
std::vector<int> frame_labels(const RenderedUtterance& utt, const AnalysisConfig& cfg = {});

// Writes wav/<speaker>__<utterance>.wav plus manifest.tsv under dir.
void write_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

}  // namespace vc
