#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace vc {

struct ManifestRecord {
  std::string wav_path;  // relative to the manifest's directory
  std::string speaker_id;
  std::string utterance_id;
  std::string subset;  // "train" | "eval"
};

// Tab-separated corpus index. Speaker ids map to dense one-hot indices in
// sorted order.
struct CorpusManifest {
  std::vector<ManifestRecord> records;

  std::vector<std::string> speaker_ids() const;  // sorted, unique
  std::vector<const ManifestRecord*> select(const std::string& speaker,
                                            const std::string& subset) const;
};

// Parses; rejects duplicate (speaker, utterance, subset) triples and, when
// `check_paths`, records whose WAV is missing next to the manifest.
CorpusManifest load_manifest(const std::filesystem::path& path, bool check_paths = true);

void save_manifest(const CorpusManifest& manifest, const std::filesystem::path& path);

}  // namespace vc
