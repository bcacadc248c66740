#include "vc/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "vc/errors.hpp"

namespace vc {

std::vector<std::string> CorpusManifest::speaker_ids() const {
  std::set<std::string> ids;
  for (const auto& r : records) ids.insert(r.speaker_id);
  return {ids.begin(), ids.end()};
}

std::vector<const ManifestRecord*> CorpusManifest::select(const std::string& speaker,
                                                          const std::string& subset) const {
  std::vector<const ManifestRecord*> out;
  for (const auto& r : records)
    if (r.speaker_id == speaker && r.subset == subset) out.push_back(&r);
  return out;
}

CorpusManifest load_manifest(const std::filesystem::path& path, bool check_paths) {
  std::ifstream in(path);
  if (!in) throw IoError("load_manifest: cannot open " + path.string());
  CorpusManifest m;
  std::set<std::string> seen;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    ManifestRecord r;
    std::string extra;
    if (!std::getline(ss, r.wav_path, '\t') || !std::getline(ss, r.speaker_id, '\t') ||
        !std::getline(ss, r.utterance_id, '\t') || !std::getline(ss, r.subset, '\t'))
      throw IoError("load_manifest: " + path.string() + ":" + std::to_string(lineno) +
                    ": expected 4 tab-separated fields");
    if (std::getline(ss, extra, '\t'))
      throw IoError("load_manifest: " + path.string() + ":" + std::to_string(lineno) +
                    ": too many fields");
    if (r.subset != "train" && r.subset != "eval")
      throw DataError("load_manifest: subset must be train or eval at line " +
                      std::to_string(lineno));
    const std::string key = r.speaker_id + "\x1f" + r.utterance_id + "\x1f" + r.subset;
    if (!seen.insert(key).second)
      throw DataError("load_manifest: duplicate (speaker, utterance, subset) at line " +
                      std::to_string(lineno));
    if (check_paths && !std::filesystem::exists(path.parent_path() / r.wav_path))
      throw IoError("load_manifest: missing wav file " + r.wav_path + " (line " +
                    std::to_string(lineno) + ")");
    m.records.push_back(std::move(r));
  }
  if (m.records.empty()) throw DataError("load_manifest: no records in " + path.string());
  return m;
}

void save_manifest(const CorpusManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("save_manifest: cannot open " + path.string());
  out << "# wav-path\tspeaker-id\tutterance-id\tsubset\n";
  for (const auto& r : manifest.records)
    out << r.wav_path << '\t' << r.speaker_id << '\t' << r.utterance_id << '\t' << r.subset
        << '\n';
  if (!out) throw IoError("save_manifest: write failed for " + path.string());
}

}  // namespace vc
