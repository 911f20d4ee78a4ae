#include "hcr/dataset.hpp"

#include <algorithm>
#include <filesystem>

#include "hcr/common.hpp"
#include "hcr/image_io.hpp"

namespace fs = std::filesystem;

namespace hcr {

LabeledDataset ingest_dataset(const std::string& dir,
                              const std::vector<std::string>& alphabet,
                              IngestStats* stats) {
  if (!fs::is_directory(dir)) throw DataError(dir + ": not a directory");

  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());

  IngestStats local;
  LabeledDataset ds;
  ds.alphabet = alphabet;
  ds.provenance = dir;
  for (const auto& name : names) {
    const auto dot = name.rfind('.');
    std::string ext = dot == std::string::npos ? "" : name.substr(dot);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext != ".png" && ext != ".pgm") {
      ++local.skipped_other;
      continue;
    }
    const auto sep = name.find('_');
    const std::string label = sep == std::string::npos ? "" : name.substr(0, sep);
    const auto it = std::find(alphabet.begin(), alphabet.end(), label);
    if (label.empty() || it == alphabet.end()) {
      ++local.skipped_label;
      continue;
    }
    ds.samples.push_back({load_image((fs::path(dir) / name).string()),
                          static_cast<int>(it - alphabet.begin())});
    ++local.matched;
  }
  if (stats) *stats = local;
  if (ds.samples.empty()) throw DataError(dir + ": no labeled image files found");
  return ds;
}

}  // namespace hcr
