#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <string>
#include <vector>

#include <opencv2/imgcodecs.hpp>

#include "endoxai/core/csv.hpp"
#include "endoxai/core/error.hpp"

namespace endoxai::data {

namespace fs = std::filesystem;

enum class Split { train, val, test, unassigned };

inline const char* split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
    default: return "unassigned";
  }
}

inline Split split_from_name(const std::string& name) {
  if (name == "train") return Split::train;
  if (name == "val") return Split::val;
  if (name == "test") return Split::test;
  throw DataError("unknown split name: " + name);
}

struct ImageRecord {
  std::string path;
  std::string label;
  int label_index = -1;
  Split split = Split::unassigned;
};

struct RejectEntry {
  std::string path;
  std::string reason;
};

struct ScanResult {
  std::vector<ImageRecord> records;      // unsplit, sorted by (label, path)
  std::vector<std::string> class_names;  // lexicographic order fixes label_index
  std::vector<RejectEntry> rejects;
};

inline bool has_image_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".jpg" || ext == ".jpeg" || ext == ".png";
}

/// Walk `<root>/<class_name>/<image>` and build one record per decodable
/// image. Undecodable files land in the rejects report instead of being
/// silently dropped; a class with no usable image at all is an error.
inline ScanResult scan_corpus(const fs::path& root) {
  if (!fs::exists(root) || !fs::is_directory(root))
    throw DataError("corpus not found: " + root.string());

  std::vector<std::string> class_names;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    std::string name = entry.path().filename().string();
    if (!name.empty() && name[0] == '.') continue;
    class_names.push_back(name);
  }
  if (class_names.empty()) throw DataError("corpus has no class directories: " + root.string());
  std::sort(class_names.begin(), class_names.end());

  ScanResult result;
  result.class_names = class_names;
  for (int ci = 0; ci < static_cast<int>(class_names.size()); ++ci) {
    fs::path class_dir = root / class_names[ci];
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(class_dir)) {
      if (entry.is_regular_file() && has_image_extension(entry.path()))
        files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
      throw DataError("class directory has no images: " + class_dir.string());

    std::size_t accepted = 0;
    for (const auto& file : files) {
      cv::Mat m = cv::imread(file, cv::IMREAD_COLOR);
      if (m.empty()) {
        result.rejects.push_back({file, "decode-failed"});
        continue;
      }
      result.records.push_back({file, class_names[ci], ci, Split::unassigned});
      ++accepted;
    }
    if (accepted == 0)
      throw DataError("class directory has no decodable images: " + class_dir.string());
  }
  return result;
}

inline std::string rejects_csv(const std::vector<RejectEntry>& rejects) {
  std::string out = "path,reason\n";
  for (const auto& r : rejects) out += csv::field(r.path) + "," + r.reason + "\n";
  return out;
}

}  // namespace endoxai::data
