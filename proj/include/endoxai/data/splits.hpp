#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "endoxai/core/csv.hpp"
#include "endoxai/core/error.hpp"
#include "endoxai/core/rng.hpp"
#include "endoxai/data/corpus.hpp"

namespace endoxai::data {

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

struct SplitManifest {
  std::vector<ImageRecord> records;  // sorted by (split, path)
  std::vector<std::string> class_names;
  std::uint64_t seed = 0;
  SplitRatios ratios;
  std::vector<std::string> warnings;  // not serialized

  std::vector<const ImageRecord*> split_records(Split s) const {
    std::vector<const ImageRecord*> out;
    for (const auto& r : records)
      if (r.split == s) out.push_back(&r);
    return out;
  }

  std::size_t split_size(Split s) const {
    std::size_t n = 0;
    for (const auto& r : records) n += (r.split == s) ? 1 : 0;
    return n;
  }
};

// Apportion n across (train, val, test): floor the targets, then hand the
// leftover units to the largest fractional remainders, ties going to train
// first. Every split lands within 1 of ratio*n.
inline std::array<std::size_t, 3> apportion(std::size_t n, const SplitRatios& ratios) {
  std::array<double, 3> target = {ratios.train * static_cast<double>(n),
                                  ratios.val * static_cast<double>(n),
                                  ratios.test * static_cast<double>(n)};
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> frac{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    counts[i] = static_cast<std::size_t>(std::floor(target[i] + 1e-9));
    frac[i] = target[i] - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return frac[a] > frac[b]; });
  for (std::size_t left = n - assigned, i = 0; left > 0; --left, ++i)
    counts[order[i % 3]] += 1;
  return counts;
}

/// Deterministic per-class stratified split. The procedure is part of the
/// contract: group records by class, sort each group by path, shuffle it with
/// a splitmix64 Fisher-Yates stream seeded by mix(kStreamSplit, seed,
/// label_index), then cut train / val / test by the apportioned counts.
inline SplitManifest make_splits(const std::vector<ImageRecord>& records,
                                 const SplitRatios& ratios, std::uint64_t seed) {
  if (records.empty()) throw ContractError("make_splits: no records");
  const double sum = ratios.train + ratios.val + ratios.test;
  if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0 ||
      std::abs(sum - 1.0) > 1e-9)
    throw ContractError("make_splits: ratios must be nonnegative and sum to 1");

  std::map<int, std::vector<ImageRecord>> by_class;
  std::map<int, std::string> names;
  for (const auto& r : records) {
    by_class[r.label_index].push_back(r);
    names[r.label_index] = r.label;
  }

  SplitManifest manifest;
  manifest.seed = seed;
  manifest.ratios = ratios;
  for (const auto& [idx, name] : names) {
    (void)idx;
    manifest.class_names.push_back(name);
  }

  const std::array<double, 3> ratio_arr = {ratios.train, ratios.val, ratios.test};
  const std::array<Split, 3> split_arr = {Split::train, Split::val, Split::test};
  for (auto& [label_index, group] : by_class) {
    std::sort(group.begin(), group.end(),
              [](const ImageRecord& a, const ImageRecord& b) { return a.path < b.path; });
    rng::Stream stream(rng::mix(rng::kStreamSplit, seed,
                                static_cast<std::uint64_t>(label_index)));
    rng::shuffle(group, stream);

    auto counts = apportion(group.size(), ratios);
    for (int s = 0; s < 3; ++s) {
      if (ratio_arr[s] > 0 && counts[s] == 0 &&
          static_cast<double>(group.size()) * ratio_arr[s] > 0)
        manifest.warnings.push_back(std::string("class '") + names[label_index] +
                                    "' contributes 0 records to " +
                                    split_name(split_arr[s]));
    }
    std::size_t pos = 0;
    for (int s = 0; s < 3; ++s)
      for (std::size_t k = 0; k < counts[s]; ++k, ++pos) {
        group[pos].split = split_arr[s];
        manifest.records.push_back(group[pos]);
      }
  }

  std::sort(manifest.records.begin(), manifest.records.end(),
            [](const ImageRecord& a, const ImageRecord& b) {
              if (a.split != b.split) return static_cast<int>(a.split) < static_cast<int>(b.split);
              return a.path < b.path;
            });
  return manifest;
}

/// Serialize as the manifest CSV: header `path,label,label_index,split`,
/// UTF-8, LF endings, rows already sorted by (split, path).
inline std::string manifest_csv(const SplitManifest& manifest) {
  std::string out = "path,label,label_index,split\n";
  for (const auto& r : manifest.records) {
    out += csv::field(r.path) + "," + csv::field(r.label) + "," +
           std::to_string(r.label_index) + "," + split_name(r.split) + "\n";
  }
  return out;
}

inline SplitManifest parse_manifest_csv(const std::string& content) {
  auto lines = csv::parse_lines(content);
  if (lines.empty() || lines[0] != "path,label,label_index,split")
    throw DataError("manifest CSV: bad or missing header");
  SplitManifest manifest;
  std::map<int, std::string> names;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = csv::parse_line(lines[i]);
    if (fields.size() != 4)
      throw DataError("manifest CSV: bad row " + std::to_string(i + 1));
    ImageRecord r;
    r.path = fields[0];
    r.label = fields[1];
    r.label_index = std::stoi(fields[2]);
    r.split = split_from_name(fields[3]);
    names[r.label_index] = r.label;
    manifest.records.push_back(std::move(r));
  }
  for (const auto& [idx, name] : names) {
    if (idx != static_cast<int>(manifest.class_names.size()))
      throw DataError("manifest CSV: label indices are not contiguous from 0");
    manifest.class_names.push_back(name);
  }
  return manifest;
}

}  // namespace endoxai::data
