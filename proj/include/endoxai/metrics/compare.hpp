#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "endoxai/core/csv.hpp"
#include "endoxai/core/error.hpp"
#include "endoxai/metrics/classification.hpp"

namespace endoxai::metrics {

struct ComparisonRow {
  std::string name;
  double accuracy = 0, recall = 0, precision = 0, f1 = 0, specificity = 0;
  long long parameter_count = 0;
  double test_time_s = 0;
};

inline ComparisonRow comparison_row(const std::string& name, const MetricsReport& r) {
  return {name,    r.accuracy,        r.recall,          r.precision,
          r.f1,    r.specificity,     r.parameter_count, r.inference_time_s};
}

inline std::string format_percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// Parameter counts print in millions to one decimal: 11100000 -> "11.1M".
inline std::string format_params(long long count) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1fM", static_cast<double>(count) / 1e6);
  return buf;
}

inline std::string format_time(double seconds) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1fs", seconds);
  return buf;
}

inline std::vector<std::string> comparison_cells(const ComparisonRow& r) {
  return {r.name,
          format_percent(r.accuracy),
          format_percent(r.recall),
          format_percent(r.precision),
          format_percent(r.f1),
          format_percent(r.specificity),
          format_params(r.parameter_count),
          format_time(r.test_time_s)};
}

inline const std::vector<std::string>& comparison_header() {
  static const std::vector<std::string> header = {
      "model",    "accuracy",    "recall",     "precision",
      "f1_score", "specificity", "parameters", "test_time"};
  return header;
}

inline std::string compare_csv(const std::vector<ComparisonRow>& rows) {
  if (rows.empty()) throw ContractError("compare_csv: need at least one row");
  auto line = [](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv::field(cells[i]);
    }
    out += '\n';
    return out;
  };
  std::string out = line(comparison_header());
  for (const ComparisonRow& r : rows) out += line(comparison_cells(r));
  return out;
}

/// Aligned text table in input order, headline metrics to two decimals.
inline std::string compare_text(const std::vector<ComparisonRow>& rows) {
  if (rows.empty()) throw ContractError("compare_text: need at least one row");
  static const std::vector<std::string> titles = {
      "Model",    "Accuracy",    "Recall",     "Precision",
      "F1-Score", "Specificity", "Parameters", "Test Time"};
  std::vector<std::vector<std::string>> table;
  table.push_back(titles);
  for (const ComparisonRow& r : rows) table.push_back(comparison_cells(r));

  std::vector<std::size_t> width(titles.size(), 0);
  for (const auto& row : table)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());

  std::string out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t c = 0; c < table[i].size(); ++c) {
      std::string cell = table[i][c];
      cell.resize(width[c], ' ');
      out += cell;
      if (c + 1 < table[i].size()) out += "  ";
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
    if (i == 0) {
      for (std::size_t c = 0; c < width.size(); ++c) {
        out += std::string(width[c], '-');
        if (c + 1 < width.size()) out += "  ";
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace endoxai::metrics
