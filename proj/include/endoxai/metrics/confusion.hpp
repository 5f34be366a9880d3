#pragma once

#include <string>
#include <vector>

#include "endoxai/core/error.hpp"

namespace endoxai::metrics {

// rows = true class, columns = predicted class
struct ConfusionMatrix {
  std::vector<std::vector<long long>> counts;
  std::vector<std::string> class_names;

  int num_classes() const { return static_cast<int>(counts.size()); }

  long long total() const {
    long long t = 0;
    for (const auto& row : counts)
      for (long long v : row) t += v;
    return t;
  }

  long long trace() const {
    long long t = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
    return t;
  }

  long long row_sum(int i) const {
    long long t = 0;
    for (long long v : counts[i]) t += v;
    return t;
  }

  long long col_sum(int j) const {
    long long t = 0;
    for (const auto& row : counts) t += row[j];
    return t;
  }
};

inline ConfusionMatrix confusion_matrix(const std::vector<int>& y_true,
                                        const std::vector<int>& y_pred,
                                        int num_classes,
                                        std::vector<std::string> class_names = {}) {
  if (num_classes < 1) throw ContractError("confusion_matrix: need >= 1 class");
  if (y_true.size() != y_pred.size())
    throw ContractError("confusion_matrix: label sequences differ in length");
  ConfusionMatrix cm;
  cm.counts.assign(num_classes, std::vector<long long>(num_classes, 0));
  if (class_names.empty())
    for (int c = 0; c < num_classes; ++c)
      class_names.push_back("class_" + std::to_string(c));
  if (static_cast<int>(class_names.size()) != num_classes)
    throw ContractError("confusion_matrix: class_names size mismatch");
  cm.class_names = std::move(class_names);
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    int t = y_true[i], p = y_pred[i];
    if (t < 0 || t >= num_classes || p < 0 || p >= num_classes)
      throw ContractError("confusion_matrix: label out of range at sample " +
                          std::to_string(i));
    cm.counts[t][p] += 1;
  }
  return cm;
}

}  // namespace endoxai::metrics
