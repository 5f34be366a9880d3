#pragma once

#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

#include "endoxai/metrics/classification.hpp"
#include "endoxai/metrics/evaluate.hpp"

namespace endoxai::metrics {

inline nlohmann::json aggregates_json(const Aggregates& a) {
  return {{"recall", a.recall},
          {"precision", a.precision},
          {"f1_score", a.f1},
          {"specificity", a.specificity}};
}

/// Full structured report: headline rates, both averaging schemes, the
/// per-class table, and the confusion matrix itself.
inline nlohmann::json metrics_json(const EvaluationResult& result) {
  const MetricsReport& r = result.report;
  nlohmann::json j;
  j["accuracy"] = r.accuracy;
  j["recall"] = r.recall;
  j["precision"] = r.precision;
  j["f1_score"] = r.f1;
  j["specificity"] = r.specificity;
  j["averaging_mode"] = averaging_name(r.averaging_mode);
  j["macro"] = aggregates_json(r.macro);
  j["weighted"] = aggregates_json(r.weighted);
  j["parameter_count"] = r.parameter_count;
  j["inference_time_s"] = r.inference_time_s;
  j["warnings"] = r.warnings;
  j["per_class"] = nlohmann::json::array();
  for (const ClassMetrics& m : r.per_class)
    j["per_class"].push_back({{"name", m.name},
                              {"tp", m.tp},
                              {"fp", m.fp},
                              {"fn", m.fn},
                              {"tn", m.tn},
                              {"support", m.support},
                              {"precision", m.precision},
                              {"recall", m.recall},
                              {"specificity", m.specificity},
                              {"f1_score", m.f1},
                              {"zero_denominator", m.zero_denominator}});
  j["confusion_matrix"] = {{"class_names", result.cm.class_names},
                           {"counts", result.cm.counts}};
  return j;
}

inline std::string metrics_text(const EvaluationResult& result) {
  const MetricsReport& r = result.report;
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf,
                "accuracy %.2f  recall %.2f  precision %.2f  f1 %.2f  specificity %.2f  "
                "(%s averaging)\n",
                r.accuracy, r.recall, r.precision, r.f1, r.specificity,
                averaging_name(r.averaging_mode));
  out += buf;
  std::snprintf(buf, sizeof buf, "parameters %lld  inference time %.3fs\n\n",
                r.parameter_count, r.inference_time_s);
  out += buf;

  std::size_t name_w = 5;
  for (const ClassMetrics& m : r.per_class) name_w = std::max(name_w, m.name.size());
  std::snprintf(buf, sizeof buf, "%-*s  %9s  %9s  %9s  %11s  %7s\n",
                static_cast<int>(name_w), "class", "precision", "recall", "f1",
                "specificity", "support");
  out += buf;
  for (const ClassMetrics& m : r.per_class) {
    std::snprintf(buf, sizeof buf, "%-*s  %9.2f  %9.2f  %9.2f  %11.2f  %7lld%s\n",
                  static_cast<int>(name_w), m.name.c_str(), m.precision, m.recall,
                  m.f1, m.specificity, m.support,
                  m.zero_denominator ? "  [zero denominator]" : "");
    out += buf;
  }

  out += "\nconfusion matrix (rows true, columns predicted)\n";
  for (int i = 0; i < result.cm.num_classes(); ++i) {
    std::snprintf(buf, sizeof buf, "%-*s ", static_cast<int>(name_w),
                  result.cm.class_names[i].c_str());
    out += buf;
    for (int jx = 0; jx < result.cm.num_classes(); ++jx) {
      std::snprintf(buf, sizeof buf, " %6lld", result.cm.counts[i][jx]);
      out += buf;
    }
    out += '\n';
  }
  for (const std::string& w : r.warnings) out += "warning: " + w + "\n";
  return out;
}

}  // namespace endoxai::metrics
