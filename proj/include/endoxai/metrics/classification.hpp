#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "endoxai/core/error.hpp"
#include "endoxai/metrics/confusion.hpp"

namespace endoxai::metrics {

enum class Averaging { kMacro, kWeighted };

inline const char* averaging_name(Averaging a) {
  return a == Averaging::kMacro ? "macro" : "weighted";
}

// All rates are percentages in [0, 100].
struct ClassMetrics {
  std::string name;
  long long tp = 0, fp = 0, fn = 0, tn = 0;
  long long support = 0;  // true-class count
  double precision = 0, recall = 0, specificity = 0, f1 = 0;
  bool zero_denominator = false;  // some rate defaulted to 0
};

struct Aggregates {
  double recall = 0, precision = 0, f1 = 0, specificity = 0;
};

struct MetricsReport {
  double accuracy = 0;
  double recall = 0, precision = 0, f1 = 0, specificity = 0;  // selected mode
  Averaging averaging_mode = Averaging::kWeighted;
  Aggregates macro, weighted;
  std::vector<ClassMetrics> per_class;
  std::vector<std::string> warnings;
  long long parameter_count = 0;
  double inference_time_s = 0;
};

namespace detail {

inline double rate_or_zero(long long num, long long den, bool& flagged) {
  if (den == 0) {
    flagged = true;
    return 0.0;
  }
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace detail

/// One-vs-rest rates per class plus macro and support-weighted aggregates.
/// Zero denominators produce 0 with a warning rather than NaN.
inline MetricsReport classification_metrics(const ConfusionMatrix& cm,
                                            Averaging mode = Averaging::kWeighted) {
  const long long total = cm.total();
  if (total <= 0) throw ContractError("classification_metrics: empty matrix");
  const int C = cm.num_classes();

  MetricsReport report;
  report.averaging_mode = mode;
  report.accuracy = 100.0 * static_cast<double>(cm.trace()) / static_cast<double>(total);

  for (int k = 0; k < C; ++k) {
    ClassMetrics m;
    m.name = cm.class_names[k];
    m.tp = cm.counts[k][k];
    m.fn = cm.row_sum(k) - m.tp;
    m.fp = cm.col_sum(k) - m.tp;
    m.tn = total - m.tp - m.fn - m.fp;
    m.support = cm.row_sum(k);
    m.precision = detail::rate_or_zero(m.tp, m.tp + m.fp, m.zero_denominator);
    m.recall = detail::rate_or_zero(m.tp, m.tp + m.fn, m.zero_denominator);
    m.specificity = detail::rate_or_zero(m.tn, m.tn + m.fp, m.zero_denominator);
    if (m.precision + m.recall > 0.0)
      m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    else {
      m.f1 = 0.0;
      m.zero_denominator = true;
    }
    if (m.zero_denominator)
      report.warnings.push_back("class " + m.name +
                                ": zero denominator, affected rates reported as 0");
    report.per_class.push_back(m);
  }

  // self-check: f1 really is the harmonic mean of the stored rates
  for (const ClassMetrics& m : report.per_class) {
    double expect =
        m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    if (std::fabs(expect - m.f1) > 1e-6)
      throw ContractError("classification_metrics: inconsistent f1 for " + m.name);
  }

  double wsum = 0;
  for (const ClassMetrics& m : report.per_class) {
    report.macro.precision += m.precision / C;
    report.macro.recall += m.recall / C;
    report.macro.specificity += m.specificity / C;
    report.macro.f1 += m.f1 / C;
    const double w = static_cast<double>(m.support);
    report.weighted.precision += w * m.precision;
    report.weighted.recall += w * m.recall;
    report.weighted.specificity += w * m.specificity;
    report.weighted.f1 += w * m.f1;
    wsum += w;
  }
  report.weighted.precision /= wsum;
  report.weighted.recall /= wsum;
  report.weighted.specificity /= wsum;
  report.weighted.f1 /= wsum;

  const Aggregates& sel = mode == Averaging::kMacro ? report.macro : report.weighted;
  report.precision = sel.precision;
  report.recall = sel.recall;
  report.specificity = sel.specificity;
  report.f1 = sel.f1;
  return report;
}

/// Micro-averaged recall: pooled TP over pooled TP+FN. Equal to accuracy on
/// any confusion matrix, which is why accuracy and recall columns can match.
inline double micro_recall(const ConfusionMatrix& cm) {
  long long tp = 0, tp_fn = 0;
  for (int k = 0; k < cm.num_classes(); ++k) {
    tp += cm.counts[k][k];
    tp_fn += cm.row_sum(k);
  }
  if (tp_fn == 0) throw ContractError("micro_recall: empty matrix");
  return 100.0 * static_cast<double>(tp) / static_cast<double>(tp_fn);
}

}  // namespace endoxai::metrics
