#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "endoxai/core/error.hpp"
#include "endoxai/core/fsio.hpp"
#include "endoxai/metrics/confusion.hpp"
#include "endoxai/training/trainer.hpp"

namespace endoxai::metrics {

struct CurveSeries {
  std::string metric;  // "loss" or "accuracy"
  std::vector<int> epochs;
  std::vector<double> train, val;
};

inline CurveSeries loss_series(const training::TrainingHistory& history) {
  CurveSeries s;
  s.metric = "loss";
  for (const auto& r : history.records) {
    s.epochs.push_back(r.epoch);
    s.train.push_back(r.loss);
    s.val.push_back(r.val_loss);
  }
  return s;
}

inline CurveSeries accuracy_series(const training::TrainingHistory& history) {
  CurveSeries s;
  s.metric = "accuracy";
  for (const auto& r : history.records) {
    s.epochs.push_back(r.epoch);
    s.train.push_back(r.accuracy);
    s.val.push_back(r.val_accuracy);
  }
  return s;
}

/// The exact numbers behind the figure, for tests and downstream tooling.
inline nlohmann::json curve_sidecar(const CurveSeries& s) {
  return {{"metric", s.metric},
          {"epoch", s.epochs},
          {"train", s.train},
          {"validation", s.val}};
}

/// Train and validation series overlaid on labeled axes.
inline cv::Mat render_curve(const CurveSeries& s) {
  if (s.epochs.empty()) throw ContractError("render_curve: empty history");
  const int W = 640, H = 480;
  const int left = 70, right = 20, top = 40, bottom = 50;
  cv::Mat img(H, W, CV_8UC3, cv::Scalar(255, 255, 255));

  double lo = s.train[0], hi = s.train[0];
  for (double v : s.train) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double v : s.val) lo = std::min(lo, v), hi = std::max(hi, v);
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  } else {
    double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  const int e_lo = s.epochs.front(), e_hi = s.epochs.back();

  auto px = [&](int epoch) {
    double t = e_hi == e_lo ? 0.5
                            : static_cast<double>(epoch - e_lo) /
                                  static_cast<double>(e_hi - e_lo);
    return left + static_cast<int>(t * (W - left - right) + 0.5);
  };
  auto py = [&](double v) {
    double t = (v - lo) / (hi - lo);
    return H - bottom - static_cast<int>(t * (H - top - bottom) + 0.5);
  };

  const cv::Scalar axis(0, 0, 0), train_color(180, 90, 20), val_color(30, 130, 230);
  cv::line(img, {left, top}, {left, H - bottom}, axis, 1);
  cv::line(img, {left, H - bottom}, {W - right, H - bottom}, axis, 1);

  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", hi);
  cv::putText(img, buf, {6, top + 8}, cv::FONT_HERSHEY_SIMPLEX, 0.4, axis, 1);
  std::snprintf(buf, sizeof buf, "%.4g", lo);
  cv::putText(img, buf, {6, H - bottom}, cv::FONT_HERSHEY_SIMPLEX, 0.4, axis, 1);
  std::snprintf(buf, sizeof buf, "%d", e_lo);
  cv::putText(img, buf, {left - 6, H - bottom + 20}, cv::FONT_HERSHEY_SIMPLEX, 0.4, axis, 1);
  std::snprintf(buf, sizeof buf, "%d", e_hi);
  cv::putText(img, buf, {px(e_hi) - 10, H - bottom + 20}, cv::FONT_HERSHEY_SIMPLEX, 0.4,
              axis, 1);
  cv::putText(img, "epoch", {W / 2 - 25, H - 12}, cv::FONT_HERSHEY_SIMPLEX, 0.5, axis, 1);
  cv::putText(img, s.metric, {left, 22}, cv::FONT_HERSHEY_SIMPLEX, 0.5, axis, 1);

  auto draw_series = [&](const std::vector<double>& values, const cv::Scalar& color) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      cv::Point p(px(s.epochs[i]), py(values[i]));
      cv::circle(img, p, 2, color, cv::FILLED);
      if (i > 0)
        cv::line(img, {px(s.epochs[i - 1]), py(values[i - 1])}, p, color, 1,
                 cv::LINE_AA);
    }
  };
  draw_series(s.train, train_color);
  draw_series(s.val, val_color);

  cv::line(img, {W - 170, 20}, {W - 140, 20}, train_color, 2);
  cv::putText(img, "train", {W - 132, 25}, cv::FONT_HERSHEY_SIMPLEX, 0.45, axis, 1);
  cv::line(img, {W - 170, 36}, {W - 140, 36}, val_color, 2);
  cv::putText(img, "validation", {W - 132, 41}, cv::FONT_HERSHEY_SIMPLEX, 0.45, axis, 1);
  return img;
}

inline void write_png(const cv::Mat& img, const std::string& path) {
  std::vector<unsigned char> bytes;
  if (!cv::imencode(".png", img, bytes))
    throw Error("failed to encode png: " + path);
  fsio::atomic_write(path, std::string(bytes.begin(), bytes.end()));
}

/// loss_curve.{png,json} and accuracy_curve.{png,json} under `dir`.
inline void render_curves(const training::TrainingHistory& history,
                          const std::string& dir) {
  if (history.records.empty()) throw ContractError("render_curves: empty history");
  for (const CurveSeries& s : {loss_series(history), accuracy_series(history)}) {
    write_png(render_curve(s), dir + "/" + s.metric + "_curve.png");
    fsio::atomic_write(dir + "/" + s.metric + "_curve.json",
                       curve_sidecar(s).dump(2) + "\n");
  }
}

/// Count heatmap, rows true / columns predicted, counts printed per cell.
inline cv::Mat render_confusion(const ConfusionMatrix& cm) {
  const int C = cm.num_classes();
  if (C < 1) throw ContractError("render_confusion: empty matrix");
  const int cell = 64, left = 120, top = 60, bottom = 20, right = 20;
  const int W = left + C * cell + right, H = top + C * cell + bottom;
  cv::Mat img(H, W, CV_8UC3, cv::Scalar(255, 255, 255));
  long long peak = 1;
  for (const auto& row : cm.counts)
    for (long long v : row) peak = std::max(peak, v);

  const cv::Scalar axis(0, 0, 0);
  for (int i = 0; i < C; ++i) {
    std::string name = cm.class_names[i];
    if (name.size() > 12) name = name.substr(0, 11) + "~";
    cv::putText(img, name, {6, top + i * cell + cell / 2 + 4},
                cv::FONT_HERSHEY_SIMPLEX, 0.38, axis, 1);
    cv::putText(img, std::to_string(i), {left + i * cell + cell / 2 - 5, top - 10},
                cv::FONT_HERSHEY_SIMPLEX, 0.45, axis, 1);
    for (int j = 0; j < C; ++j) {
      double t = static_cast<double>(cm.counts[i][j]) / static_cast<double>(peak);
      // white through blue fill, text flips to white on dark cells
      cv::Scalar fill(255 - 190 * t, 255 - 150 * t, 255 - 60 * t);
      cv::Rect rect(left + j * cell, top + i * cell, cell, cell);
      cv::rectangle(img, rect, fill, cv::FILLED);
      cv::rectangle(img, rect, cv::Scalar(160, 160, 160), 1);
      std::string count = std::to_string(cm.counts[i][j]);
      cv::Scalar text = t > 0.55 ? cv::Scalar(255, 255, 255) : axis;
      cv::putText(img, count,
                  {rect.x + cell / 2 - 6 * static_cast<int>(count.size()),
                   rect.y + cell / 2 + 5},
                  cv::FONT_HERSHEY_SIMPLEX, 0.45, text, 1);
    }
  }
  cv::putText(img, "predicted", {left + (C * cell) / 2 - 35, 24},
              cv::FONT_HERSHEY_SIMPLEX, 0.5, axis, 1);
  cv::putText(img, "true", {6, 24}, cv::FONT_HERSHEY_SIMPLEX, 0.5, axis, 1);
  return img;
}

inline nlohmann::json confusion_sidecar(const ConfusionMatrix& cm) {
  return {{"class_names", cm.class_names}, {"counts", cm.counts}};
}

}  // namespace endoxai::metrics
