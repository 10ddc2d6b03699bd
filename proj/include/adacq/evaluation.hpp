/* Copyright 2026 The adacq Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef ADACQ_EVALUATION_HPP_
#define ADACQ_EVALUATION_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "adacq/core_types.hpp"

namespace adacq {

struct Detection {
  FrameId frame_id = 0;
  int class_id = 0;
  PixelBox box;
  double confidence = 1.0;
};

struct GroundTruthBox {
  FrameId frame_id = 0;
  int class_id = 0;
  PixelBox box;
};

double iou(const PixelBox& a, const PixelBox& b);

struct MatchResult {
  std::vector<std::size_t> order;  // prediction indices, best rank first
  std::vector<bool> tp;            // per ranked prediction
  std::vector<int> matched_truth;  // per ranked prediction, -1 if none
  std::int64_t true_positives = 0;
  std::int64_t false_positives = 0;
  std::int64_t false_negatives = 0;
};

// Rank order: confidence descending, then x_min, then y_min ascending, then
// input position.
std::vector<std::size_t> rank_detections(std::span<const Detection> preds);

// Greedy matching for one frame and one class: each prediction in rank order
// takes the unmatched truth with the highest IoU >= iou_threshold (lowest
// truth index on IoU ties). Throws ConfigError if the inputs mix frames or
// classes.
MatchResult match_detections(std::span<const Detection> preds,
                             std::span<const GroundTruthBox> truths, double iou_threshold);

enum class ApMode { kAllPoints, kPoints101 };

// `tp` and `confidence` describe predictions sorted by non-increasing
// confidence. Predictions sharing a confidence enter the PR curve together.
// all-points integrates the precision envelope over recall; 101-point
// averages the envelope at recall 0, 0.01, ..., 1. With no truths, AP is 1
// when there are no predictions and 0 otherwise.
double average_precision(const std::vector<bool>& tp, const std::vector<double>& confidence,
                         std::int64_t total_truths, ApMode mode);

struct EvalConfig {
  double iou_threshold = 0.5;  // TP/FP/FN and P/R/F1
  ApMode ap_mode = ApMode::kPoints101;
  double confidence_cut = 0.25;  // P/R/F1 use predictions at or above it
};

struct ClassEval {
  int class_id = 0;
  std::int64_t truths = 0;
  std::int64_t predictions = 0;
  double ap50 = 0;
  double ap50_95 = 0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

struct EvalReport {
  std::vector<ClassEval> per_class;  // ascending class id
  double map50 = 0;                  // mean AP@0.5 over classes with truths
  double map50_95 = 0;               // mean over IoU 0.50, 0.55, ..., 0.95 of mAP
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
};

// mAP over classes with at least one truth at one IoU threshold.
double mean_average_precision(std::span<const Detection> preds,
                              std::span<const GroundTruthBox> truths, double iou_threshold,
                              ApMode mode);

EvalReport evaluate(std::span<const Detection> preds, std::span<const GroundTruthBox> truths,
                    const EvalConfig& config = {});

// "class cx cy w h conf" per line.
std::vector<Detection> read_predictions(std::istream& in, FrameId frame_id, int width, int height);
std::vector<Detection> read_prediction_file(const std::filesystem::path& path, FrameId frame_id,
                                            int width, int height);
void write_predictions(std::ostream& out, const std::vector<Detection>& dets, int width,
                       int height);

// scope,class_id,truths,predictions,ap50,ap50_95,tp,fp,fn,precision,recall,f1
void write_eval_csv(std::ostream& out, const EvalReport& report);
void print_eval_table(std::ostream& out, const EvalReport& report);

}  // namespace adacq

#endif  // ADACQ_EVALUATION_HPP_
