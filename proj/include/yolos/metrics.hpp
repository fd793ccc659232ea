/* Copyright 2026 The yolos Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "yolos/postproc.hpp"

namespace yolos {

struct GroundTruth {
  Box box;
  int class_id = 0;
  std::string image_id;
  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

enum class SizeBucket { small, medium, large };

const char* to_string(SizeBucket bucket);

// Pixel area: small < 32^2 <= medium < 96^2 <= large.
SizeBucket size_bucket(const Box& box);
inline SizeBucket size_bucket(const GroundTruth& gt) { return size_bucket(gt.box); }

struct MatchResult {
  std::vector<int> det_to_gt;     // matched gt index, or -1 (false positive)
  std::vector<bool> gt_matched;

  bool is_tp(std::size_t det) const { return det_to_gt[det] >= 0; }
};

// One image. Per class, detections are visited by confidence descending
// (ties by input position); each takes the unmatched same-class gt of
// highest IoU when that IoU reaches the threshold (ties: lower gt index).
MatchResult match(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                  double iou_threshold);

struct ScoredFlag {
  double confidence = 0;
  bool tp = false;
};

enum class ApMode { all_point, eleven_point };

// Area under the precision/recall curve of `flags` ranked by confidence
// descending (stable for ties). all_point integrates the monotone envelope;
// eleven_point averages the envelope at recall 0, 0.1, ..., 1.
// Throws Error(invalid_argument) for positives < 1.
double average_precision(std::vector<ScoredFlag> flags, int positives,
                         ApMode mode = ApMode::all_point);

struct Aggregate {
  double map = 0;
  double wap = 0;
};

// mAP = mean of aps; wAP = sum(N_i * AP_i) / sum(N_i). Works in whatever
// unit the aps are given in.
Aggregate aggregate(const std::vector<double>& aps, const std::vector<double>& supports);

struct MicroMetrics {
  std::optional<double> recall;     // absent when there are no positives
  std::optional<double> precision;  // absent when nothing was detected
  std::optional<double> f1;
  friend bool operator==(const MicroMetrics&, const MicroMetrics&) = default;
};

double f1_score(double recall, double precision);
MicroMetrics micro_metrics(long tp, long fp, long positives);

struct EvalImage {
  std::string id;
  std::vector<Detection> detections;
  std::vector<GroundTruth> truths;
};

// Mean over IoU 0.50:0.05:0.95 of the mean per-class AP, counting only gts
// in `bucket` (all gts when unset). Out-of-bucket gts are ignored:
// detections they absorb and unmatched detections outside the bucket are
// dropped. Absent when no gt falls in the bucket.
std::optional<double> coco_ap(const std::vector<EvalImage>& images,
                              std::optional<SizeBucket> bucket = std::nullopt,
                              ApMode mode = ApMode::all_point);

struct EvalOptions {
  double iou_threshold = 0.5;
  double conf_threshold = 0.25;  // operating point of the micro metrics
  ApMode ap_mode = ApMode::all_point;
  std::vector<std::string> class_names;
  friend bool operator==(const EvalOptions&, const EvalOptions&) = default;
};

struct ClassResult {
  int class_id = 0;
  std::string name;
  long support = 0;
  std::optional<double> ap;  // absent when support is 0
  long tp = 0;               // at the operating point
  long fp = 0;
  friend bool operator==(const ClassResult&, const ClassResult&) = default;
};

struct PrPoint {
  double confidence = 0;
  double recall = 0;
  double precision = 0;
  friend bool operator==(const PrPoint&, const PrPoint&) = default;
};

// Fractions in [0, 1]; the text table prints them x100.
struct EvalReport {
  EvalOptions options;
  std::vector<ClassResult> classes;
  std::optional<double> map;
  std::optional<double> wap;
  std::optional<double> ap_coco;
  std::optional<double> ap_small;
  std::optional<double> ap_medium;
  std::optional<double> ap_large;
  long tp = 0;
  long fp = 0;
  long positives = 0;
  MicroMetrics micro;
  std::vector<PrPoint> pr_curve;  // all classes pooled, one point per detection
  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

EvalReport evaluate(const std::vector<EvalImage>& images, const EvalOptions& options = {});

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(std::string_view text);
// Rows: per-class AP, mAP, wAP, AP_S, AP_M, AP_L, REC_ma, PREC_ma, F1_ma;
// absent values print as "-".
std::string report_to_table(const EvalReport& report);

}  // namespace yolos
