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

#include <string>
#include <string_view>
#include <vector>

#include "yolos/netdef.hpp"
#include "yolos/tensor.hpp"

namespace yolos {

// Axis-aligned, pixel coordinates; valid when x_max > x_min and y_max > y_min.
struct Box {
  double x_min = 0;
  double y_min = 0;
  double x_max = 0;
  double y_max = 0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  bool valid() const { return x_max > x_min && y_max > y_min; }
  friend bool operator==(const Box&, const Box&) = default;
};

struct Detection {
  Box box;
  int class_id = 0;
  double confidence = 0;  // [0, 1]
  friend bool operator==(const Detection&, const Detection&) = default;
};

double iou(const Box& a, const Box& b);

struct DecodeParams {
  std::vector<Anchor> anchors;  // network-input pixels, one per box slot
  int stride = 8;
  double conf_threshold = 0.25;
  int class_count = 1;
};

// YOLOv3 decode. Channel b*(5+C)+j of `raw` holds, for box slot b:
// j=0..3 tx ty tw th, j=4 objectness, j=5.. class logits.
//   center = (cell + sigmoid(t_xy)) * stride, size = anchor * exp(t_wh),
//   confidence = sigmoid(obj) * max_c sigmoid(class_c).
// One detection per (cell, slot), emitted iff confidence >= threshold.
std::vector<Detection> decode_head(const Tensor& raw, const DecodeParams& params);

struct NmsOptions {
  double iou_threshold = 0.45;
  bool class_agnostic = false;
};

// Greedy suppression: visit by confidence descending (ties: class_id, then
// input position); keep a detection iff its IoU with every kept detection
// of the same class is below the threshold. Output is in visit order.
std::vector<Detection> nms(const std::vector<Detection>& dets, const NmsOptions& options = {});

// One detection per line: `class_id confidence x_min y_min x_max y_max`,
// numbers printed with enough digits to re-parse exactly.
std::string detections_to_text(const std::vector<Detection>& dets);
std::vector<Detection> detections_from_text(std::string_view text);

// [{"class_id":0,"confidence":0.9,"x_min":..,"y_min":..,"x_max":..,"y_max":..}, ...]
std::string detections_to_json(const std::vector<Detection>& dets);
std::vector<Detection> detections_from_json(std::string_view text);

}  // namespace yolos
