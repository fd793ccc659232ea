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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace yolos {

enum class LayerKind { conv, upsample, route, reshape_passthrough, yolo_head, maxpool };
enum class Activation { leaky, linear };

std::string_view to_string(LayerKind kind);
std::optional<LayerKind> parse_layer_kind(std::string_view s);

struct Shape {
  int width = 0;
  int height = 0;
  int channels = 0;

  std::int64_t size() const {
    return static_cast<std::int64_t>(width) * height * channels;
  }
  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);  // "52x52x255"

struct Anchor {
  double w = 0;
  double h = 0;
  friend bool operator==(const Anchor&, const Anchor&) = default;
};

// One row of a network definition. Fields irrelevant to `kind` keep their
// defaults; `validate` reports any that are set anyway.
struct LayerSpec {
  LayerKind kind = LayerKind::conv;
  int filters = 0;  // conv only
  int kernel = 1;   // conv, maxpool
  int stride = 1;   // conv, maxpool
  Activation activation = Activation::linear;
  bool batch_norm = false;
  std::vector<int> route_sources;        // route only, absolute indices
  std::optional<int> residual_partner;   // conv only: output += out[partner]

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;

  static LayerSpec conv(int filters, int kernel, int stride = 1,
                        Activation act = Activation::leaky, bool bn = true);
  static LayerSpec route(std::vector<int> sources);
  static LayerSpec upsample();
  static LayerSpec reshape_passthrough();
  static LayerSpec maxpool(int kernel, int stride);
  static LayerSpec yolo_head();
};

// Detection head bound to a yolo_head layer. The preceding conv emits
// boxes_per_cell * (5 + class_count) channels.
struct HeadSpec {
  int layer = 0;
  std::vector<Anchor> anchors;
  int class_count = 0;
  int boxes_per_cell = 0;

  int channels() const { return boxes_per_cell * (5 + class_count); }
  friend bool operator==(const HeadSpec&, const HeadSpec&) = default;
};

// Immutable once built; share read-only across threads.
struct NetworkGraph {
  std::string name;
  Shape input_shape{416, 416, 3};
  std::vector<LayerSpec> layers;
  std::vector<HeadSpec> heads;

  const HeadSpec* head_at(int layer) const;
  friend bool operator==(const NetworkGraph&, const NetworkGraph&) = default;
};

enum class BuiltinNet { yolo_s, yolo_l, yolov3, tiny_yolov3, ju2019 };

std::string_view to_string(BuiltinNet net);
std::optional<BuiltinNet> parse_builtin(std::string_view name);
const std::vector<BuiltinNet>& all_builtins();

struct HeadConfig {
  // Predictions per grid cell. 3 reproduces the 255-channel heads of the
  // reference tables at 80 classes; 6 attaches all six priors of the
  // single-scale nets to their one head.
  int boxes_per_cell = 3;
};

NetworkGraph build_builtin(BuiltinNet net, int class_count, HeadConfig head = {});
// Throws Error(invalid_argument) for unknown names or class_count < 1.
NetworkGraph build_builtin(std::string_view name, int class_count, HeadConfig head = {});

// Empty iff the graph is structurally sound and shape propagation succeeds.
std::vector<std::string> validate(const NetworkGraph& graph);

// Textual format, one layer per line: `index kind key=value...`.
// See docs in README ("Network definition format").
std::string to_text(const NetworkGraph& graph);
NetworkGraph parse_text(std::string_view text);

}  // namespace yolos
