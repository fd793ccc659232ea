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
#include <string>
#include <vector>

#include "yolos/netdef.hpp"

namespace yolos {

struct LayerAnalysis {
  Shape in_shape;   // first input (concat result for routes)
  Shape out_shape;
  std::int64_t cumulative_stride = 1;
  std::int64_t receptive_field = 1;
  std::int64_t params = 0;
  std::int64_t flops = 0;  // 2 per multiply-accumulate
};

struct GraphAnalysis {
  std::vector<LayerAnalysis> layers;
  std::int64_t total_params = 0;
  std::int64_t total_flops = 0;

  double bflops() const { return static_cast<double>(total_flops) * 1e-9; }
};

// Same-padding convs: out = ceil(in / stride). Throws Error(shape) on odd
// input to a reshape-passthrough, spatial mismatch at a concat, or channel
// mismatch at a residual add.
std::vector<Shape> infer_shapes(const NetworkGraph& graph);
std::vector<Shape> infer_shapes(const NetworkGraph& graph, const Shape& input);

struct FieldStride {
  std::int64_t receptive_field = 1;
  std::int64_t cumulative_stride = 1;
  friend bool operator==(const FieldStride&, const FieldStride&) = default;
};

// RF_k = RF_{k-1} + (f_k - 1) * CS_{k-1}, CS_k = CS_{k-1} * s_k.
// Upsample and reshape-passthrough leave both unchanged. A route inherits
// from the source that reaches the route's output grid without resampling
// (source CS equals input width / route width); if none does, from its last
// source.
std::vector<FieldStride> receptive_fields(const NetworkGraph& graph);

// k^2 * Cin * Cout weights, plus 4 * Cout batch-norm terms (scale, shift,
// mean, variance) or Cout biases.
std::int64_t conv_params(const LayerSpec& conv, int in_channels);

struct ParamCount {
  std::int64_t total = 0;
  std::vector<std::int64_t> per_layer;
};
ParamCount count_params(const NetworkGraph& graph);

// Billions of floating point ops: sum over convs of 2 k^2 Cin Cout Wout Hout.
double count_flops(const NetworkGraph& graph, const Shape& input);

GraphAnalysis analyze(const NetworkGraph& graph);
GraphAnalysis analyze(const NetworkGraph& graph, const Shape& input);

enum class ReportFormat { text, csv };

// Columns: #, Type, F, S/S, Input, Output, CS, RF, Params, FLOPs.
std::string format_report(const NetworkGraph& graph, const GraphAnalysis& analysis,
                          ReportFormat format);

}  // namespace yolos
