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
#include <filesystem>
#include <optional>
#include <vector>

#include "yolos/netdef.hpp"
#include "yolos/tensor.hpp"

namespace yolos {

inline constexpr float kBatchNormEpsilon = 1e-5f;
inline constexpr float kLeakySlope = 0.1f;

// Parameters of one conv layer. With batch norm, `biases` holds the shift
// (beta) and scales/mean/variance are filled; without, only `biases`.
struct ConvWeights {
  std::vector<float> biases;
  std::vector<float> scales;
  std::vector<float> rolling_mean;
  std::vector<float> rolling_variance;
  std::vector<float> kernel;  // [Cout][Cin][k][k]

  std::size_t count() const {
    return biases.size() + scales.size() + rolling_mean.size() + rolling_variance.size() +
           kernel.size();
  }
  friend bool operator==(const ConvWeights&, const ConvWeights&) = default;
};

struct WeightSet {
  std::int32_t major = 1;
  std::int32_t minor = 0;
  std::int32_t revision = 0;
  std::int32_t seen = 0;
  // Indexed by layer; engaged exactly for conv layers.
  std::vector<std::optional<ConvWeights>> layers;

  static WeightSet zeros(const NetworkGraph& graph);
  // Fan-in scaled uniform kernels, identity batch norm. Deterministic in seed.
  static WeightSet random(const NetworkGraph& graph, std::uint64_t seed);

  friend bool operator==(const WeightSet&, const WeightSet&) = default;
};

// Throws Error(shape) when any conv's element counts disagree with
// count_params for that layer.
void check_weights(const NetworkGraph& graph, const WeightSet& weights);

// Binary weight file, little-endian:
//   int32 magic (0x534C4F59, "YOLS"), int32 major, int32 minor,
//   int32 revision, int32 seen;
//   then for each conv layer in index order, float32 blocks:
//     with BN:    beta[Cout] gamma[Cout] mean[Cout] variance[Cout] kernel[...]
//     without BN: bias[Cout] kernel[...]
// kernel is [Cout][Cin][k][k] row-major. The file must end after the last
// block.
inline constexpr std::int32_t kWeightsMagic = 0x534C4F59;

void write_weights(const std::filesystem::path& path, const NetworkGraph& graph,
                   const WeightSet& weights);
// Text variant for fixtures: "yolos-weights 1" then the same float sequence,
// whitespace separated; '#' starts a comment.
void write_weights_text(const std::filesystem::path& path, const NetworkGraph& graph,
                        const WeightSet& weights);
// Detects binary vs text by the leading bytes.
WeightSet read_weights(const std::filesystem::path& path, const NetworkGraph& graph);

// Same-padding cross-correlation, then batch norm (if enabled) and
// activation. `in` must have the channel count the weights were built for.
Tensor conv2d(const Tensor& in, const LayerSpec& layer, const ConvWeights& weights,
              int threads = 1);

// (w, h, d) -> (w/2, h/2, 4d). Output channel 4c + 2*dy + dx holds input
// channel c sampled at rows 2y+dy, cols 2x+dx (phases in row-major order).
Tensor reshape_passthrough(const Tensor& in);

// Nearest-neighbour 2x: (w, h, d) -> (2w, 2h, d).
Tensor upsample2x(const Tensor& in);

// Window [y*s, y*s+k) x [x*s, x*s+k), cells past the edge ignored.
Tensor maxpool(const Tensor& in, int kernel, int stride);

struct ForwardOptions {
  int threads = 1;
};

// Runs every layer in index order and returns the raw tensor feeding each
// yolo head, in head order. Bitwise deterministic for any thread count.
std::vector<Tensor> forward(const NetworkGraph& graph, const WeightSet& weights,
                            const Tensor& image, const ForwardOptions& options = {});

}  // namespace yolos
