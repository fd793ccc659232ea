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

#include <functional>
#include <vector>

#include "yolos/engine.hpp"
#include "yolos/netdef.hpp"
#include "yolos/postproc.hpp"
#include "yolos/tensor.hpp"

namespace yolos {

struct TileRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
  friend bool operator==(const TileRect&, const TileRect&) = default;
};

struct TilePlan {
  int image_width = 0;
  int image_height = 0;
  int nx = 1;
  int ny = 1;
  int overlap_x = 0;
  int overlap_y = 0;
  int tile_width = 0;   // ceil((W + (Nx - 1) * ox) / Nx)
  int tile_height = 0;  // ceil((H + (Ny - 1) * oy) / Ny)
  std::vector<TileRect> tiles;  // row-major

  int step_x() const { return tile_width - overlap_x; }
  int step_y() const { return tile_height - overlap_y; }

  // Bands shared by neighbouring windows: full-height strips between
  // columns and full-width strips between rows.
  std::vector<Box> overlap_regions() const;
};

// Windows start at multiples of the step; the last one per axis is clamped
// so it ends on the image edge. Throws Error(invalid_argument) when a count
// is < 1, an overlap is negative, or an overlap reaches the tile size.
TilePlan plan_tiles(int width, int height, int nx, int ny, int overlap_x, int overlap_y);

Tensor crop(const Tensor& image, const TileRect& rect);

// Aspect-preserving fit of a source image into the network input, centered,
// with black padding.
struct Letterbox {
  int source_width = 0;
  int source_height = 0;
  int resized_width = 0;
  int resized_height = 0;
  int pad_x = 0;
  int pad_y = 0;

  static Letterbox fit(int source_width, int source_height, int net_width, int net_height);
  Box to_source(const Box& net_box) const;
  Box to_network(const Box& source_box) const;
};

// Bilinear resample into a zero-filled net_width x net_height canvas.
Tensor letterbox(const Tensor& image, const Letterbox& geometry, int net_width, int net_height);

Box clip_box(const Box& box, int width, int height);

struct PostprocConfig {
  double conf_threshold = 0.25;
  NmsOptions nms;
  int threads = 1;
};

// Maps an image (any size) to detections in that image's pixel coordinates.
using ImageDetector = std::function<std::vector<Detection>(const Tensor& image)>;

// Letterbox, forward, decode every head, NMS, map back and clip.
std::vector<Detection> detect(const Tensor& image, const NetworkGraph& graph,
                              const WeightSet& weights, const PostprocConfig& config);

// Shifts per-tile detections (tile-local pixels) to image coordinates and
// suppresses duplicates among those touching an overlap band. Detections
// clear of every band pass through unchanged.
std::vector<Detection> recombine(const TilePlan& plan,
                                 const std::vector<std::vector<Detection>>& per_tile,
                                 const NmsOptions& nms);

std::vector<Detection> detect_tiled(const Tensor& image, const TilePlan& plan,
                                    const ImageDetector& detector, const PostprocConfig& config);
std::vector<Detection> detect_tiled(const Tensor& image, const TilePlan& plan,
                                    const NetworkGraph& graph, const WeightSet& weights,
                                    const PostprocConfig& config);

}  // namespace yolos
