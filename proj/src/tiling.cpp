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

#include "yolos/tiling.hpp"

#include <algorithm>
#include <cmath>

#include "yolos/error.hpp"
#include "yolos/parallel.hpp"

namespace yolos {
namespace {

struct Axis {
  int tile = 0;
  std::vector<int> offsets;
};

Axis plan_axis(int length, int count, int overlap, const char* name) {
  if (length < 1) fail(ErrorKind::invalid_argument, std::string("image ") + name + " must be positive");
  if (count < 1) fail(ErrorKind::invalid_argument, std::string("tile count along ") + name + " must be >= 1");
  if (overlap < 0) fail(ErrorKind::invalid_argument, std::string("overlap along ") + name + " must be >= 0");
  const long long span = static_cast<long long>(length) + static_cast<long long>(count - 1) * overlap;
  Axis a;
  a.tile = static_cast<int>((span + count - 1) / count);
  if (overlap >= a.tile)
    fail(ErrorKind::invalid_argument, std::string("overlap along ") + name + " (" + std::to_string(overlap) +
                                          ") must be smaller than the tile size (" + std::to_string(a.tile) + ")");
  const int step = a.tile - overlap;
  for (int i = 0; i < count; ++i) a.offsets.push_back(std::min(i * step, length - a.tile));
  return a;
}

bool intersects(const Box& a, const Box& b) {
  return a.x_min < b.x_max && b.x_min < a.x_max && a.y_min < b.y_max && b.y_min < a.y_max;
}

float sample(const std::span<const float> plane, int w, int h, double x, double y) {
  x = std::clamp(x, 0.0, static_cast<double>(w - 1));
  y = std::clamp(y, 0.0, static_cast<double>(h - 1));
  const int x0 = static_cast<int>(x), y0 = static_cast<int>(y);
  const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
  const double fx = x - x0, fy = y - y0;
  auto at = [&](int yy, int xx) {
    return static_cast<double>(plane[static_cast<std::size_t>(yy) * static_cast<std::size_t>(w) +
                                     static_cast<std::size_t>(xx)]);
  };
  const double top = at(y0, x0) + (at(y0, x1) - at(y0, x0)) * fx;
  const double bottom = at(y1, x0) + (at(y1, x1) - at(y1, x0)) * fx;
  return static_cast<float>(top + (bottom - top) * fy);
}

}  // namespace

TilePlan plan_tiles(int width, int height, int nx, int ny, int overlap_x, int overlap_y) {
  const Axis ax = plan_axis(width, nx, overlap_x, "width");
  const Axis ay = plan_axis(height, ny, overlap_y, "height");
  TilePlan p{width, height, nx, ny, overlap_x, overlap_y, ax.tile, ay.tile, {}};
  for (int y : ay.offsets)
    for (int x : ax.offsets) p.tiles.push_back({x, y, ax.tile, ay.tile});
  return p;
}

std::vector<Box> TilePlan::overlap_regions() const {
  std::vector<Box> bands;
  const double w = image_width, h = image_height;
  for (int i = 0; i + 1 < nx; ++i) {
    const double a = tiles[static_cast<std::size_t>(i + 1)].x;
    const double b = tiles[static_cast<std::size_t>(i)].x + tile_width;
    if (b > a) bands.push_back({a, 0, b, h});
  }
  for (int j = 0; j + 1 < ny; ++j) {
    const double a = tiles[static_cast<std::size_t>((j + 1) * nx)].y;
    const double b = tiles[static_cast<std::size_t>(j * nx)].y + tile_height;
    if (b > a) bands.push_back({0, a, w, b});
  }
  return bands;
}

Tensor crop(const Tensor& image, const TileRect& r) {
  if (r.x < 0 || r.y < 0 || r.width < 1 || r.height < 1 || r.x + r.width > image.width() ||
      r.y + r.height > image.height())
    fail(ErrorKind::shape, "tile outside the image");
  Tensor out(Shape{r.width, r.height, image.channels()});
  for (int c = 0; c < image.channels(); ++c)
    for (int y = 0; y < r.height; ++y) {
      const auto src = image.plane(c).subspan(
          static_cast<std::size_t>(r.y + y) * static_cast<std::size_t>(image.width()) + static_cast<std::size_t>(r.x),
          static_cast<std::size_t>(r.width));
      std::copy(src.begin(), src.end(), out.plane(c).begin() + static_cast<std::ptrdiff_t>(y) * r.width);
    }
  return out;
}

Letterbox Letterbox::fit(int source_width, int source_height, int net_width, int net_height) {
  if (source_width < 1 || source_height < 1 || net_width < 1 || net_height < 1)
    fail(ErrorKind::invalid_argument, "letterbox sizes must be positive");
  const double scale = std::min(static_cast<double>(net_width) / source_width,
                                static_cast<double>(net_height) / source_height);
  Letterbox lb;
  lb.source_width = source_width;
  lb.source_height = source_height;
  lb.resized_width = std::clamp(static_cast<int>(std::lround(source_width * scale)), 1, net_width);
  lb.resized_height = std::clamp(static_cast<int>(std::lround(source_height * scale)), 1, net_height);
  lb.pad_x = (net_width - lb.resized_width) / 2;
  lb.pad_y = (net_height - lb.resized_height) / 2;
  return lb;
}

Box Letterbox::to_source(const Box& b) const {
  const double sx = static_cast<double>(source_width) / resized_width;
  const double sy = static_cast<double>(source_height) / resized_height;
  return {(b.x_min - pad_x) * sx, (b.y_min - pad_y) * sy, (b.x_max - pad_x) * sx, (b.y_max - pad_y) * sy};
}

Box Letterbox::to_network(const Box& b) const {
  const double sx = static_cast<double>(resized_width) / source_width;
  const double sy = static_cast<double>(resized_height) / source_height;
  return {b.x_min * sx + pad_x, b.y_min * sy + pad_y, b.x_max * sx + pad_x, b.y_max * sy + pad_y};
}

Tensor letterbox(const Tensor& image, const Letterbox& g, int net_width, int net_height) {
  if (image.width() != g.source_width || image.height() != g.source_height)
    fail(ErrorKind::shape, "letterbox geometry does not match the image");
  Tensor out(Shape{net_width, net_height, image.channels()});
  const double sx = static_cast<double>(g.source_width) / g.resized_width;
  const double sy = static_cast<double>(g.source_height) / g.resized_height;
  for (int c = 0; c < image.channels(); ++c) {
    const auto src = image.plane(c);
    for (int y = 0; y < g.resized_height; ++y) {
      const double fy = (y + 0.5) * sy - 0.5;
      for (int x = 0; x < g.resized_width; ++x)
        out.at(c, y + g.pad_y, x + g.pad_x) = sample(src, image.width(), image.height(), (x + 0.5) * sx - 0.5, fy);
    }
  }
  return out;
}

Box clip_box(const Box& b, int width, int height) {
  const double w = width, h = height;
  return {std::clamp(b.x_min, 0.0, w), std::clamp(b.y_min, 0.0, h), std::clamp(b.x_max, 0.0, w),
          std::clamp(b.y_max, 0.0, h)};
}

std::vector<Detection> detect(const Tensor& image, const NetworkGraph& graph, const WeightSet& weights,
                              const PostprocConfig& config) {
  const Shape in = graph.input_shape;
  if (image.channels() != in.channels)
    fail(ErrorKind::shape, "image has " + std::to_string(image.channels()) + " channels, network expects " +
                               std::to_string(in.channels));
  const Letterbox g = Letterbox::fit(image.width(), image.height(), in.width, in.height);
  const Tensor boxed = letterbox(image, g, in.width, in.height);
  const auto raw = forward(graph, weights, boxed, {config.threads});
  std::vector<Detection> dets;
  for (std::size_t h = 0; h < raw.size(); ++h) {
    const HeadSpec& head = graph.heads[h];
    DecodeParams p{head.anchors, in.width / raw[h].width(), config.conf_threshold, head.class_count};
    auto part = decode_head(raw[h], p);
    dets.insert(dets.end(), part.begin(), part.end());
  }
  std::vector<Detection> out;
  for (auto d : nms(dets, config.nms)) {
    d.box = clip_box(g.to_source(d.box), image.width(), image.height());
    if (d.box.valid()) out.push_back(d);
  }
  return out;
}

std::vector<Detection> recombine(const TilePlan& plan, const std::vector<std::vector<Detection>>& per_tile,
                                 const NmsOptions& nms_options) {
  if (per_tile.size() != plan.tiles.size())
    fail(ErrorKind::invalid_argument, "one detection list per tile is required");
  const auto bands = plan.overlap_regions();
  std::vector<Detection> kept, contested;
  for (std::size_t t = 0; t < per_tile.size(); ++t) {
    const auto& r = plan.tiles[t];
    for (auto d : per_tile[t]) {
      d.box = clip_box({d.box.x_min + r.x, d.box.y_min + r.y, d.box.x_max + r.x, d.box.y_max + r.y},
                       plan.image_width, plan.image_height);
      if (!d.box.valid()) continue;
      const bool in_band = std::any_of(bands.begin(), bands.end(), [&](const Box& b) { return intersects(d.box, b); });
      (in_band ? contested : kept).push_back(d);
    }
  }
  for (const auto& d : nms(contested, nms_options)) kept.push_back(d);
  return kept;
}

std::vector<Detection> detect_tiled(const Tensor& image, const TilePlan& plan, const ImageDetector& detector,
                                    const PostprocConfig& config) {
  if (image.width() != plan.image_width || image.height() != plan.image_height)
    fail(ErrorKind::shape, "tile plan is for " + std::to_string(plan.image_width) + "x" +
                               std::to_string(plan.image_height) + ", image is " + std::to_string(image.width()) +
                               "x" + std::to_string(image.height()));
  std::vector<std::vector<Detection>> per_tile(plan.tiles.size());
  parallel_for(plan.tiles.size(), config.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) per_tile[t] = detector(crop(image, plan.tiles[t]));
  });
  return recombine(plan, per_tile, config.nms);
}

std::vector<Detection> detect_tiled(const Tensor& image, const TilePlan& plan, const NetworkGraph& graph,
                                    const WeightSet& weights, const PostprocConfig& config) {
  // Parallelism goes to tiles when there are several, else inside the layer.
  PostprocConfig inner = config;
  PostprocConfig outer = config;
  if (plan.tiles.size() > 1) inner.threads = 1;
  else outer.threads = 1;
  return detect_tiled(image, plan, [&](const Tensor& tile) { return detect(tile, graph, weights, inner); }, outer);
}

}  // namespace yolos
