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

// Built-in network definitions.
//
// yolo_s and yolo_l follow the reference layer tables row for row, so layer
// indices here are the table's row numbers. Residual shortcuts are folded
// into the 3x3 conv of each pair (`residual_partner`) rather than occupying a
// row of their own. The baselines (yolov3, tiny_yolov3, ju2019) use the same
// representation; their indices do not match darknet cfg numbering.

#include <algorithm>
#include <string>

#include "yolos/anchors.hpp"
#include "yolos/error.hpp"
#include "yolos/netdef.hpp"

namespace yolos {
namespace {

// COCO priors shipped with darknet, ascending area.
const std::vector<Anchor> kYolov3Anchors = {
    {10, 13}, {16, 30}, {33, 23}, {30, 61}, {62, 45},
    {59, 119}, {116, 90}, {156, 198}, {373, 326}};
const std::vector<Anchor> kTinyAnchors = {
    {10, 14}, {23, 27}, {37, 58}, {81, 82}, {135, 169}, {344, 319}};

class Builder {
 public:
  Builder(std::string name, int class_count)
      : class_count_(class_count) {
    graph_.name = std::move(name);
  }

  int conv(int filters, int kernel, int stride = 1) {
    return push(LayerSpec::conv(filters, kernel, stride));
  }

  // 1x1 squeeze to half width, 3x3 back to `filters`, shortcut from the
  // layer feeding the pair. Returns the index of the 3x3 conv.
  int residual(int filters) {
    const int input = last();
    conv(filters / 2, 1);
    LayerSpec expand = LayerSpec::conv(filters, 3);
    expand.residual_partner = input;
    return push(std::move(expand));
  }

  void residuals(int filters, int count) {
    for (int i = 0; i < count; ++i) residual(filters);
  }

  // Alternating 1x1 (`narrow`) / 3x3 (`wide`) convs, `pairs` times.
  void conv_set(int narrow, int wide, int pairs) {
    for (int i = 0; i < pairs; ++i) {
      conv(narrow, 1);
      conv(wide, 3);
    }
  }

  int route(std::vector<int> sources) { return push(LayerSpec::route(std::move(sources))); }
  int upsample() { return push(LayerSpec::upsample()); }
  int reshape() { return push(LayerSpec::reshape_passthrough()); }
  int maxpool(int kernel, int stride) { return push(LayerSpec::maxpool(kernel, stride)); }

  // Linear 1x1 projection to B(5+C) channels followed by the yolo row.
  int head(int boxes_per_cell) {
    push(LayerSpec::conv(boxes_per_cell * (5 + class_count_), 1, 1,
                         Activation::linear, false));
    const int at = push(LayerSpec::yolo_head());
    graph_.heads.push_back(HeadSpec{at, {}, class_count_, boxes_per_cell});
    return at;
  }

  int last() const { return static_cast<int>(graph_.layers.size()) - 1; }

  // Heads are listed in build order, which for every built-in is
  // coarsest-first (largest stride first).
  NetworkGraph finish(const std::vector<Anchor>& pool) && {
    const auto heads = graph_.heads.size();
    if (heads == 1) {
      auto& h = graph_.heads.front();
      const auto n = static_cast<std::size_t>(h.boxes_per_cell);
      h.anchors.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(std::min(n, pool.size())));
    } else {
      // One stride per head in build order; assign_anchors hands the
      // largest priors to the largest stride.
      std::vector<int> strides;
      for (std::size_t i = 0; i < heads; ++i) strides.push_back(static_cast<int>(heads - i));
      auto sets = assign_anchors(pool, strides);
      for (std::size_t i = 0; i < heads; ++i) graph_.heads[i].anchors = std::move(sets[i]);
    }
    return std::move(graph_);
  }

 private:
  int push(LayerSpec spec) {
    graph_.layers.push_back(std::move(spec));
    return last();
  }

  NetworkGraph graph_;
  int class_count_;
};

NetworkGraph yolo_s(int classes, int boxes) {
  Builder b("yolo_s", classes);
  b.conv(32, 3);         // 0
  b.conv(64, 3, 2);      // 1
  b.residual(64);        // 2-3
  b.conv(128, 3, 2);     // 4
  b.residuals(128, 2);   // 5-8
  b.conv(256, 3, 2);     // 9
  b.residuals(256, 2);   // 10-13
  b.conv(512, 3, 2);     // 14
  b.residuals(512, 2);   // 15-18
  b.conv(128, 1);        // 19
  b.upsample();          // 20
  b.route({8});          // 21
  b.reshape();           // 22
  b.route({22, 20, 13}); // 23
  b.conv_set(256, 512, 2);  // 24-27
  b.head(boxes);         // 28-29
  return std::move(b).finish(kYolov3Anchors);
}

NetworkGraph yolo_l(int classes) {
  Builder b("yolo_l", classes);
  b.conv(32, 3);         // 0
  b.conv(64, 3, 2);      // 1
  b.residual(64);        // 2-3
  b.conv(128, 3, 2);     // 4
  b.residuals(128, 2);   // 5-8
  b.conv(256, 3, 2);     // 9
  b.residuals(256, 8);   // 10-25
  b.conv(512, 3, 2);     // 26
  b.residuals(512, 8);   // 27-42
  b.conv_set(256, 512, 3);  // 43-48
  b.head(3);             // 49-50
  b.route({47});         // 51
  b.conv(128, 1);        // 52
  b.upsample();          // 53
  b.route({53, 25});     // 54
  b.conv_set(256, 512, 3);  // 55-60
  b.head(3);             // 61-62
  b.route({59});         // 63
  b.conv(128, 1);        // 64
  b.upsample();          // 65
  b.route({65, 8});      // 66
  b.conv_set(128, 256, 3);  // 67-72
  b.head(3);             // 73-74
  return std::move(b).finish(kYolov3Anchors);
}

NetworkGraph yolov3(int classes) {
  Builder b("yolov3", classes);
  b.conv(32, 3);
  b.conv(64, 3, 2);
  b.residual(64);
  b.conv(128, 3, 2);
  b.residuals(128, 2);
  b.conv(256, 3, 2);
  b.residuals(256, 8);
  const int c3 = b.last();
  b.conv(512, 3, 2);
  b.residuals(512, 8);
  const int c4 = b.last();
  b.conv(1024, 3, 2);
  b.residuals(1024, 4);

  b.conv_set(512, 1024, 2);
  const int lateral13 = b.conv(512, 1);
  b.conv(1024, 3);
  b.head(3);

  b.route({lateral13});
  b.conv(256, 1);
  const int up26 = b.upsample();
  b.route({up26, c4});
  b.conv_set(256, 512, 2);
  const int lateral26 = b.conv(256, 1);
  b.conv(512, 3);
  b.head(3);

  b.route({lateral26});
  b.conv(128, 1);
  const int up52 = b.upsample();
  b.route({up52, c3});
  b.conv_set(128, 256, 3);
  b.head(3);
  return std::move(b).finish(kYolov3Anchors);
}

NetworkGraph tiny_yolov3(int classes) {
  Builder b("tiny_yolov3", classes);
  b.conv(16, 3);
  b.maxpool(2, 2);
  b.conv(32, 3);
  b.maxpool(2, 2);
  b.conv(64, 3);
  b.maxpool(2, 2);
  b.conv(128, 3);
  b.maxpool(2, 2);
  const int c8 = b.conv(256, 3);
  b.maxpool(2, 2);
  b.conv(512, 3);
  b.maxpool(2, 1);
  b.conv(1024, 3);
  const int lateral = b.conv(256, 1);
  b.conv(512, 3);
  b.head(3);
  b.route({lateral});
  b.conv(128, 1);
  const int up = b.upsample();
  b.route({up, c8});
  b.conv(256, 3);
  b.head(3);
  return std::move(b).finish(kTinyAnchors);
}

// Reconstruction of the small-target net of Ju et al. (2019): 31 convs, one
// reshape-passthrough fusing the 4x-downsampled map into the 8x stage, a 1x1
// reduction after the concat, single 8x head. The original publication gives
// no layer table; widths were fitted to the reported size, cost and output
// receptive field at 416x416.
NetworkGraph ju2019(int classes, int boxes) {
  Builder b("ju2019", classes);
  b.conv(16, 3);
  b.conv(16, 3, 2);
  b.residuals(16, 3);
  b.conv(64, 3, 2);
  b.residuals(64, 7);
  const int fine = b.last();
  b.conv(144, 3, 2);
  b.residuals(144, 2);
  const int deep = b.last();
  b.route({fine});
  const int pass = b.reshape();
  b.route({pass, deep});
  b.conv(128, 1);
  b.conv(128, 3);
  b.head(boxes);
  return std::move(b).finish(kYolov3Anchors);
}

}  // namespace

NetworkGraph build_builtin(BuiltinNet net, int class_count, HeadConfig head) {
  if (class_count < 1) fail(ErrorKind::invalid_argument, "class_count must be >= 1");
  const int boxes = head.boxes_per_cell;
  const bool single_head = net == BuiltinNet::yolo_s || net == BuiltinNet::ju2019;
  if (single_head) {
    if (boxes < 1 || boxes > static_cast<int>(kYolov3Anchors.size()))
      fail(ErrorKind::invalid_argument, "boxes_per_cell must be in [1, 9]");
  } else if (boxes != 3) {
    fail(ErrorKind::invalid_argument,
         std::string(to_string(net)) + " has multiple heads; boxes_per_cell must be 3");
  }
  switch (net) {
    case BuiltinNet::yolo_s: return yolo_s(class_count, boxes);
    case BuiltinNet::yolo_l: return yolo_l(class_count);
    case BuiltinNet::yolov3: return yolov3(class_count);
    case BuiltinNet::tiny_yolov3: return tiny_yolov3(class_count);
    case BuiltinNet::ju2019: return ju2019(class_count, boxes);
  }
  fail(ErrorKind::invalid_argument, "unknown network");
}

NetworkGraph build_builtin(std::string_view name, int class_count, HeadConfig head) {
  const auto net = parse_builtin(name);
  if (!net) fail(ErrorKind::invalid_argument, "unknown network '" + std::string(name) + "'");
  return build_builtin(*net, class_count, head);
}

}  // namespace yolos
