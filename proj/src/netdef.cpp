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

#include "yolos/netdef.hpp"

#include <array>
#include <string>

#include "yolos/analysis.hpp"
#include "yolos/error.hpp"

namespace yolos {
namespace {

constexpr std::array<std::pair<LayerKind, std::string_view>, 6> kKindNames = {{
    {LayerKind::conv, "conv"},
    {LayerKind::upsample, "upsample"},
    {LayerKind::route, "route"},
    {LayerKind::reshape_passthrough, "reshape"},
    {LayerKind::yolo_head, "yolo"},
    {LayerKind::maxpool, "maxpool"},
}};

constexpr std::array<std::pair<BuiltinNet, std::string_view>, 5> kNetNames = {{
    {BuiltinNet::yolo_s, "yolo_s"},
    {BuiltinNet::yolo_l, "yolo_l"},
    {BuiltinNet::yolov3, "yolov3"},
    {BuiltinNet::tiny_yolov3, "tiny_yolov3"},
    {BuiltinNet::ju2019, "ju2019"},
}};

std::string at(int index) { return "layer " + std::to_string(index) + ": "; }

}  // namespace

std::string_view to_string(LayerKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "?";
}

std::optional<LayerKind> parse_layer_kind(std::string_view s) {
  for (const auto& [k, name] : kKindNames)
    if (name == s) return k;
  return std::nullopt;
}

std::string_view to_string(BuiltinNet net) {
  for (const auto& [n, name] : kNetNames)
    if (n == net) return name;
  return "?";
}

std::optional<BuiltinNet> parse_builtin(std::string_view name) {
  for (const auto& [n, s] : kNetNames)
    if (s == name) return n;
  return std::nullopt;
}

const std::vector<BuiltinNet>& all_builtins() {
  static const std::vector<BuiltinNet> nets = {BuiltinNet::yolov3, BuiltinNet::tiny_yolov3,
                                               BuiltinNet::ju2019, BuiltinNet::yolo_l,
                                               BuiltinNet::yolo_s};
  return nets;
}

std::string to_string(const Shape& s) {
  return std::to_string(s.width) + "x" + std::to_string(s.height) + "x" +
         std::to_string(s.channels);
}

LayerSpec LayerSpec::conv(int filters, int kernel, int stride, Activation act, bool bn) {
  LayerSpec l;
  l.kind = LayerKind::conv;
  l.filters = filters;
  l.kernel = kernel;
  l.stride = stride;
  l.activation = act;
  l.batch_norm = bn;
  return l;
}

LayerSpec LayerSpec::route(std::vector<int> sources) {
  LayerSpec l;
  l.kind = LayerKind::route;
  l.route_sources = std::move(sources);
  return l;
}

LayerSpec LayerSpec::upsample() {
  LayerSpec l;
  l.kind = LayerKind::upsample;
  l.stride = 2;
  return l;
}

LayerSpec LayerSpec::reshape_passthrough() {
  LayerSpec l;
  l.kind = LayerKind::reshape_passthrough;
  return l;
}

LayerSpec LayerSpec::maxpool(int kernel, int stride) {
  LayerSpec l;
  l.kind = LayerKind::maxpool;
  l.kernel = kernel;
  l.stride = stride;
  return l;
}

LayerSpec LayerSpec::yolo_head() {
  LayerSpec l;
  l.kind = LayerKind::yolo_head;
  return l;
}

const HeadSpec* NetworkGraph::head_at(int layer) const {
  for (const auto& h : heads)
    if (h.layer == layer) return &h;
  return nullptr;
}

std::vector<std::string> validate(const NetworkGraph& graph) {
  std::vector<std::string> out;
  const auto& in = graph.input_shape;
  if (in.width <= 0 || in.height <= 0 || in.channels <= 0)
    out.push_back("input shape " + to_string(in) + " is not positive");
  if (graph.layers.empty()) out.push_back("graph has no layers");

  const int n = static_cast<int>(graph.layers.size());
  for (int i = 0; i < n; ++i) {
    const auto& l = graph.layers[static_cast<std::size_t>(i)];
    const bool is_route = l.kind == LayerKind::route;
    if (is_route && l.route_sources.empty()) out.push_back(at(i) + "route without sources");
    if (!is_route && !l.route_sources.empty())
      out.push_back(at(i) + "route sources on a non-route layer");
    for (int src : l.route_sources) {
      if (src >= i) out.push_back("forward reference at layer " + std::to_string(i));
      else if (src < 0) out.push_back(at(i) + "negative route source " + std::to_string(src));
    }
    if (l.residual_partner) {
      if (l.kind != LayerKind::conv) out.push_back(at(i) + "residual on a non-conv layer");
      if (*l.residual_partner >= i)
        out.push_back("forward reference at layer " + std::to_string(i));
      else if (*l.residual_partner < 0)
        out.push_back(at(i) + "negative residual partner");
    }
    if (l.kind == LayerKind::conv) {
      if (l.filters < 1) out.push_back(at(i) + "conv needs filters >= 1");
      if (l.kernel < 1 || l.kernel % 2 == 0) out.push_back(at(i) + "conv kernel must be odd");
    }
    if (l.kind == LayerKind::conv || l.kind == LayerKind::maxpool) {
      if (l.kernel < 1) out.push_back(at(i) + "kernel must be >= 1");
      if (l.stride < 1) out.push_back(at(i) + "stride must be >= 1");
    }
    if (l.kind == LayerKind::yolo_head) {
      if (i == 0) out.push_back(at(i) + "yolo head needs an input layer");
      if (!graph.head_at(i)) out.push_back(at(i) + "yolo layer without head spec");
    }
  }

  for (const auto& h : graph.heads) {
    if (h.layer < 0 || h.layer >= n ||
        graph.layers[static_cast<std::size_t>(h.layer)].kind != LayerKind::yolo_head) {
      out.push_back("head spec at " + std::to_string(h.layer) + " does not name a yolo layer");
      continue;
    }
    if (h.class_count < 1) out.push_back(at(h.layer) + "class_count must be >= 1");
    if (h.boxes_per_cell < 1) out.push_back(at(h.layer) + "boxes_per_cell must be >= 1");
    if (static_cast<int>(h.anchors.size()) != h.boxes_per_cell)
      out.push_back(at(h.layer) + "anchor count " + std::to_string(h.anchors.size()) +
                    " != boxes per cell " + std::to_string(h.boxes_per_cell));
    for (const auto& a : h.anchors)
      if (!(a.w > 0 && a.h > 0)) out.push_back(at(h.layer) + "anchor dims must be positive");
  }

  if (!out.empty()) return out;

  // Structure is sound; shape propagation reports the first inconsistency.
  try {
    const auto shapes = infer_shapes(graph);
    for (int i = 0; i < n; ++i) {
      const auto& l = graph.layers[static_cast<std::size_t>(i)];
      const auto& s = shapes[static_cast<std::size_t>(i)];
      if (l.residual_partner && shapes[static_cast<std::size_t>(*l.residual_partner)] != s)
        out.push_back(at(i) + "residual shape " +
                      to_string(shapes[static_cast<std::size_t>(*l.residual_partner)]) +
                      " does not match output " + to_string(s));
      if (l.kind == LayerKind::yolo_head) {
        const auto* h = graph.head_at(i);
        if (h && s.channels != h->channels())
          out.push_back(at(i) + "head input has " + std::to_string(s.channels) +
                        " channels, expected B*(5+C) = " + std::to_string(h->channels()));
      }
    }
  } catch (const Error& e) {
    out.push_back(std::string("shape violation: ") + e.what());
  }
  return out;
}

}  // namespace yolos
