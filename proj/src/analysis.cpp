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

#include "yolos/analysis.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "yolos/error.hpp"

namespace yolos {
namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

[[noreturn]] void shape_error(std::size_t i, const std::string& msg) {
  fail(ErrorKind::shape, "layer " + std::to_string(i) + ": " + msg);
}

Shape layer_output(const NetworkGraph& graph, const std::vector<Shape>& shapes, std::size_t i,
                   const Shape& prev) {
  const auto& l = graph.layers[i];
  switch (l.kind) {
    case LayerKind::conv:
    case LayerKind::maxpool: {
      if (l.stride < 1) shape_error(i, "stride must be >= 1");
      Shape s{ceil_div(prev.width, l.stride), ceil_div(prev.height, l.stride),
              l.kind == LayerKind::conv ? l.filters : prev.channels};
      if (l.residual_partner) {
        const auto p = static_cast<std::size_t>(*l.residual_partner);
        if (p >= i) shape_error(i, "residual partner must precede the layer");
        if (shapes[p] != s)
          shape_error(i, "residual add of " + to_string(shapes[p]) + " onto " + to_string(s));
      }
      return s;
    }
    case LayerKind::upsample:
      return {prev.width * 2, prev.height * 2, prev.channels};
    case LayerKind::reshape_passthrough:
      if (prev.width % 2 || prev.height % 2)
        shape_error(i, "reshape-passthrough needs even spatial dims, got " + to_string(prev));
      return {prev.width / 2, prev.height / 2, prev.channels * 4};
    case LayerKind::route: {
      if (l.route_sources.empty()) shape_error(i, "route without sources");
      Shape s{};
      for (std::size_t j = 0; j < l.route_sources.size(); ++j) {
        const int src = l.route_sources[j];
        if (src < 0 || static_cast<std::size_t>(src) >= i)
          shape_error(i, "forward reference to layer " + std::to_string(src));
        const auto& in = shapes[static_cast<std::size_t>(src)];
        if (j == 0) {
          s = in;
        } else {
          if (in.width != s.width || in.height != s.height)
            shape_error(i, "concat spatial mismatch " + to_string(s) + " vs " + to_string(in));
          s.channels += in.channels;
        }
      }
      return s;
    }
    case LayerKind::yolo_head:
      return prev;
  }
  shape_error(i, "unknown layer kind");
}

}  // namespace

std::vector<Shape> infer_shapes(const NetworkGraph& graph) {
  return infer_shapes(graph, graph.input_shape);
}

std::vector<Shape> infer_shapes(const NetworkGraph& graph, const Shape& input) {
  std::vector<Shape> shapes;
  shapes.reserve(graph.layers.size());
  Shape prev = input;
  for (std::size_t i = 0; i < graph.layers.size(); ++i) {
    Shape s = layer_output(graph, shapes, i, prev);
    if (s.width <= 0 || s.height <= 0 || s.channels <= 0)
      shape_error(i, "non-positive output " + to_string(s));
    shapes.push_back(s);
    prev = s;
  }
  return shapes;
}

std::vector<FieldStride> receptive_fields(const NetworkGraph& graph) {
  const auto shapes = infer_shapes(graph);
  std::vector<FieldStride> out;
  out.reserve(graph.layers.size());
  FieldStride prev{};
  for (std::size_t i = 0; i < graph.layers.size(); ++i) {
    const auto& l = graph.layers[i];
    FieldStride cur = prev;
    switch (l.kind) {
      case LayerKind::conv:
      case LayerKind::maxpool:
        cur.receptive_field = prev.receptive_field + (l.kernel - 1) * prev.cumulative_stride;
        cur.cumulative_stride = prev.cumulative_stride * l.stride;
        break;
      case LayerKind::route: {
        const std::int64_t grid = graph.input_shape.width / shapes[i].width;
        const FieldStride* pick = nullptr;
        for (int src : l.route_sources) {
          const auto& fs = out[static_cast<std::size_t>(src)];
          if (fs.cumulative_stride == grid && (!pick || fs.receptive_field > pick->receptive_field))
            pick = &fs;
        }
        cur = pick ? *pick : out[static_cast<std::size_t>(l.route_sources.back())];
        break;
      }
      case LayerKind::upsample:
      case LayerKind::reshape_passthrough:
      case LayerKind::yolo_head:
        break;
    }
    out.push_back(cur);
    prev = cur;
  }
  return out;
}

std::int64_t conv_params(const LayerSpec& conv, int in_channels) {
  const std::int64_t k = conv.kernel;
  const std::int64_t weights = k * k * in_channels * conv.filters;
  return weights + (conv.batch_norm ? 4 : 1) * static_cast<std::int64_t>(conv.filters);
}

ParamCount count_params(const NetworkGraph& graph) {
  ParamCount pc;
  const auto a = analyze(graph);
  for (const auto& l : a.layers) pc.per_layer.push_back(l.params);
  pc.total = a.total_params;
  return pc;
}

double count_flops(const NetworkGraph& graph, const Shape& input) {
  return analyze(graph, input).bflops();
}

GraphAnalysis analyze(const NetworkGraph& graph) { return analyze(graph, graph.input_shape); }

GraphAnalysis analyze(const NetworkGraph& graph, const Shape& input) {
  const auto shapes = infer_shapes(graph, input);
  NetworkGraph resized = graph;
  resized.input_shape = input;
  const auto fields = receptive_fields(resized);

  GraphAnalysis a;
  a.layers.resize(graph.layers.size());
  for (std::size_t i = 0; i < graph.layers.size(); ++i) {
    const auto& l = graph.layers[i];
    auto& r = a.layers[i];
    r.in_shape = l.kind == LayerKind::route ? shapes[i] : i == 0 ? input : shapes[i - 1];
    r.out_shape = shapes[i];
    r.cumulative_stride = fields[i].cumulative_stride;
    r.receptive_field = fields[i].receptive_field;
    if (l.kind == LayerKind::conv) {
      r.params = conv_params(l, r.in_shape.channels);
      const std::int64_t k = l.kernel;
      r.flops = 2 * k * k * r.in_shape.channels * l.filters *
                static_cast<std::int64_t>(r.out_shape.width) * r.out_shape.height;
    }
    a.total_params += r.params;
    a.total_flops += r.flops;
  }
  return a;
}

std::string format_report(const NetworkGraph& graph, const GraphAnalysis& analysis,
                          ReportFormat format) {
  struct Row {
    std::string cells[10];
  };
  std::vector<Row> rows;
  rows.push_back({{"#", "Type", "F", "S/S", "Input", "Output", "CS", "RF", "Params", "FLOPs"}});
  for (std::size_t i = 0; i < graph.layers.size(); ++i) {
    const auto& l = graph.layers[i];
    const auto& r = analysis.layers[i];
    Row row;
    row.cells[0] = std::to_string(i);
    std::string type;
    switch (l.kind) {
      case LayerKind::conv:
        type = "Conv";
        if (l.residual_partner) type += " (R)";
        row.cells[2] = std::to_string(l.filters);
        row.cells[3] = std::to_string(l.kernel) + "/" + std::to_string(l.stride);
        break;
      case LayerKind::maxpool:
        type = "Maxpool";
        row.cells[3] = std::to_string(l.kernel) + "/" + std::to_string(l.stride);
        break;
      case LayerKind::upsample:
        type = "Upsample";
        row.cells[3] = "2/1";
        break;
      case LayerKind::reshape_passthrough:
        type = "Reshape";
        break;
      case LayerKind::route: {
        type = "Route ";
        for (std::size_t j = 0; j < l.route_sources.size(); ++j)
          type += (j ? "," : "") + std::to_string(l.route_sources[j]);
        break;
      }
      case LayerKind::yolo_head:
        type = "Yolo";
        break;
    }
    row.cells[1] = type;
    row.cells[4] = to_string(r.in_shape);
    row.cells[5] = to_string(r.out_shape);
    row.cells[6] = std::to_string(r.cumulative_stride);
    row.cells[7] = std::to_string(r.receptive_field);
    row.cells[8] = std::to_string(r.params);
    row.cells[9] = std::to_string(r.flops);
    rows.push_back(std::move(row));
  }

  std::ostringstream os;
  if (format == ReportFormat::csv) {
    for (const auto& row : rows) {
      for (int c = 0; c < 10; ++c) os << (c ? "," : "") << row.cells[c];
      os << '\n';
    }
    return os.str();
  }
  std::size_t width[10] = {};
  for (const auto& row : rows)
    for (int c = 0; c < 10; ++c) width[c] = std::max(width[c], row.cells[c].size());
  for (const auto& row : rows) {
    for (int c = 0; c < 10; ++c) {
      if (c) os << "  ";
      const bool numeric = c == 0 || c == 2 || c >= 6;
      os << (numeric ? std::right : std::left) << std::setw(static_cast<int>(width[c]))
         << row.cells[c];
    }
    os << '\n';
  }
  os << "total params " << analysis.total_params << ", " << std::fixed << std::setprecision(2)
     << analysis.bflops() << " BFLOPs\n";
  return os.str();
}

}  // namespace yolos
