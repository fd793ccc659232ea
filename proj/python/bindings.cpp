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

#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <sstream>

#include "yolos/analysis.hpp"
#include "yolos/anchors.hpp"
#include "yolos/cli.hpp"
#include "yolos/engine.hpp"
#include "yolos/error.hpp"
#include "yolos/io.hpp"
#include "yolos/metrics.hpp"
#include "yolos/postproc.hpp"
#include "yolos/tiling.hpp"

namespace py = pybind11;
using namespace yolos;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

// (C, H, W) float32 array <-> Tensor.
Tensor to_tensor(const FloatArray& a) {
  if (a.ndim() != 3) throw py::value_error("expected a (channels, height, width) array");
  Shape s{static_cast<int>(a.shape(2)), static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0))};
  std::vector<float> data(a.data(), a.data() + a.size());
  return Tensor(s, std::move(data));
}

FloatArray to_array(const Tensor& t) {
  FloatArray a({t.channels(), t.height(), t.width()});
  std::memcpy(a.mutable_data(), t.data().data(), t.size() * sizeof(float));
  return a;
}

py::tuple shape_tuple(const Shape& s) { return py::make_tuple(s.width, s.height, s.channels); }

}  // namespace

PYBIND11_MODULE(_yolos, m) {
  m.doc() = "YOLO-S / YOLO-L network analysis, CPU inference, tiling and detection metrics.";

  py::register_exception<Error>(m, "Error");

  py::class_<Box>(m, "Box")
      .def(py::init<double, double, double, double>(), py::arg("x_min"), py::arg("y_min"), py::arg("x_max"),
           py::arg("y_max"))
      .def_readwrite("x_min", &Box::x_min)
      .def_readwrite("y_min", &Box::y_min)
      .def_readwrite("x_max", &Box::x_max)
      .def_readwrite("y_max", &Box::y_max)
      .def("area", &Box::area)
      .def(py::self == py::self)
      .def("__repr__", [](const Box& b) {
        return "Box(" + std::to_string(b.x_min) + ", " + std::to_string(b.y_min) + ", " + std::to_string(b.x_max) +
               ", " + std::to_string(b.y_max) + ")";
      });

  py::class_<Detection>(m, "Detection")
      .def(py::init<Box, int, double>(), py::arg("box"), py::arg("class_id"), py::arg("confidence"))
      .def_readwrite("box", &Detection::box)
      .def_readwrite("class_id", &Detection::class_id)
      .def_readwrite("confidence", &Detection::confidence)
      .def(py::self == py::self);

  py::class_<GroundTruth>(m, "GroundTruth")
      .def(py::init<Box, int, std::string>(), py::arg("box"), py::arg("class_id"), py::arg("image_id") = "")
      .def_readwrite("box", &GroundTruth::box)
      .def_readwrite("class_id", &GroundTruth::class_id)
      .def_readwrite("image_id", &GroundTruth::image_id);

  py::class_<NetworkGraph>(m, "NetworkGraph")
      .def_readonly("name", &NetworkGraph::name)
      .def_property_readonly("input_shape", [](const NetworkGraph& g) { return shape_tuple(g.input_shape); })
      .def_property_readonly("layer_count", [](const NetworkGraph& g) { return g.layers.size(); })
      .def_property_readonly("heads", [](const NetworkGraph& g) {
        py::list out;
        for (const auto& h : g.heads) {
          py::list anchors;
          for (const auto& a : h.anchors) anchors.append(py::make_tuple(a.w, a.h));
          out.append(py::dict(py::arg("layer") = h.layer, py::arg("anchors") = anchors,
                              py::arg("class_count") = h.class_count, py::arg("boxes_per_cell") = h.boxes_per_cell));
        }
        return out;
      })
      .def("to_text", [](const NetworkGraph& g) { return to_text(g); })
      .def(py::self == py::self);

  m.def("build_builtin",
        [](const std::string& name, int classes, int boxes) { return build_builtin(name, classes, HeadConfig{boxes}); },
        py::arg("name"), py::arg("class_count") = 80, py::arg("boxes_per_cell") = 3);
  m.def("builtin_names", [] {
    std::vector<std::string> names;
    for (auto n : all_builtins()) names.emplace_back(to_string(n));
    return names;
  });
  m.def("parse_network", [](const std::string& text) { return parse_text(text); }, py::arg("text"));
  m.def("validate", &validate, py::arg("graph"));

  m.def(
      "analyze",
      [](const NetworkGraph& g) {
        const GraphAnalysis a = analyze(g);
        py::list rows;
        for (const auto& l : a.layers)
          rows.append(py::dict(py::arg("out_shape") = shape_tuple(l.out_shape),
                               py::arg("cumulative_stride") = l.cumulative_stride,
                               py::arg("receptive_field") = l.receptive_field, py::arg("params") = l.params,
                               py::arg("flops") = l.flops));
        return rows;
      },
      py::arg("graph"), "Per-layer dicts: out_shape (w, h, c), cumulative_stride, receptive_field, params, flops.");
  m.def("count_params", [](const NetworkGraph& g) { return count_params(g).total; }, py::arg("graph"));
  m.def(
      "count_flops", [](const NetworkGraph& g) { return count_flops(g, g.input_shape); }, py::arg("graph"),
      "Billions of floating point operations at the graph's input size.");
  m.def(
      "analysis_report",
      [](const NetworkGraph& g, const std::string& fmt) {
        return format_report(g, analyze(g), fmt == "csv" ? ReportFormat::csv : ReportFormat::text);
      },
      py::arg("graph"), py::arg("format") = "text");

  py::class_<WeightSet>(m, "WeightSet")
      .def_static("random", &WeightSet::random, py::arg("graph"), py::arg("seed") = 0)
      .def_static("zeros", &WeightSet::zeros, py::arg("graph"))
      .def_static("load", [](const std::string& path, const NetworkGraph& g) { return read_weights(path, g); },
                  py::arg("path"), py::arg("graph"))
      .def("save", [](const WeightSet& w, const std::string& path, const NetworkGraph& g) { write_weights(path, g, w); },
           py::arg("path"), py::arg("graph"))
      .def(py::self == py::self);

  m.def(
      "forward",
      [](const NetworkGraph& g, const WeightSet& w, const FloatArray& image, int threads) {
        const Tensor t = to_tensor(image);
        std::vector<Tensor> heads;
        {
          py::gil_scoped_release release;
          heads = forward(g, w, t, {threads});
        }
        py::list out;
        for (const auto& h : heads) out.append(to_array(h));
        return out;
      },
      py::arg("graph"), py::arg("weights"), py::arg("image"), py::arg("threads") = 1,
      "Raw head tensors, each (channels, height, width).");
  m.def("reshape_passthrough", [](const FloatArray& a) { return to_array(reshape_passthrough(to_tensor(a))); });
  m.def("upsample2x", [](const FloatArray& a) { return to_array(upsample2x(to_tensor(a))); });
  m.def("load_image", [](const std::string& path) { return to_array(load_image(path)); }, py::arg("path"));

  m.def("iou", &iou, py::arg("a"), py::arg("b"));
  m.def(
      "nms",
      [](const std::vector<Detection>& dets, double thr, bool agnostic) { return nms(dets, {thr, agnostic}); },
      py::arg("detections"), py::arg("iou_threshold") = 0.45, py::arg("class_agnostic") = false);
  m.def(
      "decode_head",
      [](const FloatArray& raw, const std::vector<std::pair<double, double>>& anchors, int stride, double conf,
         int classes) {
        DecodeParams p;
        for (auto [w, h] : anchors) p.anchors.push_back({w, h});
        p.stride = stride;
        p.conf_threshold = conf;
        p.class_count = classes;
        return decode_head(to_tensor(raw), p);
      },
      py::arg("raw"), py::arg("anchors"), py::arg("stride"), py::arg("conf_threshold"), py::arg("class_count"));
  m.def(
      "detect",
      [](const FloatArray& image, const NetworkGraph& g, const WeightSet& w, int nx, int ny, int ox, int oy,
         double conf, double nms_thr, int threads) {
        const Tensor t = to_tensor(image);
        py::gil_scoped_release release;
        const TilePlan plan = plan_tiles(t.width(), t.height(), nx, ny, ox, oy);
        return detect_tiled(t, plan, g, w, PostprocConfig{conf, {nms_thr, false}, threads});
      },
      py::arg("image"), py::arg("graph"), py::arg("weights"), py::arg("nx") = 1, py::arg("ny") = 1,
      py::arg("ox") = 0, py::arg("oy") = 0, py::arg("conf_threshold") = 0.25, py::arg("nms_threshold") = 0.45,
      py::arg("threads") = 1);
  m.def("detections_to_text", &detections_to_text);
  m.def("detections_from_text", [](const std::string& s) { return detections_from_text(s); });
  m.def("detections_to_json", &detections_to_json);
  m.def("detections_from_json", [](const std::string& s) { return detections_from_json(s); });

  py::class_<TileRect>(m, "TileRect")
      .def_readonly("x", &TileRect::x)
      .def_readonly("y", &TileRect::y)
      .def_readonly("width", &TileRect::width)
      .def_readonly("height", &TileRect::height);
  py::class_<TilePlan>(m, "TilePlan")
      .def_readonly("tile_width", &TilePlan::tile_width)
      .def_readonly("tile_height", &TilePlan::tile_height)
      .def_property_readonly("step_x", &TilePlan::step_x)
      .def_property_readonly("step_y", &TilePlan::step_y)
      .def_readonly("tiles", &TilePlan::tiles);
  m.def("plan_tiles", &plan_tiles, py::arg("width"), py::arg("height"), py::arg("nx"), py::arg("ny"),
        py::arg("overlap_x"), py::arg("overlap_y"));

  m.def(
      "kmeans_iou",
      [](const std::vector<std::pair<double, double>>& dims, int k, std::uint64_t seed, int iters) {
        std::vector<BoxDims> in;
        for (auto [w, h] : dims) in.push_back({w, h});
        std::vector<std::pair<double, double>> out;
        for (const auto& a : kmeans_iou(in, {k, seed, iters}).anchors) out.emplace_back(a.w, a.h);
        return out;
      },
      py::arg("dims"), py::arg("k"), py::arg("seed") = 0, py::arg("max_iters") = 300);

  m.def("size_bucket", [](const Box& b) { return std::string(to_string(size_bucket(b))); }, py::arg("box"));
  m.def(
      "average_precision",
      [](const std::vector<std::pair<double, bool>>& flags, int positives, bool eleven) {
        std::vector<ScoredFlag> f;
        for (auto [c, tp] : flags) f.push_back({c, tp});
        return average_precision(f, positives, eleven ? ApMode::eleven_point : ApMode::all_point);
      },
      py::arg("flags"), py::arg("positives"), py::arg("eleven_point") = false);
  m.def(
      "aggregate",
      [](const std::vector<double>& aps, const std::vector<double>& supports) {
        const Aggregate a = aggregate(aps, supports);
        return py::make_tuple(a.map, a.wap);
      },
      py::arg("aps"), py::arg("supports"), "(mAP, wAP)");
  m.def(
      "micro_metrics",
      [](long tp, long fp, long positives) {
        const MicroMetrics mm = micro_metrics(tp, fp, positives);
        return py::make_tuple(mm.recall, mm.precision, mm.f1);
      },
      py::arg("tp"), py::arg("fp"), py::arg("positives"), "(recall, precision, f1); None where undefined.");
  m.def(
      "evaluate",
      [](const std::vector<std::tuple<std::vector<Detection>, std::vector<GroundTruth>>>& images, double iou_thr,
         double conf, std::vector<std::string> names, const std::string& fmt) {
        std::vector<EvalImage> in;
        for (const auto& [d, g] : images) in.push_back({std::to_string(in.size()), d, g});
        EvalOptions o;
        o.iou_threshold = iou_thr;
        o.conf_threshold = conf;
        o.class_names = std::move(names);
        const EvalReport r = evaluate(in, o);
        return fmt == "table" ? report_to_table(r) : report_to_json(r);
      },
      py::arg("images"), py::arg("iou_threshold") = 0.5, py::arg("conf_threshold") = 0.25,
      py::arg("class_names") = std::vector<std::string>{}, py::arg("format") = "json",
      "Scores [(detections, ground_truths), ...]; returns the report as JSON text or an aligned table.");

  m.def(
      "main",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"yolos"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line; returns (exit_code, stdout, stderr).");
}
