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

#include "yolos/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <ostream>

#include "yolos/analysis.hpp"
#include "yolos/anchors.hpp"
#include "yolos/engine.hpp"
#include "yolos/error.hpp"
#include "yolos/io.hpp"
#include "yolos/parallel.hpp"
#include "yolos/tiling.hpp"

namespace fs = std::filesystem;

namespace yolos {
namespace {

[[noreturn]] void invalid(const std::string& msg) { fail(ErrorKind::invalid_argument, msg); }

bool unit_interval(double v) { return v >= 0 && v <= 1; }

bool is_image_file(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".ppm" || ext == ".pgm" || ext == ".pnm" || ext == ".png";
}

NetworkGraph load_network(const RunConfig& c) {
  NetworkGraph g;
  if (parse_builtin(c.model)) {
    g = build_builtin(c.model, c.classes, HeadConfig{c.boxes_per_cell});
  } else {
    std::error_code ec;
    if (!fs::is_regular_file(c.model, ec))
      invalid("model '" + c.model + "' is neither a built-in net nor a network file");
    g = parse_text(read_file(c.model));
  }
  if (c.width) g.input_shape.width = *c.width;
  if (c.height) g.input_shape.height = *c.height;
  if (c.anchors) {
    const auto fields = receptive_fields(g);
    std::vector<int> strides;
    for (const auto& h : g.heads)
      strides.push_back(static_cast<int>(fields[static_cast<std::size_t>(h.layer)].cumulative_stride));
    const auto runs = assign_anchors(*c.anchors, strides);
    for (std::size_t i = 0; i < g.heads.size(); ++i) {
      if (static_cast<int>(runs[i].size()) != g.heads[i].boxes_per_cell)
        invalid("head " + std::to_string(i) + " predicts " + std::to_string(g.heads[i].boxes_per_cell) +
                " boxes per cell but would receive " + std::to_string(runs[i].size()) + " anchors");
      g.heads[i].anchors = runs[i];
    }
  }
  const auto problems = validate(g);
  if (!problems.empty()) fail(ErrorKind::shape, "network " + g.name + ": " + problems.front());
  return g;
}

void emit(const RunConfig& c, const std::string& content, std::ostream& out) {
  if (c.output.empty()) out << content;
  else write_file_atomic(c.output, content);
}

std::vector<fs::path> expand_images(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    std::error_code ec;
    if (fs::is_directory(in, ec)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in))
        if (e.is_regular_file() && is_image_file(e.path())) found.push_back(e.path());
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.emplace_back(in);
    }
  }
  return out;
}

std::string serialize(const std::vector<Detection>& dets, OutputFormat f) {
  return f == OutputFormat::json ? detections_to_json(dets) : detections_to_text(dets);
}

std::vector<Detection> load_detections(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return path.extension() == ".json" ? detections_from_json(text) : detections_from_text(text);
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

int run_analyze(const RunConfig& c, std::ostream& out) {
  if (c.format == OutputFormat::json) invalid("analyze supports --format text or csv");
  const NetworkGraph g = load_network(c);
  emit(c, format_report(g, analyze(g), c.format == OutputFormat::csv ? ReportFormat::csv : ReportFormat::text), out);
  return 0;
}

int run_export(const RunConfig& c, std::ostream& out) {
  emit(c, to_text(load_network(c)), out);
  return 0;
}

int run_detect(const RunConfig& c, std::ostream& out) {
  if (c.format == OutputFormat::csv) invalid("detect supports --format text or json");
  const NetworkGraph g = load_network(c);
  const WeightSet w = c.weights.empty() ? WeightSet::random(g, c.seed) : read_weights(c.weights, g);
  const auto images = expand_images(c.inputs);
  if (images.empty()) invalid("no input images");
  std::error_code ec;
  const bool to_dir = images.size() > 1 || (!c.output.empty() && fs::is_directory(c.output, ec));
  if (to_dir && c.output.empty()) invalid("several images need --output naming a directory");
  if (to_dir) fs::create_directories(c.output, ec);
  if (to_dir && !fs::is_directory(c.output, ec)) fail(ErrorKind::io, c.output + ": cannot create directory");

  PostprocConfig pc;
  pc.conf_threshold = c.conf_threshold;
  pc.nms = {c.nms_threshold, c.class_agnostic};
  pc.threads = images.size() > 1 ? 1 : c.threads;
  const char* ext = c.format == OutputFormat::json ? ".json" : ".txt";

  std::vector<std::string> results(images.size());
  parallel_for(images.size(), images.size() > 1 ? c.threads : 1, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const Tensor img = load_image(images[i]);
      const TilePlan plan = plan_tiles(img.width(), img.height(), c.nx, c.ny, c.ox, c.oy);
      results[i] = serialize(detect_tiled(img, plan, g, w, pc), c.format);
      if (to_dir) write_file_atomic(fs::path(c.output) / (images[i].stem().string() + ext), results[i]);
    }
  });
  if (!to_dir) emit(c, results.front(), out);
  return 0;
}

int run_eval(const RunConfig& c, std::ostream& out) {
  if (c.format == OutputFormat::csv) invalid("eval supports --format text or json");
  const fs::path gt_dir = c.inputs.front();
  const fs::path det_dir = c.detections;
  std::vector<EvalImage> images;
  for (auto& a : load_yolo_annotations(gt_dir)) {
    EvalImage im{a.id, {}, std::move(a.truths)};
    std::error_code ec;
    const fs::path txt = det_dir / (a.id + ".txt"), json = det_dir / (a.id + ".json");
    if (fs::is_regular_file(txt, ec)) im.detections = load_detections(txt);
    else if (fs::is_regular_file(json, ec)) im.detections = load_detections(json);
    else fail(ErrorKind::io, det_dir.string() + ": no detections for image '" + a.id + "'");
    images.push_back(std::move(im));
  }
  EvalOptions opts;
  opts.iou_threshold = c.eval_iou;
  opts.conf_threshold = c.conf_threshold;
  opts.ap_mode = c.ap_mode;
  opts.class_names = load_class_names(gt_dir);
  const EvalReport rep = evaluate(images, opts);
  emit(c, c.format == OutputFormat::json ? report_to_json(rep) : report_to_table(rep), out);
  return 0;
}

int run_anchors(const RunConfig& c, std::ostream& out) {
  if (c.format == OutputFormat::csv) invalid("anchors supports --format text or json");
  const int net_w = c.width.value_or(416), net_h = c.height.value_or(416);
  std::vector<BoxDims> dims;
  for (const auto& a : load_yolo_annotations(c.inputs.front())) {
    const Letterbox lb = Letterbox::fit(a.size.width, a.size.height, net_w, net_h);
    const double sx = c.source_pixels ? 1.0 : static_cast<double>(lb.resized_width) / a.size.width;
    const double sy = c.source_pixels ? 1.0 : static_cast<double>(lb.resized_height) / a.size.height;
    for (const auto& t : a.truths) dims.push_back({t.box.width() * sx, t.box.height() * sy});
  }
  if (dims.empty()) invalid("no boxes found under " + c.inputs.front());
  const KMeansResult r = kmeans_iou(dims, {c.k, c.seed, c.max_iters});
  if (c.format == OutputFormat::json) {
    std::string s = "{\"anchors\": [";
    for (std::size_t i = 0; i < r.anchors.size(); ++i)
      s += std::string(i ? ", [" : "[") + format_anchor_list({r.anchors[i]}) + "]";
    char buf[64];
    std::snprintf(buf, sizeof buf, "], \"mean_iou\": %.17g, \"iterations\": %d}\n",
                  r.mean_iou_history.empty() ? 0.0 : r.mean_iou_history.back(), r.iterations);
    emit(c, s + buf, out);
  } else {
    emit(c, format_anchor_list(r.anchors) + "\n", out);
  }
  return 0;
}

int run_bench(const RunConfig& c, std::ostream& out) {
  struct Row {
    std::string name;
    double params;
    double bflops;
    double ms = -1;
  };
  std::vector<Row> rows;
  for (BuiltinNet n : all_builtins()) {
    RunConfig rc = c;
    rc.model = std::string(to_string(n));
    rc.anchors.reset();
    const NetworkGraph g = load_network(rc);
    Row row{rc.model, static_cast<double>(count_params(g).total), count_flops(g, g.input_shape)};
    if (c.time_forward) {
      const WeightSet w = WeightSet::random(g, c.seed);
      const Tensor img(g.input_shape, 0.5f);
      const auto t0 = std::chrono::steady_clock::now();
      forward(g, w, img, {c.threads});
      row.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.bflops < b.bflops; });
  std::string s;
  char buf[160];
  if (c.format == OutputFormat::csv) {
    s = "rank,net,params,bflops,forward_ms\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%s,%.0f,%.3f,%.1f\n", i + 1, rows[i].name.c_str(), rows[i].params,
                    rows[i].bflops, rows[i].ms);
      s += buf;
    }
  } else {
    std::snprintf(buf, sizeof buf, "%-4s  %-12s  %12s  %8s  %10s\n", "rank", "net", "params", "BFLOPs", "forward_ms");
    s = buf;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%-4zu  %-12s  %12.0f  %8.3f  %10s\n", i + 1, rows[i].name.c_str(),
                    rows[i].params, rows[i].bflops,
                    rows[i].ms < 0 ? "-" : std::to_string(static_cast<long>(rows[i].ms)).c_str());
      s += buf;
    }
  }
  emit(c, s, out);
  return 0;
}

std::string format_number(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

void check_config(const RunConfig& c) {
  if (c.classes < 1) invalid("--classes must be >= 1");
  if (c.boxes_per_cell < 1 || c.boxes_per_cell > 9) invalid("--boxes must lie in [1, 9]");
  if ((c.width && *c.width < 1) || (c.height && *c.height < 1)) invalid("--width/--height must be positive");
  if (!unit_interval(c.conf_threshold)) invalid("--conf must lie in [0, 1]");
  if (!unit_interval(c.nms_threshold)) invalid("--nms must lie in [0, 1]");
  if (!unit_interval(c.eval_iou)) invalid("--iou must lie in [0, 1]");
  if (c.nx < 1 || c.ny < 1) invalid("--nx/--ny must be >= 1");
  if (c.ox < 0 || c.oy < 0) invalid("--ox/--oy must be >= 0");
  if (c.k < 1) invalid("--k must be >= 1");
  if (c.max_iters < 1) invalid("--iters must be >= 1");
  if (c.threads < 1) invalid("--threads must be >= 1");
  switch (c.subcommand) {
    case Subcommand::detect:
      if (c.inputs.empty()) invalid("detect needs at least one image");
      break;
    case Subcommand::eval:
      if (c.inputs.size() != 1) invalid("eval needs one ground-truth directory");
      if (c.detections.empty()) invalid("eval needs --detections");
      break;
    case Subcommand::anchors:
      if (c.inputs.size() != 1) invalid("anchors needs one annotation directory");
      break;
    default:
      break;
  }
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    check_config(c);
    switch (c.subcommand) {
      case Subcommand::analyze: return run_analyze(c, out);
      case Subcommand::detect: return run_detect(c, out);
      case Subcommand::eval: return run_eval(c, out);
      case Subcommand::anchors: return run_anchors(c, out);
      case Subcommand::export_net: return run_export(c, out);
      case Subcommand::bench: return run_bench(c, out);
    }
    invalid("unknown subcommand");
  } catch (const Error& e) {
    err << "yolos: error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const fs::filesystem_error& e) {
    err << "yolos: error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::io);
  } catch (const std::exception& e) {
    err << "yolos: error: " << e.what() << "\n";
    return 5;
  }
}

std::string format_anchor_list(const std::vector<Anchor>& anchors) {
  std::string s;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (i) s += ", ";
    s += format_number(anchors[i].w) + "," + format_number(anchors[i].h);
  }
  return s;
}

std::vector<Anchor> parse_anchor_list(std::string_view text) {
  std::vector<double> nums;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ',' || std::isspace(static_cast<unsigned char>(text[i])))) ++i;
    if (i == text.size()) break;
    double v = 0;
    auto r = std::from_chars(text.data() + i, text.data() + text.size(), v);
    if (r.ec != std::errc{}) fail(ErrorKind::parse, "anchor list: bad number at offset " + std::to_string(i));
    i = static_cast<std::size_t>(r.ptr - text.data());
    if (i < text.size() && text[i] != ',' && !std::isspace(static_cast<unsigned char>(text[i])))
      fail(ErrorKind::parse, "anchor list: unexpected character at offset " + std::to_string(i));
    if (!(v > 0)) fail(ErrorKind::parse, "anchor list: sizes must be positive");
    nums.push_back(v);
  }
  if (nums.empty() || nums.size() % 2) fail(ErrorKind::parse, "anchor list: expected w,h pairs");
  std::vector<Anchor> out;
  for (std::size_t k = 0; k < nums.size(); k += 2) out.push_back({nums[k], nums[k + 1]});
  return out;
}

}  // namespace yolos
