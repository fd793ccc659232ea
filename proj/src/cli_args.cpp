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

#include <map>
#include <ostream>

#include "CLI11.hpp"

#include "yolos/cli.hpp"
#include "yolos/error.hpp"
#include "yolos/parallel.hpp"

namespace yolos {
namespace {

const std::map<std::string, OutputFormat> kFormats = {
    {"text", OutputFormat::text}, {"json", OutputFormat::json}, {"csv", OutputFormat::csv}};
const std::map<std::string, ApMode> kApModes = {{"all_point", ApMode::all_point},
                                                {"eleven_point", ApMode::eleven_point}};

void model_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--classes", c.classes, "Class count C for built-in nets")->capture_default_str();
  sub->add_option("--boxes", c.boxes_per_cell, "Boxes per cell B for single-head built-ins")->capture_default_str();
  sub->add_option("--width", c.width, "Network input width");
  sub->add_option("--height", c.height, "Network input height");
}

void output_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("-o,--output", c.output, "Output file (stdout when omitted) or directory");
  sub->add_option("--format", c.format, "text, json or csv")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  c.threads = default_thread_count();
  std::string anchors;

  CLI::App app{"Small-object YOLO network engine: analysis, tiled detection, evaluation, anchors", "yolos"};
  app.set_config("--config", "", "TOML/INI file; keys are long flag names, per-subcommand sections");
  app.require_subcommand(1);
  app.add_option("--threads", c.threads, "Worker threads (default: YOLOS_NUM_THREADS or 1)");

  auto* analyze = app.add_subcommand("analyze", "Per-layer shapes, stride, receptive field, params, FLOPs");
  analyze->add_option("model", c.model, "Built-in net or network file")->capture_default_str();
  model_options(analyze, c);
  output_options(analyze, c);

  auto* exp = app.add_subcommand("export", "Write a network in the text definition format");
  exp->add_option("model", c.model, "Built-in net or network file")->capture_default_str();
  exp->add_option("--anchors", anchors, "Replacement anchors `w,h, w,h, ...`");
  model_options(exp, c);
  output_options(exp, c);

  auto* detect = app.add_subcommand("detect", "Tiled detection over images");
  detect->add_option("images", c.inputs, "Image files or directories")->required();
  detect->add_option("-m,--model", c.model, "Built-in net or network file")->capture_default_str();
  detect->add_option("-w,--weights", c.weights, "Weight file (binary or text); synthetic when omitted");
  detect->add_option("--seed", c.seed, "Seed for synthetic weights")->capture_default_str();
  detect->add_option("--anchors", anchors, "Replacement anchors `w,h, w,h, ...`");
  detect->add_option("--nx", c.nx, "Windows along x")->capture_default_str();
  detect->add_option("--ny", c.ny, "Windows along y")->capture_default_str();
  detect->add_option("--ox", c.ox, "Overlap along x, pixels")->capture_default_str();
  detect->add_option("--oy", c.oy, "Overlap along y, pixels")->capture_default_str();
  detect->add_option("--conf", c.conf_threshold, "Confidence threshold")->capture_default_str();
  detect->add_option("--nms", c.nms_threshold, "NMS IoU threshold")->capture_default_str();
  detect->add_flag("--class-agnostic", c.class_agnostic, "Suppress across classes");
  model_options(detect, c);
  output_options(detect, c);

  auto* eval = app.add_subcommand("eval", "Score detections against YOLO ground truth");
  eval->add_option("ground_truth", c.inputs, "Directory of images and `.txt` annotations")->required()->expected(1);
  eval->add_option("-d,--detections", c.detections, "Directory of `<image>.txt` or `<image>.json`")->required();
  eval->add_option("--iou", c.eval_iou, "IoU needed for a true positive")->capture_default_str();
  eval->add_option("--conf", c.conf_threshold, "Operating point for REC/PREC/F1")->capture_default_str();
  eval->add_option("--ap-mode", c.ap_mode, "all_point or eleven_point")
      ->transform(CLI::CheckedTransformer(kApModes, CLI::ignore_case));
  output_options(eval, c);

  auto* anc = app.add_subcommand("anchors", "IoU k-means anchor estimation");
  anc->add_option("annotations", c.inputs, "Directory of images and `.txt` annotations")->required()->expected(1);
  anc->add_option("-k", c.k, "Anchor count")->capture_default_str();
  anc->add_option("--seed", c.seed, "Seed for k-means++")->capture_default_str();
  anc->add_option("--iters", c.max_iters, "Iteration cap")->capture_default_str();
  anc->add_option("--width", c.width, "Network input width");
  anc->add_option("--height", c.height, "Network input height");
  anc->add_flag("--source-pixels", c.source_pixels, "Cluster in source-image pixels");
  output_options(anc, c);

  auto* bench = app.add_subcommand("bench", "Compare built-in nets by FLOPs");
  bench->add_flag("--time", c.time_forward, "Also time one forward pass per net");
  bench->add_option("--seed", c.seed, "Seed for synthetic weights");
  output_options(bench, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "yolos: error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::invalid_argument);
  }

  if (analyze->parsed()) c.subcommand = Subcommand::analyze;
  else if (exp->parsed()) c.subcommand = Subcommand::export_net;
  else if (detect->parsed()) c.subcommand = Subcommand::detect;
  else if (eval->parsed()) c.subcommand = Subcommand::eval;
  else if (anc->parsed()) c.subcommand = Subcommand::anchors;
  else c.subcommand = Subcommand::bench;

  if (!anchors.empty()) {
    try {
      c.anchors = parse_anchor_list(anchors);
    } catch (const Error& e) {
      err << "yolos: error: --anchors: " << e.what() << "\n";
      return static_cast<int>(ErrorKind::invalid_argument);
    }
  }
  return run(c, out, err);
}

}  // namespace yolos
