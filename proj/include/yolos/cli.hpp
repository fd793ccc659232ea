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
#include <iosfwd>
#include <optional>
#include <string_view>
#include <string>
#include <vector>

#include "yolos/metrics.hpp"
#include "yolos/netdef.hpp"

namespace yolos {

enum class Subcommand { analyze, detect, eval, anchors, export_net, bench };

enum class OutputFormat { text, json, csv };

struct RunConfig {
  Subcommand subcommand = Subcommand::analyze;

  std::string model = "yolo_s";  // built-in name or network text file
  int classes = 80;
  int boxes_per_cell = 3;
  std::optional<std::vector<Anchor>> anchors;  // replaces the heads' anchors
  std::optional<int> width;                    // network input override
  std::optional<int> height;

  std::string weights;  // empty: synthetic weights from `seed`
  std::uint64_t seed = 0;

  std::vector<std::string> inputs;  // images, or annotation directory
  std::string detections;           // eval: directory of detection files

  int nx = 1;
  int ny = 1;
  int ox = 0;
  int oy = 0;

  double conf_threshold = 0.25;
  double nms_threshold = 0.45;
  bool class_agnostic = false;
  double eval_iou = 0.5;
  ApMode ap_mode = ApMode::all_point;

  int k = 9;
  int max_iters = 300;
  bool source_pixels = false;  // anchors: skip the letterbox rescale
  bool time_forward = false;   // bench: also time one forward pass per net

  std::string output;  // empty: stdout
  OutputFormat format = OutputFormat::text;
  int threads = 1;
};

// Throws Error(invalid_argument) naming the first violated constraint.
void check_config(const RunConfig& config);

// Executes one subcommand. Exit codes: 0 success, 1 invalid argument or
// configuration, 2 I/O, 3 parse, 4 shape, 5 any other failure. On failure
// a single `yolos: error: ...` line goes to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (CLI flags override `--config` file values, which override
// defaults), then runs.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "w,h, w,h, ..." with shortest round-trip numbers.
std::string format_anchor_list(const std::vector<Anchor>& anchors);
std::vector<Anchor> parse_anchor_list(std::string_view text);

}  // namespace yolos
