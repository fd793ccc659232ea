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

#include "yolos/postproc.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

#include "json.hpp"

#include "yolos/error.hpp"

namespace yolos {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

double iou(const Box& a, const Box& b) {
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0 ? std::min(1.0, inter / uni) : 0.0;
}

std::vector<Detection> decode_head(const Tensor& raw, const DecodeParams& p) {
  const int boxes = static_cast<int>(p.anchors.size());
  const int attrs = 5 + p.class_count;
  if (p.class_count < 1 || boxes < 1 || raw.channels() != boxes * attrs)
    fail(ErrorKind::shape, "head has " + std::to_string(raw.channels()) + " channels, expected " +
                               std::to_string(boxes) + "*(5+" + std::to_string(p.class_count) + ")");
  // Logistic output is below 1 for finite logits; keep that after rounding.
  const double below_one = std::nextafter(1.0, 0.0);
  std::vector<Detection> out;
  for (int y = 0; y < raw.height(); ++y) {
    for (int x = 0; x < raw.width(); ++x) {
      for (int b = 0; b < boxes; ++b) {
        const int base = b * attrs;
        const double obj = sigmoid(raw.at(base + 4, y, x));
        int best = 0;
        double best_p = -1;
        for (int c = 0; c < p.class_count; ++c) {
          const double pc = sigmoid(raw.at(base + 5 + c, y, x));
          if (pc > best_p) {
            best_p = pc;
            best = c;
          }
        }
        const double conf = std::min(obj * best_p, below_one);
        if (conf < p.conf_threshold) continue;
        const double cx = (x + sigmoid(raw.at(base + 0, y, x))) * p.stride;
        const double cy = (y + sigmoid(raw.at(base + 1, y, x))) * p.stride;
        const double w = p.anchors[static_cast<std::size_t>(b)].w * std::exp(static_cast<double>(raw.at(base + 2, y, x)));
        const double h = p.anchors[static_cast<std::size_t>(b)].h * std::exp(static_cast<double>(raw.at(base + 3, y, x)));
        Detection d{{cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2}, best, conf};
        if (d.box.valid() && std::isfinite(d.box.area())) out.push_back(d);
      }
    }
  }
  return out;
}

std::vector<Detection> nms(const std::vector<Detection>& dets, const NmsOptions& options) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (dets[a].confidence != dets[b].confidence) return dets[a].confidence > dets[b].confidence;
    return dets[a].class_id < dets[b].class_id;
  });
  std::vector<Detection> kept;
  for (std::size_t i : order) {
    const auto& d = dets[i];
    bool keep = true;
    for (const auto& k : kept) {
      if (!options.class_agnostic && k.class_id != d.class_id) continue;
      if (iou(k.box, d.box) >= options.iou_threshold) {
        keep = false;
        break;
      }
    }
    if (keep) kept.push_back(d);
  }
  return kept;
}

std::string detections_to_text(const std::vector<Detection>& dets) {
  std::string out;
  for (const auto& d : dets) {
    out += std::to_string(d.class_id);
    for (double v : {d.confidence, d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max}) {
      out.push_back(' ');
      out += format_double(v);
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<Detection> detections_from_text(std::string_view text) {
  std::vector<Detection> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j > i) fields.push_back(line.substr(i, j - i));
      i = j;
    }
    if (fields.empty()) continue;
    auto bad = [&](const std::string& why) {
      fail(ErrorKind::parse, "detections line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 6) bad("expected 6 fields, got " + std::to_string(fields.size()));
    Detection d;
    double vals[5];
    auto r = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), d.class_id);
    if (r.ec != std::errc{} || r.ptr != fields[0].data() + fields[0].size() || d.class_id < 0)
      bad("bad class id");
    for (int k = 0; k < 5; ++k) {
      auto f = fields[static_cast<std::size_t>(k) + 1];
      auto res = std::from_chars(f.data(), f.data() + f.size(), vals[k]);
      if (res.ec != std::errc{} || res.ptr != f.data() + f.size()) bad("bad number '" + std::string(f) + "'");
    }
    d.confidence = vals[0];
    d.box = {vals[1], vals[2], vals[3], vals[4]};
    if (!(d.confidence >= 0 && d.confidence <= 1)) bad("confidence outside [0, 1]");
    if (!d.box.valid()) bad("degenerate box");
    out.push_back(d);
  }
  return out;
}

std::string detections_to_json(const std::vector<Detection>& dets) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& d : dets)
    arr.push_back({{"class_id", d.class_id},
                   {"confidence", d.confidence},
                   {"x_min", d.box.x_min},
                   {"y_min", d.box.y_min},
                   {"x_max", d.box.x_max},
                   {"y_max", d.box.y_max}});
  return arr.dump(1) + "\n";
}

std::vector<Detection> detections_from_json(std::string_view text) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, std::string("detections json: ") + e.what());
  }
  if (!arr.is_array()) fail(ErrorKind::parse, "detections json: expected an array");
  std::vector<Detection> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& o = arr[i];
    try {
      Detection d;
      d.class_id = o.at("class_id").get<int>();
      d.confidence = o.at("confidence").get<double>();
      d.box = {o.at("x_min").get<double>(), o.at("y_min").get<double>(), o.at("x_max").get<double>(),
               o.at("y_max").get<double>()};
      if (d.class_id < 0 || !(d.confidence >= 0 && d.confidence <= 1) || !d.box.valid())
        fail(ErrorKind::parse, "detections json entry " + std::to_string(i) + ": out of range");
      out.push_back(d);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::parse, "detections json entry " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace yolos
