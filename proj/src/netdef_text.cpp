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

// Text serialization of NetworkGraph.
//
//   # comment
//   net name=yolo_s width=416 height=416 channels=3
//   0 conv filters=32 size=3 stride=1 bn=1 activation=leaky
//   3 conv filters=64 size=3 stride=1 bn=1 activation=leaky residual=1
//   21 route layers=8
//   29 yolo classes=80 boxes=3 anchors=10,13,16,30,33,23
//
// Keys not listed for a kind are rejected. Indices must be consecutive from 0.

#include <charconv>
#include <map>
#include <sstream>
#include <string>

#include "yolos/error.hpp"
#include "yolos/netdef.hpp"

namespace yolos {
namespace {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

class LineParser {
 public:
  LineParser(int line_no, const std::vector<std::string_view>& toks, std::size_t first)
      : line_(line_no) {
    for (std::size_t i = first; i < toks.size(); ++i) {
      auto eq = toks[i].find('=');
      if (eq == std::string_view::npos || eq == 0) error("expected key=value, got '" + std::string(toks[i]) + "'");
      auto key = std::string(toks[i].substr(0, eq));
      if (!kv_.emplace(key, toks[i].substr(eq + 1)).second) error("duplicate key '" + key + "'");
    }
  }

  int integer(const std::string& key, std::optional<int> fallback = std::nullopt) {
    auto it = kv_.find(key);
    if (it == kv_.end()) {
      if (fallback) return *fallback;
      error("missing key '" + key + "'");
    }
    int v = 0;
    if (!parse_number(it->second, v)) error("bad integer for '" + key + "'");
    kv_.erase(it);
    return v;
  }

  std::optional<std::string_view> take(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    auto v = it->second;
    kv_.erase(it);
    return v;
  }

  std::vector<int> int_list(const std::string& key) {
    auto v = take(key);
    if (!v) error("missing key '" + key + "'");
    std::vector<int> out;
    for (auto part : split(*v, ',')) {
      int x = 0;
      if (!parse_number(part, x)) error("bad integer list for '" + key + "'");
      out.push_back(x);
    }
    return out;
  }

  std::vector<double> double_list(const std::string& key) {
    auto v = take(key);
    if (!v) error("missing key '" + key + "'");
    std::vector<double> out;
    for (auto part : split(*v, ',')) {
      double x = 0;
      if (!parse_number(part, x)) error("bad number list for '" + key + "'");
      out.push_back(x);
    }
    return out;
  }

  void finish() {
    if (!kv_.empty()) error("unexpected key '" + kv_.begin()->first + "'");
  }

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::parse, "network text line " + std::to_string(line_) + ": " + msg);
  }

 private:
  int line_;
  std::map<std::string, std::string_view> kv_;
};

}  // namespace

std::string to_text(const NetworkGraph& graph) {
  std::ostringstream os;
  os << "# yolos network v1\n";
  os << "net name=" << (graph.name.empty() ? "unnamed" : graph.name)
     << " width=" << graph.input_shape.width << " height=" << graph.input_shape.height
     << " channels=" << graph.input_shape.channels << '\n';
  for (std::size_t i = 0; i < graph.layers.size(); ++i) {
    const auto& l = graph.layers[i];
    os << i << ' ' << to_string(l.kind);
    switch (l.kind) {
      case LayerKind::conv:
        os << " filters=" << l.filters << " size=" << l.kernel << " stride=" << l.stride
           << " bn=" << (l.batch_norm ? 1 : 0)
           << " activation=" << (l.activation == Activation::leaky ? "leaky" : "linear");
        if (l.residual_partner) os << " residual=" << *l.residual_partner;
        break;
      case LayerKind::maxpool:
        os << " size=" << l.kernel << " stride=" << l.stride;
        break;
      case LayerKind::route:
        os << " layers=";
        for (std::size_t j = 0; j < l.route_sources.size(); ++j)
          os << (j ? "," : "") << l.route_sources[j];
        break;
      case LayerKind::yolo_head:
        if (const auto* h = graph.head_at(static_cast<int>(i))) {
          os << " classes=" << h->class_count << " boxes=" << h->boxes_per_cell << " anchors=";
          for (std::size_t j = 0; j < h->anchors.size(); ++j)
            os << (j ? "," : "") << format_double(h->anchors[j].w) << ','
               << format_double(h->anchors[j].h);
        }
        break;
      case LayerKind::upsample:
      case LayerKind::reshape_passthrough:
        break;
    }
    os << '\n';
  }
  return os.str();
}

NetworkGraph parse_text(std::string_view text) {
  NetworkGraph g;
  bool have_header = false;
  int line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    auto hash = raw.find('#');
    auto toks = tokens(raw.substr(0, hash));
    if (toks.empty()) continue;

    if (!have_header) {
      LineParser p(line_no, toks, 1);
      if (toks[0] != "net") p.error("expected 'net' header line");
      if (auto name = p.take("name")) g.name = std::string(*name);
      g.input_shape.width = p.integer("width");
      g.input_shape.height = p.integer("height");
      g.input_shape.channels = p.integer("channels");
      p.finish();
      have_header = true;
      continue;
    }

    LineParser p(line_no, toks, 2);
    if (toks.size() < 2) p.error("expected 'index kind'");
    int index = -1;
    if (!parse_number(toks[0], index) || index != static_cast<int>(g.layers.size()))
      p.error("expected layer index " + std::to_string(g.layers.size()));
    auto kind = parse_layer_kind(toks[1]);
    if (!kind) p.error("unknown layer kind '" + std::string(toks[1]) + "'");

    LayerSpec l;
    switch (*kind) {
      case LayerKind::conv: {
        l = LayerSpec::conv(p.integer("filters"), p.integer("size"), p.integer("stride", 1));
        l.batch_norm = p.integer("bn", 0) != 0;
        auto act = p.take("activation").value_or("linear");
        if (act == "leaky") l.activation = Activation::leaky;
        else if (act == "linear") l.activation = Activation::linear;
        else p.error("unknown activation '" + std::string(act) + "'");
        if (auto r = p.take("residual")) {
          int partner = 0;
          if (!parse_number(*r, partner)) p.error("bad residual index");
          l.residual_partner = partner;
        }
        break;
      }
      case LayerKind::maxpool:
        l = LayerSpec::maxpool(p.integer("size"), p.integer("stride"));
        break;
      case LayerKind::route:
        l = LayerSpec::route(p.int_list("layers"));
        break;
      case LayerKind::upsample:
        l = LayerSpec::upsample();
        break;
      case LayerKind::reshape_passthrough:
        l = LayerSpec::reshape_passthrough();
        break;
      case LayerKind::yolo_head: {
        l = LayerSpec::yolo_head();
        HeadSpec h;
        h.layer = index;
        h.class_count = p.integer("classes");
        h.boxes_per_cell = p.integer("boxes");
        auto vals = p.double_list("anchors");
        if (vals.size() % 2) p.error("anchors must be w,h pairs");
        for (std::size_t j = 0; j < vals.size(); j += 2) h.anchors.push_back({vals[j], vals[j + 1]});
        g.heads.push_back(std::move(h));
        break;
      }
    }
    p.finish();
    g.layers.push_back(std::move(l));
  }
  if (!have_header) fail(ErrorKind::parse, "network text: missing 'net' header line");
  return g;
}

}  // namespace yolos
