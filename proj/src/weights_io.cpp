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

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "yolos/engine.hpp"
#include "yolos/error.hpp"
#include "yolos/io.hpp"

namespace yolos {
namespace {

static_assert(std::endian::native == std::endian::little,
              "weight files are read with native little-endian loads");

constexpr std::string_view kTextMagic = "yolos-weights";

// Visits each float block of the set in file order.
template <typename Fn>
void for_each_block(const NetworkGraph& graph, WeightSet& ws, Fn&& fn) {
  for (std::size_t i = 0; i < graph.layers.size(); ++i) {
    if (!ws.layers[i]) continue;
    auto& w = *ws.layers[i];
    fn(w.biases);
    if (graph.layers[i].batch_norm) {
      fn(w.scales);
      fn(w.rolling_mean);
      fn(w.rolling_variance);
    }
    fn(w.kernel);
  }
}

WeightSet read_binary(const std::string& bytes, const std::filesystem::path& path,
                      const NetworkGraph& graph) {
  WeightSet ws = WeightSet::zeros(graph);
  if (bytes.size() < 5 * sizeof(std::int32_t))
    fail(ErrorKind::parse, path.string() + ": truncated weight header");
  std::int32_t header[5];
  std::memcpy(header, bytes.data(), sizeof header);
  if (header[0] != kWeightsMagic) fail(ErrorKind::parse, path.string() + ": bad weight file magic");
  ws.major = header[1];
  ws.minor = header[2];
  ws.revision = header[3];
  ws.seen = header[4];
  std::size_t offset = sizeof header;
  for_each_block(graph, ws, [&](std::vector<float>& block) {
    const std::size_t n = block.size() * sizeof(float);
    if (bytes.size() - offset < n)
      fail(ErrorKind::parse, path.string() + ": weight file ends early at byte " + std::to_string(bytes.size()));
    std::memcpy(block.data(), bytes.data() + offset, n);
    offset += n;
  });
  if (offset != bytes.size())
    fail(ErrorKind::parse, path.string() + ": " + std::to_string(bytes.size() - offset) +
                               " trailing bytes after the last layer");
  return ws;
}

WeightSet read_text(const std::string& text, const std::filesystem::path& path,
                    const NetworkGraph& graph) {
  std::string cleaned;
  cleaned.reserve(text.size());
  bool comment = false;
  for (char c : text) {
    if (c == '#') comment = true;
    if (c == '\n') comment = false;
    cleaned.push_back(comment ? ' ' : c);
  }
  std::istringstream is(cleaned);
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != kTextMagic || version != 1)
    fail(ErrorKind::parse, path.string() + ": expected '" + std::string(kTextMagic) + " 1' header");
  WeightSet ws = WeightSet::zeros(graph);
  std::string tok;
  for_each_block(graph, ws, [&](std::vector<float>& block) {
    for (auto& v : block) {
      if (!(is >> tok)) fail(ErrorKind::parse, path.string() + ": too few weight values");
      auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        fail(ErrorKind::parse, path.string() + ": bad weight value '" + tok + "'");
    }
  });
  if (is >> tok) fail(ErrorKind::parse, path.string() + ": extra weight values after the last layer");
  return ws;
}

}  // namespace

void write_weights(const std::filesystem::path& path, const NetworkGraph& graph,
                   const WeightSet& weights) {
  check_weights(graph, weights);
  std::string bytes;
  const std::int32_t header[5] = {kWeightsMagic, weights.major, weights.minor, weights.revision,
                                  weights.seen};
  bytes.append(reinterpret_cast<const char*>(header), sizeof header);
  WeightSet copy = weights;
  for_each_block(graph, copy, [&](std::vector<float>& block) {
    bytes.append(reinterpret_cast<const char*>(block.data()), block.size() * sizeof(float));
  });
  write_file_atomic(path, bytes);
}

void write_weights_text(const std::filesystem::path& path, const NetworkGraph& graph,
                        const WeightSet& weights) {
  check_weights(graph, weights);
  std::string out = std::string(kTextMagic) + " 1\n";
  WeightSet copy = weights;
  char buf[32];
  for_each_block(graph, copy, [&](std::vector<float>& block) {
    for (std::size_t j = 0; j < block.size(); ++j) {
      auto res = std::to_chars(buf, buf + sizeof buf, block[j]);
      out.append(buf, res.ptr);
      out.push_back(j + 1 == block.size() ? '\n' : ' ');
    }
  });
  write_file_atomic(path, out);
}

WeightSet read_weights(const std::filesystem::path& path, const NetworkGraph& graph) {
  const std::string bytes = read_file(path);
  if (bytes.compare(0, kTextMagic.size(), kTextMagic) == 0) return read_text(bytes, path, graph);
  return read_binary(bytes, path, graph);
}

}  // namespace yolos
