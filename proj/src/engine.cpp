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

#include "yolos/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "yolos/analysis.hpp"
#include "yolos/parallel.hpp"

namespace yolos {
namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

// floor(a / b) for b > 0 and any sign of a.
int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

void check_conv(const LayerSpec& layer, int in_channels, const ConvWeights& w) {
  const auto f = static_cast<std::size_t>(layer.filters);
  const auto k = static_cast<std::size_t>(layer.kernel);
  const std::size_t kernel = k * k * static_cast<std::size_t>(in_channels) * f;
  const std::size_t bn = layer.batch_norm ? f : 0;
  if (w.kernel.size() != kernel || w.biases.size() != f || w.scales.size() != bn ||
      w.rolling_mean.size() != bn || w.rolling_variance.size() != bn)
    fail(ErrorKind::shape, "conv weights hold " + std::to_string(w.count()) + " values, layer needs " +
                               std::to_string(conv_params(layer, in_channels)));
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

WeightSet WeightSet::zeros(const NetworkGraph& graph) {
  const auto shapes = infer_shapes(graph);
  WeightSet ws;
  ws.layers.resize(graph.layers.size());
  for (std::size_t i = 0; i < graph.layers.size(); ++i) {
    const auto& l = graph.layers[i];
    if (l.kind != LayerKind::conv) continue;
    const int cin = i == 0 ? graph.input_shape.channels : shapes[i - 1].channels;
    const auto f = static_cast<std::size_t>(l.filters);
    const auto k = static_cast<std::size_t>(l.kernel);
    ConvWeights w;
    w.biases.assign(f, 0.0f);
    if (l.batch_norm) {
      w.scales.assign(f, 0.0f);
      w.rolling_mean.assign(f, 0.0f);
      w.rolling_variance.assign(f, 1.0f);
    }
    w.kernel.assign(k * k * static_cast<std::size_t>(cin) * f, 0.0f);
    ws.layers[i] = std::move(w);
  }
  return ws;
}

WeightSet WeightSet::random(const NetworkGraph& graph, std::uint64_t seed) {
  WeightSet ws = zeros(graph);
  std::mt19937_64 rng(seed);
  const auto shapes = infer_shapes(graph);
  for (std::size_t i = 0; i < ws.layers.size(); ++i) {
    if (!ws.layers[i]) continue;
    auto& w = *ws.layers[i];
    const auto& l = graph.layers[i];
    const int cin = i == 0 ? graph.input_shape.channels : shapes[i - 1].channels;
    const double bound = std::sqrt(3.0 / (static_cast<double>(l.kernel * l.kernel) * cin));
    for (auto& v : w.kernel) v = static_cast<float>((2.0 * uniform01(rng) - 1.0) * bound);
    for (auto& v : w.biases) v = static_cast<float>(0.1 * (2.0 * uniform01(rng) - 1.0));
    std::fill(w.scales.begin(), w.scales.end(), 1.0f);
  }
  return ws;
}

void check_weights(const NetworkGraph& graph, const WeightSet& weights) {
  if (weights.layers.size() != graph.layers.size())
    fail(ErrorKind::shape, "weight set covers " + std::to_string(weights.layers.size()) +
                               " layers, graph has " + std::to_string(graph.layers.size()));
  const auto shapes = infer_shapes(graph);
  for (std::size_t i = 0; i < graph.layers.size(); ++i) {
    const auto& l = graph.layers[i];
    const bool is_conv = l.kind == LayerKind::conv;
    if (is_conv != weights.layers[i].has_value())
      fail(ErrorKind::shape, "layer " + std::to_string(i) +
                                 (is_conv ? ": conv without weights" : ": weights on a non-conv layer"));
    if (!is_conv) continue;
    const int cin = i == 0 ? graph.input_shape.channels : shapes[i - 1].channels;
    try {
      check_conv(l, cin, *weights.layers[i]);
    } catch (const Error& e) {
      fail(ErrorKind::shape, "layer " + std::to_string(i) + ": " + e.what());
    }
  }
}

Tensor conv2d(const Tensor& in, const LayerSpec& layer, const ConvWeights& weights, int threads) {
  if (layer.kind != LayerKind::conv) fail(ErrorKind::shape, "conv2d on a non-conv layer");
  check_conv(layer, in.channels(), weights);

  const int k = layer.kernel, s = layer.stride, pad = k / 2;
  const int W = in.width(), H = in.height(), C = in.channels();
  const int OW = ceil_div(W, s), OH = ceil_div(H, s), F = layer.filters;
  Tensor out(Shape{OW, OH, F});
  const float* kernel = weights.kernel.data();

  parallel_for(static_cast<std::size_t>(F), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t oc = begin; oc < end; ++oc) {
      float* __restrict o = out.plane(static_cast<int>(oc)).data();
      for (int ic = 0; ic < C; ++ic) {
        const float* __restrict ip = in.plane(ic).data();
        for (int ky = 0; ky < k; ++ky) {
          for (int kx = 0; kx < k; ++kx) {
            const float wv = kernel[((oc * static_cast<std::size_t>(C) + static_cast<std::size_t>(ic)) *
                                         static_cast<std::size_t>(k) + static_cast<std::size_t>(ky)) *
                                        static_cast<std::size_t>(k) + static_cast<std::size_t>(kx)];
            const int shift = kx - pad;
            const int x0 = std::max(0, -floor_div(shift, s));
            const int x1 = std::min(OW, floor_div(W - 1 - shift, s) + 1);
            if (x0 >= x1) continue;
            for (int oy = 0; oy < OH; ++oy) {
              const int iy = oy * s + ky - pad;
              if (iy < 0 || iy >= H) continue;
              const float* __restrict row = ip + static_cast<std::ptrdiff_t>(iy) * W;
              float* __restrict orow = o + static_cast<std::ptrdiff_t>(oy) * OW;
              if (s == 1) {
                const float* __restrict src = row + shift;
                for (int ox = x0; ox < x1; ++ox) orow[ox] += wv * src[ox];
              } else {
                for (int ox = x0; ox < x1; ++ox) orow[ox] += wv * row[ox * s + shift];
              }
            }
          }
        }
      }

      const std::size_t n = static_cast<std::size_t>(OW) * static_cast<std::size_t>(OH);
      if (layer.batch_norm) {
        const float mean = weights.rolling_mean[oc];
        const float stddev = std::sqrt(weights.rolling_variance[oc] + kBatchNormEpsilon);
        const float gamma = weights.scales[oc];
        const float beta = weights.biases[oc];
        for (std::size_t j = 0; j < n; ++j) o[j] = gamma * ((o[j] - mean) / stddev) + beta;
      } else {
        const float bias = weights.biases[oc];
        for (std::size_t j = 0; j < n; ++j) o[j] += bias;
      }
      if (layer.activation == Activation::leaky)
        for (std::size_t j = 0; j < n; ++j) o[j] = o[j] > 0.0f ? o[j] : kLeakySlope * o[j];
    }
  });
  return out;
}

Tensor reshape_passthrough(const Tensor& in) {
  const int W = in.width(), H = in.height(), C = in.channels();
  if (W % 2 || H % 2)
    fail(ErrorKind::shape, "reshape-passthrough needs even spatial dims, got " + to_string(in.shape()));
  Tensor out(Shape{W / 2, H / 2, 4 * C});
  for (int c = 0; c < C; ++c)
    for (int dy = 0; dy < 2; ++dy)
      for (int dx = 0; dx < 2; ++dx) {
        const int oc = 4 * c + 2 * dy + dx;
        for (int y = 0; y < H / 2; ++y)
          for (int x = 0; x < W / 2; ++x) out.at(oc, y, x) = in.at(c, 2 * y + dy, 2 * x + dx);
      }
  return out;
}

Tensor upsample2x(const Tensor& in) {
  const int W = in.width(), H = in.height(), C = in.channels();
  Tensor out(Shape{2 * W, 2 * H, C});
  for (int c = 0; c < C; ++c)
    for (int y = 0; y < 2 * H; ++y)
      for (int x = 0; x < 2 * W; ++x) out.at(c, y, x) = in.at(c, y / 2, x / 2);
  return out;
}

Tensor maxpool(const Tensor& in, int kernel, int stride) {
  if (kernel < 1 || stride < 1) fail(ErrorKind::shape, "maxpool kernel and stride must be >= 1");
  const int W = in.width(), H = in.height(), C = in.channels();
  const int OW = ceil_div(W, stride), OH = ceil_div(H, stride);
  const int offset = (kernel - 1) / 2;
  Tensor out(Shape{OW, OH, C});
  for (int c = 0; c < C; ++c)
    for (int oy = 0; oy < OH; ++oy)
      for (int ox = 0; ox < OW; ++ox) {
        float best = -std::numeric_limits<float>::infinity();
        for (int ky = 0; ky < kernel; ++ky)
          for (int kx = 0; kx < kernel; ++kx) {
            const int y = oy * stride + ky - offset, x = ox * stride + kx - offset;
            if (y >= 0 && y < H && x >= 0 && x < W) best = std::max(best, in.at(c, y, x));
          }
        out.at(c, oy, ox) = best;
      }
  return out;
}

std::vector<Tensor> forward(const NetworkGraph& graph, const WeightSet& weights,
                            const Tensor& image, const ForwardOptions& options) {
  if (image.shape() != graph.input_shape)
    fail(ErrorKind::shape, "input " + to_string(image.shape()) + " does not match network input " +
                               to_string(graph.input_shape));
  const auto expected = infer_shapes(graph);
  check_weights(graph, weights);

  const std::size_t n = graph.layers.size();
  // Last layer reading each output; tensors are released after it runs.
  std::vector<std::size_t> last_use(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& l = graph.layers[i];
    if (l.kind == LayerKind::route) {
      for (int src : l.route_sources) last_use[static_cast<std::size_t>(src)] = i;
    } else if (i > 0) {
      last_use[i - 1] = i;
    }
    if (l.residual_partner) last_use[static_cast<std::size_t>(*l.residual_partner)] = i;
  }

  std::vector<Tensor> outputs(n);
  std::vector<Tensor> heads;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& l = graph.layers[i];
    const Tensor& prev = i == 0 ? image : outputs[i - 1];
    Tensor out;
    switch (l.kind) {
      case LayerKind::conv: {
        out = conv2d(prev, l, *weights.layers[i], options.threads);
        if (l.residual_partner) {
          const auto& add = outputs[static_cast<std::size_t>(*l.residual_partner)];
          auto dst = out.data();
          auto src = add.data();
          for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
        }
        break;
      }
      case LayerKind::maxpool:
        out = maxpool(prev, l.kernel, l.stride);
        break;
      case LayerKind::upsample:
        out = upsample2x(prev);
        break;
      case LayerKind::reshape_passthrough:
        out = reshape_passthrough(prev);
        break;
      case LayerKind::route: {
        const auto& first = outputs[static_cast<std::size_t>(l.route_sources.front())];
        int channels = 0;
        for (int src : l.route_sources) channels += outputs[static_cast<std::size_t>(src)].channels();
        std::vector<float> data;
        data.reserve(static_cast<std::size_t>(first.width()) * static_cast<std::size_t>(first.height()) *
                     static_cast<std::size_t>(channels));
        for (int src : l.route_sources) {
          const auto part = outputs[static_cast<std::size_t>(src)].data();
          data.insert(data.end(), part.begin(), part.end());
        }
        out = Tensor(Shape{first.width(), first.height(), channels}, std::move(data));
        break;
      }
      case LayerKind::yolo_head:
        out = prev;
        heads.push_back(prev);
        break;
    }
    if (out.shape() != expected[i])
      fail(ErrorKind::shape, "layer " + std::to_string(i) + ": runtime shape " + to_string(out.shape()) +
                                 " differs from inferred " + to_string(expected[i]));
    outputs[i] = std::move(out);
    for (std::size_t j = 0; j < i; ++j)
      if (last_use[j] == i) outputs[j] = Tensor();
  }
  return heads;
}

}  // namespace yolos
