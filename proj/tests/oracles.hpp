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

// Reference implementations written independently of the library code, used
// to cross-check it on randomized inputs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "yolos/engine.hpp"
#include "yolos/metrics.hpp"
#include "yolos/postproc.hpp"

namespace oracle {

using yolos::Box;
using yolos::Detection;
using yolos::GroundTruth;

// Six nested loops, double accumulation, explicit zero padding.
inline std::vector<double> conv(const yolos::Tensor& in, const yolos::LayerSpec& l,
                                const yolos::ConvWeights& w) {
  const int k = l.kernel, s = l.stride, pad = k / 2;
  const int cin = in.channels(), cout = l.filters;
  const int ow = (in.width() + s - 1) / s, oh = (in.height() + s - 1) / s;
  std::vector<double> out(static_cast<std::size_t>(cout) * oh * ow);
  for (int o = 0; o < cout; ++o)
    for (int y = 0; y < oh; ++y)
      for (int x = 0; x < ow; ++x) {
        double acc = 0;
        for (int c = 0; c < cin; ++c)
          for (int ky = 0; ky < k; ++ky)
            for (int kx = 0; kx < k; ++kx) {
              const int iy = y * s + ky - pad, ix = x * s + kx - pad;
              if (iy < 0 || ix < 0 || iy >= in.height() || ix >= in.width()) continue;
              acc += static_cast<double>(w.kernel[((static_cast<std::size_t>(o) * cin + c) * k + ky) * k + kx]) *
                     in.at(c, iy, ix);
            }
        double v = acc;
        if (l.batch_norm) {
          v = w.scales[o] * (v - w.rolling_mean[o]) / std::sqrt(static_cast<double>(w.rolling_variance[o]) + 1e-5) +
              w.biases[o];
        } else {
          v += w.biases[o];
        }
        if (l.activation == yolos::Activation::leaky && v < 0) v *= 0.1;
        out[(static_cast<std::size_t>(o) * oh + y) * ow + x] = v;
      }
  return out;
}

// Every output element named by (channel, phase, y, x) enumeration.
inline std::vector<float> passthrough(const yolos::Tensor& in) {
  const int w = in.width() / 2, h = in.height() / 2;
  std::vector<float> out(in.size());
  std::size_t i = 0;
  for (int c = 0; c < in.channels(); ++c)
    for (int py = 0; py < 2; ++py)
      for (int px = 0; px < 2; ++px)
        for (int y = 0; y < h; ++y)
          for (int x = 0; x < w; ++x) out[i++] = in.at(c, 2 * y + py, 2 * x + px);
  return out;
}

inline double iou(const Box& a, const Box& b) {
  const double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
  const double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
  const double inter = ix * iy;
  const double u = (a.x_max - a.x_min) * (a.y_max - a.y_min) + (b.x_max - b.x_min) * (b.y_max - b.y_min) - inter;
  return u > 0 ? inter / u : 0;
}

// Indices in visiting priority: confidence desc, class asc, index asc.
inline std::vector<int> priority(const std::vector<Detection>& d) {
  std::vector<int> idx(d.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (d[a].confidence != d[b].confidence) return d[a].confidence > d[b].confidence;
    if (d[a].class_id != d[b].class_id) return d[a].class_id < d[b].class_id;
    return a < b;
  });
  return idx;
}

// Searches all 2^n subsets for those where each detection is kept iff no
// kept detection ahead of it in priority suppresses it. Greedy suppression
// is the unique such subset; returns every fixed point found, each in
// priority order.
inline std::vector<std::vector<Detection>> nms_fixed_points(const std::vector<Detection>& d, double thr,
                                                             bool agnostic) {
  const int n = static_cast<int>(d.size());
  const auto order = priority(d);
  std::vector<int> rank(n);
  for (int r = 0; r < n; ++r) rank[order[r]] = r;
  std::vector<std::vector<Detection>> found;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      bool suppressed = false;
      for (int j = 0; j < n; ++j)
        if ((mask >> j & 1u) && rank[j] < rank[i] && (agnostic || d[j].class_id == d[i].class_id) &&
            oracle::iou(d[j].box, d[i].box) >= thr)
          suppressed = true;
      ok = ((mask >> i & 1u) != 0) == !suppressed;
    }
    if (!ok) continue;
    std::vector<Detection> kept;
    for (int i : order)
      if (mask >> i & 1u) kept.push_back(d[i]);
    found.push_back(kept);
  }
  return found;
}

// Greedy matching coded as: for each detection in confidence order, walk
// the same-class gts by IoU descending and take the first free one, if its
// IoU clears the threshold. Returns per-detection TP flags.
inline std::vector<bool> match(const std::vector<Detection>& d, const std::vector<GroundTruth>& g, double thr) {
  std::vector<int> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a].confidence > d[b].confidence; });
  std::vector<bool> taken(g.size(), false), tp(d.size(), false);
  for (int i : order) {
    std::vector<int> cand;
    for (int j = 0; j < static_cast<int>(g.size()); ++j)
      if (g[j].class_id == d[i].class_id) cand.push_back(j);
    std::stable_sort(cand.begin(), cand.end(),
                     [&](int a, int b) { return oracle::iou(d[i].box, g[a].box) > oracle::iou(d[i].box, g[b].box); });
    for (int j : cand) {
      if (taken[j]) continue;
      if (oracle::iou(d[i].box, g[j].box) >= thr) {
        taken[j] = true;
        tp[i] = true;
      }
      break;
    }
  }
  return tp;
}

// Precision at each rank; AP sums recall increments times the best
// precision found at any rank reaching at least that recall (quadratic).
inline double ap(std::vector<std::pair<double, bool>> ranked, int positives) {
  std::stable_sort(ranked.begin(), ranked.end(), [](auto& a, auto& b) { return a.first > b.first; });
  const int n = static_cast<int>(ranked.size());
  std::vector<double> rec(n), prec(n);
  int tp = 0;
  for (int i = 0; i < n; ++i) {
    tp += ranked[i].second;
    rec[i] = double(tp) / positives;
    prec[i] = double(tp) / (i + 1);
  }
  double total = 0;
  for (int i = 0; i < n; ++i) {
    if (!ranked[i].second) continue;
    double best = 0;
    for (int j = 0; j < n; ++j)
      if (rec[j] >= rec[i]) best = std::max(best, prec[j]);
    total += best / positives;
  }
  return total;
}

// Mean over classes with ground truth of the per-class AP.
inline std::optional<double> map(const std::vector<Detection>& d, const std::vector<GroundTruth>& g, double thr) {
  const auto tp = oracle::match(d, g, thr);
  int classes = 0;
  for (auto& x : d) classes = std::max(classes, x.class_id + 1);
  for (auto& x : g) classes = std::max(classes, x.class_id + 1);
  double sum = 0;
  int counted = 0;
  for (int c = 0; c < classes; ++c) {
    int p = 0;
    for (auto& x : g) p += x.class_id == c;
    if (!p) continue;
    std::vector<std::pair<double, bool>> ranked;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i].class_id == c) ranked.emplace_back(d[i].confidence, tp[i]);
    sum += ap(ranked, p);
    ++counted;
  }
  if (!counted) return std::nullopt;
  return sum / counted;
}

}  // namespace oracle
