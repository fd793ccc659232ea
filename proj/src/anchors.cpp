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

#include "yolos/anchors.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "yolos/error.hpp"

namespace yolos {
namespace {

double area(const BoxDims& b) { return b.w * b.h; }

bool area_less(const BoxDims& a, const BoxDims& b) {
  const double aa = area(a), ab = area(b);
  if (aa != ab) return aa < ab;
  if (a.w != b.w) return a.w < b.w;
  return a.h < b.h;
}

// Portable uniform in [0, 1): the top 53 bits of a 64-bit Mersenne draw.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t nearest(const BoxDims& b, const std::vector<BoxDims>& centroids, double* best_iou) {
  std::size_t best = 0;
  double bi = -1;
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double v = centered_iou(b, centroids[c]);
    if (v > bi) {
      bi = v;
      best = c;
    }
  }
  if (best_iou) *best_iou = bi;
  return best;
}

std::vector<BoxDims> seed_plus_plus(const std::vector<BoxDims>& pts, int k, std::mt19937_64& rng) {
  std::vector<BoxDims> centroids;
  centroids.push_back(pts[static_cast<std::size_t>(uniform01(rng) * static_cast<double>(pts.size()))]);
  std::vector<double> d2(pts.size());
  while (static_cast<int>(centroids.size()) < k) {
    double total = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double iou = 0;
      nearest(pts[i], centroids, &iou);
      const double d = 1.0 - iou;
      d2[i] = d * d;
      total += d2[i];
    }
    // Points already chosen have distance 0 and are never drawn again.
    const double target = uniform01(rng) * total;
    double acc = 0;
    std::size_t pick = pts.size();
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (d2[i] <= 0) continue;
      last_positive = i;
      acc += d2[i];
      if (acc > target) {
        pick = i;
        break;
      }
    }
    if (pick == pts.size()) pick = last_positive;
    centroids.push_back(pts[pick]);
  }
  return centroids;
}

}  // namespace

double centered_iou(const BoxDims& a, const BoxDims& b) {
  const double inter = std::min(a.w, b.w) * std::min(a.h, b.h);
  return inter / (area(a) + area(b) - inter);
}

KMeansResult kmeans_iou(const std::vector<BoxDims>& dims, const KMeansOptions& options) {
  if (options.k < 1) fail(ErrorKind::invalid_argument, "k must be >= 1");
  if (dims.empty()) fail(ErrorKind::invalid_argument, "no boxes to cluster");
  for (const auto& d : dims)
    if (!(d.w > 0 && d.h > 0)) fail(ErrorKind::invalid_argument, "box dims must be positive");

  std::vector<BoxDims> pts = dims;
  std::sort(pts.begin(), pts.end(), area_less);
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i] != pts[i - 1]) ++distinct;
  if (static_cast<std::size_t>(options.k) > distinct)
    fail(ErrorKind::invalid_argument, "k = " + std::to_string(options.k) + " exceeds " +
                                          std::to_string(distinct) + " distinct boxes");

  std::mt19937_64 rng(options.seed);
  auto centroids = seed_plus_plus(pts, options.k, rng);

  const std::size_t k = centroids.size();
  std::vector<std::size_t> assign(pts.size(), k);
  KMeansResult result;

  auto assign_all = [&](const std::vector<BoxDims>& cs, std::vector<std::size_t>& to) {
    double sum = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double iou = 0;
      to[i] = nearest(pts[i], cs, &iou);
      sum += iou;
    }
    return sum / static_cast<double>(pts.size());
  };

  std::vector<std::size_t> next(pts.size());
  double mean = assign_all(centroids, assign);
  result.mean_iou_history.push_back(mean);

  for (int it = 0; it < options.max_iters; ++it) {
    std::vector<double> sw(k, 0.0), sh(k, 0.0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      sw[assign[i]] += pts[i].w;
      sh[assign[i]] += pts[i].h;
      ++count[assign[i]];
    }
    std::vector<BoxDims> updated = centroids;
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] == 0) continue;
      const double n = static_cast<double>(count[c]);
      updated[c] = {sw[c] / n, sh[c] / n};
    }
    // Empty clusters restart at the point worst served by its centroid.
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] != 0) continue;
      double worst = std::numeric_limits<double>::infinity();
      std::size_t far = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double v = centered_iou(pts[i], updated[assign[i]]);
        if (v < worst) {
          worst = v;
          far = i;
        }
      }
      updated[c] = pts[far];
      assign[far] = c;
    }

    const double next_mean = assign_all(updated, next);
    if (next_mean < mean) break;
    ++result.iterations;
    centroids = std::move(updated);
    mean = next_mean;
    result.mean_iou_history.push_back(mean);
    if (next == assign) {
      result.converged = true;
      break;
    }
    assign.swap(next);
  }

  std::sort(centroids.begin(), centroids.end(), area_less);
  result.anchors = std::move(centroids);
  return result;
}

std::vector<std::vector<Anchor>> assign_anchors(std::vector<Anchor> anchors,
                                                const std::vector<int>& head_strides) {
  if (head_strides.empty()) fail(ErrorKind::invalid_argument, "no heads to assign anchors to");
  const std::size_t heads = head_strides.size();
  if (anchors.empty() || anchors.size() % heads != 0)
    fail(ErrorKind::invalid_argument, std::to_string(anchors.size()) + " anchors cannot be split over " +
                                          std::to_string(heads) + " heads");
  std::stable_sort(anchors.begin(), anchors.end(), area_less);

  // Heads ranked by stride, smallest first; rank r takes the r-th run.
  std::vector<std::size_t> order(heads);
  for (std::size_t i = 0; i < heads; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return head_strides[a] < head_strides[b];
  });
  const std::size_t run = anchors.size() / heads;
  std::vector<std::vector<Anchor>> out(heads);
  for (std::size_t r = 0; r < heads; ++r) {
    auto first = anchors.begin() + static_cast<std::ptrdiff_t>(r * run);
    out[order[r]].assign(first, first + static_cast<std::ptrdiff_t>(run));
  }
  return out;
}

}  // namespace yolos
