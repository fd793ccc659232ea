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
#include <vector>

#include "yolos/netdef.hpp"

namespace yolos {

using BoxDims = Anchor;

// IoU of two boxes sharing a center; the k-means distance is 1 - this.
double centered_iou(const BoxDims& a, const BoxDims& b);

struct KMeansOptions {
  int k = 9;
  std::uint64_t seed = 0;
  int max_iters = 300;
};

struct KMeansResult {
  std::vector<BoxDims> anchors;        // ascending area
  std::vector<double> mean_iou_history;  // one entry per accepted assignment
  int iterations = 0;
  bool converged = false;
};

// Lloyd's algorithm under d = 1 - IoU with k-means++ seeding. Input order
// does not matter: boxes are canonicalised before clustering. An update that
// would lower the mean IoU is rejected and iteration stops, so the history is
// nondecreasing.
KMeansResult kmeans_iou(const std::vector<BoxDims>& dims, const KMeansOptions& options);

// Splits area-sorted anchors into contiguous runs, one per head. The head
// with the largest stride gets the largest anchors. A single head takes all.
std::vector<std::vector<Anchor>> assign_anchors(std::vector<Anchor> anchors,
                                                const std::vector<int>& head_strides);

}  // namespace yolos
