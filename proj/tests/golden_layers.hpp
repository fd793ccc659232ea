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

#include <string>
#include <vector>

#include "yolos/netdef.hpp"

// Per-layer reference rows at 416x416 input and 80 classes. Zero
// sizes mean the column is blank in the reference.
struct GoldenLayer {
  int index;
  std::string type;  // conv, upsample, route, reshape, yolo
  bool residual;     // marked as half of a residual pair
  std::vector<int> sources;
  int filters;
  int kernel;
  int stride;
  yolos::Shape input;
  yolos::Shape output;
  int cumulative_stride;
  int receptive_field;
};

inline const std::vector<GoldenLayer> kYoloLGolden = {
    {0, "conv", false, {}, 32, 3, 1, {416, 416, 3}, {416, 416, 32}, 1, 3},
    {1, "conv", false, {}, 64, 3, 2, {416, 416, 32}, {208, 208, 64}, 2, 5},
    {2, "conv", true, {}, 32, 1, 1, {208, 208, 64}, {208, 208, 32}, 2, 5},
    {3, "conv", true, {}, 64, 3, 1, {208, 208, 32}, {208, 208, 64}, 2, 9},
    {4, "conv", false, {}, 128, 3, 2, {208, 208, 64}, {104, 104, 128}, 4, 13},
    {5, "conv", true, {}, 64, 1, 1, {104, 104, 128}, {104, 104, 64}, 4, 13},
    {6, "conv", true, {}, 128, 3, 1, {104, 104, 64}, {104, 104, 128}, 4, 21},
    {7, "conv", true, {}, 64, 1, 1, {104, 104, 128}, {104, 104, 64}, 4, 21},
    {8, "conv", true, {}, 128, 3, 1, {104, 104, 64}, {104, 104, 128}, 4, 29},
    {9, "conv", false, {}, 256, 3, 2, {104, 104, 128}, {52, 52, 256}, 8, 37},
    {10, "conv", true, {}, 128, 1, 1, {52, 52, 256}, {52, 52, 128}, 8, 37},
    {11, "conv", true, {}, 256, 3, 1, {52, 52, 128}, {52, 52, 256}, 8, 53},
    {12, "conv", true, {}, 128, 1, 1, {52, 52, 256}, {52, 52, 128}, 8, 53},
    {13, "conv", true, {}, 256, 3, 1, {52, 52, 128}, {52, 52, 256}, 8, 69},
    {14, "conv", true, {}, 128, 1, 1, {52, 52, 256}, {52, 52, 128}, 8, 69},
    {15, "conv", true, {}, 256, 3, 1, {52, 52, 128}, {52, 52, 256}, 8, 85},
    {16, "conv", true, {}, 128, 1, 1, {52, 52, 256}, {52, 52, 128}, 8, 85},
    {17, "conv", true, {}, 256, 3, 1, {52, 52, 128}, {52, 52, 256}, 8, 101},
    {18, "conv", true, {}, 128, 1, 1, {52, 52, 256}, {52, 52, 128}, 8, 101},
    {19, "conv", true, {}, 256, 3, 1, {52, 52, 128}, {52, 52, 256}, 8, 117},
    {20, "conv", true, {}, 128, 1, 1, {52, 52, 256}, {52, 52, 128}, 8, 117},
    {21, "conv", true, {}, 256, 3, 1, {52, 52, 128}, {52, 52, 256}, 8, 133},
    {22, "conv", true, {}, 128, 1, 1, {52, 52, 256}, {52, 52, 128}, 8, 133},
    {23, "conv", true, {}, 256, 3, 1, {52, 52, 128}, {52, 52, 256}, 8, 149},
    {24, "conv", true, {}, 128, 1, 1, {52, 52, 256}, {52, 52, 128}, 8, 149},
    {25, "conv", true, {}, 256, 3, 1, {52, 52, 128}, {52, 52, 256}, 8, 165},
    {26, "conv", false, {}, 512, 3, 2, {52, 52, 256}, {26, 26, 512}, 16, 181},
    {27, "conv", true, {}, 256, 1, 1, {26, 26, 512}, {26, 26, 256}, 16, 181},
    {28, "conv", true, {}, 512, 3, 1, {26, 26, 256}, {26, 26, 512}, 16, 213},
    {29, "conv", true, {}, 256, 1, 1, {26, 26, 512}, {26, 26, 256}, 16, 213},
    {30, "conv", true, {}, 512, 3, 1, {26, 26, 256}, {26, 26, 512}, 16, 245},
    {31, "conv", true, {}, 256, 1, 1, {26, 26, 512}, {26, 26, 256}, 16, 245},
    {32, "conv", true, {}, 512, 3, 1, {26, 26, 256}, {26, 26, 512}, 16, 277},
    {33, "conv", true, {}, 256, 1, 1, {26, 26, 512}, {26, 26, 256}, 16, 277},
    {34, "conv", true, {}, 512, 3, 1, {26, 26, 256}, {26, 26, 512}, 16, 309},
    {35, "conv", true, {}, 256, 1, 1, {26, 26, 512}, {26, 26, 256}, 16, 309},
    {36, "conv", true, {}, 512, 3, 1, {26, 26, 256}, {26, 26, 512}, 16, 341},
    {37, "conv", true, {}, 256, 1, 1, {26, 26, 512}, {26, 26, 256}, 16, 341},
    {38, "conv", true, {}, 512, 3, 1, {26, 26, 256}, {26, 26, 512}, 16, 373},
    {39, "conv", true, {}, 256, 1, 1, {26, 26, 512}, {26, 26, 256}, 16, 373},
    {40, "conv", true, {}, 512, 3, 1, {26, 26, 256}, {26, 26, 512}, 16, 405},
    {41, "conv", true, {}, 256, 1, 1, {26, 26, 512}, {26, 26, 256}, 16, 405},
    {42, "conv", true, {}, 512, 3, 1, {26, 26, 256}, {26, 26, 512}, 16, 437},
    {43, "conv", false, {}, 256, 1, 1, {26, 26, 512}, {26, 26, 256}, 16, 437},
    {44, "conv", false, {}, 512, 3, 1, {26, 26, 256}, {26, 26, 512}, 16, 469},
    {45, "conv", false, {}, 256, 1, 1, {26, 26, 512}, {26, 26, 256}, 16, 469},
    {46, "conv", false, {}, 512, 3, 1, {26, 26, 256}, {26, 26, 512}, 16, 501},
    {47, "conv", false, {}, 256, 1, 1, {26, 26, 512}, {26, 26, 256}, 16, 501},
    {48, "conv", false, {}, 512, 3, 1, {26, 26, 256}, {26, 26, 512}, 16, 533},
    {49, "conv", false, {}, 255, 1, 1, {26, 26, 512}, {26, 26, 255}, 16, 533},
    {50, "yolo", false, {}, 0, 0, 0, {0, 0, 0}, {0, 0, 0}, 0, 0},
    {51, "route", false, {47}, 0, 0, 0, {0, 0, 0}, {0, 0, 0}, 0, 0},
    {52, "conv", false, {}, 128, 1, 1, {26, 26, 256}, {26, 26, 128}, 16, 501},
    {53, "upsample", false, {}, 0, 2, 1, {26, 26, 128}, {52, 52, 128}, 16, 501},
    {54, "route", false, {53, 25}, 0, 0, 0, {0, 0, 0}, {0, 0, 0}, 0, 0},
    {55, "conv", false, {}, 256, 1, 1, {52, 52, 384}, {52, 52, 256}, 8, 165},
    {56, "conv", false, {}, 512, 3, 1, {52, 52, 256}, {52, 52, 512}, 8, 181},
    {57, "conv", false, {}, 256, 1, 1, {52, 52, 512}, {52, 52, 256}, 8, 181},
    {58, "conv", false, {}, 512, 3, 1, {52, 52, 256}, {52, 52, 512}, 8, 197},
    {59, "conv", false, {}, 256, 1, 1, {52, 52, 512}, {52, 52, 256}, 8, 197},
    {60, "conv", false, {}, 512, 3, 1, {52, 52, 256}, {52, 52, 512}, 8, 213},
    {61, "conv", false, {}, 255, 1, 1, {52, 52, 512}, {52, 52, 255}, 8, 213},
    {62, "yolo", false, {}, 0, 0, 0, {0, 0, 0}, {0, 0, 0}, 0, 0},
    {63, "route", false, {59}, 0, 0, 0, {0, 0, 0}, {0, 0, 0}, 0, 0},
    {64, "conv", false, {}, 128, 1, 1, {52, 52, 256}, {52, 52, 128}, 8, 197},
    {65, "upsample", false, {}, 0, 2, 1, {52, 52, 128}, {104, 104, 128}, 8, 197},
    {66, "route", false, {65, 8}, 0, 0, 0, {0, 0, 0}, {0, 0, 0}, 0, 0},
    {67, "conv", false, {}, 128, 1, 1, {104, 104, 256}, {104, 104, 128}, 4, 29},
    {68, "conv", false, {}, 256, 3, 1, {104, 104, 128}, {104, 104, 256}, 4, 37},
    {69, "conv", false, {}, 128, 1, 1, {104, 104, 256}, {104, 104, 128}, 4, 37},
    {70, "conv", false, {}, 256, 3, 1, {104, 104, 128}, {104, 104, 256}, 4, 45},
    {71, "conv", false, {}, 128, 1, 1, {104, 104, 256}, {104, 104, 128}, 4, 45},
    {72, "conv", false, {}, 256, 3, 1, {104, 104, 128}, {104, 104, 256}, 4, 53},
    {73, "conv", false, {}, 255, 1, 1, {104, 104, 256}, {104, 104, 255}, 4, 53},
    {74, "yolo", false, {}, 0, 0, 0, {0, 0, 0}, {0, 0, 0}, 0, 0},
};

inline const std::vector<GoldenLayer> kYoloSGolden = {
    {0, "conv", false, {}, 32, 3, 1, {416, 416, 3}, {416, 416, 32}, 1, 3},
    {1, "conv", false, {}, 64, 3, 2, {416, 416, 32}, {208, 208, 64}, 2, 5},
    {2, "conv", true, {}, 32, 1, 1, {208, 208, 64}, {208, 208, 32}, 2, 5},
    {3, "conv", true, {}, 64, 3, 1, {208, 208, 32}, {208, 208, 64}, 2, 9},
    {4, "conv", false, {}, 128, 3, 2, {208, 208, 64}, {104, 104, 128}, 4, 13},
    {5, "conv", true, {}, 64, 1, 1, {104, 104, 128}, {104, 104, 64}, 4, 13},
    {6, "conv", true, {}, 128, 3, 1, {104, 104, 64}, {104, 104, 128}, 4, 21},
    {7, "conv", true, {}, 64, 1, 1, {104, 104, 128}, {104, 104, 64}, 4, 21},
    {8, "conv", true, {}, 128, 3, 1, {104, 104, 64}, {104, 104, 128}, 4, 29},
    {9, "conv", false, {}, 256, 3, 2, {104, 104, 128}, {52, 52, 256}, 8, 37},
    {10, "conv", true, {}, 128, 1, 1, {52, 52, 256}, {52, 52, 128}, 8, 37},
    {11, "conv", true, {}, 256, 3, 1, {52, 52, 128}, {52, 52, 256}, 8, 53},
    {12, "conv", true, {}, 128, 1, 1, {52, 52, 256}, {52, 52, 128}, 8, 53},
    {13, "conv", true, {}, 256, 3, 1, {52, 52, 128}, {52, 52, 256}, 8, 69},
    {14, "conv", false, {}, 512, 3, 2, {52, 52, 256}, {26, 26, 512}, 16, 85},
    {15, "conv", true, {}, 256, 1, 1, {26, 26, 512}, {26, 26, 256}, 16, 85},
    {16, "conv", true, {}, 512, 3, 1, {26, 26, 256}, {26, 26, 512}, 16, 117},
    {17, "conv", true, {}, 256, 1, 1, {26, 26, 512}, {26, 26, 256}, 16, 117},
    {18, "conv", true, {}, 512, 3, 1, {26, 26, 256}, {26, 26, 512}, 16, 149},
    {19, "conv", false, {}, 128, 1, 1, {26, 26, 512}, {26, 26, 128}, 16, 149},
    {20, "upsample", false, {}, 0, 2, 1, {26, 26, 128}, {52, 52, 128}, 16, 149},
    {21, "route", false, {8}, 0, 0, 0, {0, 0, 0}, {0, 0, 0}, 0, 0},
    {22, "reshape", false, {}, 0, 0, 0, {104, 104, 128}, {52, 52, 512}, 4, 29},
    {23, "route", false, {22, 20, 13}, 0, 0, 0, {0, 0, 0}, {0, 0, 0}, 0, 0},
    {24, "conv", false, {}, 256, 1, 1, {52, 52, 896}, {52, 52, 256}, 8, 69},
    {25, "conv", false, {}, 512, 3, 1, {52, 52, 256}, {52, 52, 512}, 8, 85},
    {26, "conv", false, {}, 256, 1, 1, {52, 52, 512}, {52, 52, 256}, 8, 85},
    {27, "conv", false, {}, 512, 3, 1, {52, 52, 256}, {52, 52, 512}, 8, 101},
    {28, "conv", false, {}, 255, 1, 1, {52, 52, 512}, {52, 52, 255}, 8, 101},
    {29, "yolo", false, {}, 0, 0, 0, {0, 0, 0}, {0, 0, 0}, 0, 0},
};
