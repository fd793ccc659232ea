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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "yolos/metrics.hpp"
#include "yolos/tensor.hpp"

namespace yolos {

// Whole-file read; Error(io) when the file cannot be opened or read.
std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// PPM/PGM (P2, P3, P5, P6; maxval up to 65535) or 8-bit non-interlaced
// gray/RGB PNG, picked by content. Values scaled to [0, 1]; gray is
// replicated into 3 channels. Error(parse) on anything else or a
// truncated file.
Tensor load_image(const std::filesystem::path& path);
Tensor decode_image(std::string_view bytes, const std::string& name = "<memory>");

// Binary P6 with maxval 255; values are clamped to [0, 1] and rounded.
std::string encode_ppm(const Tensor& image);

struct ImageSize {
  int width = 0;
  int height = 0;
};

// Rows `class cx cy w h`, normalized, scaled to pixels of the given image.
std::vector<GroundTruth> parse_yolo_annotations(std::string_view text, ImageSize size,
                                                const std::string& image_id,
                                                const std::string& source);

struct AnnotatedImage {
  std::string id;  // file stem
  std::filesystem::path image_path;
  ImageSize size;
  std::vector<GroundTruth> truths;
};

// One `<stem>.txt` per image in `dir`, paired with `<stem>.{ppm,pgm,pnm,png}`
// in the same directory; `classes.txt` is not an annotation file. Sorted by
// id.
std::vector<AnnotatedImage> load_yolo_annotations(const std::filesystem::path& dir);

// Class names from `dir/classes.txt`, one per line; empty when absent.
std::vector<std::string> load_class_names(const std::filesystem::path& dir);

}  // namespace yolos
