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

#include "yolos/io.hpp"

#include <png.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <sstream>

#include "yolos/error.hpp"

namespace fs = std::filesystem;

namespace yolos {
namespace {

Tensor gray_or_rgb(int width, int height, int channels, const std::vector<double>& samples) {
  Tensor t(Shape{width, height, 3});
  const std::size_t plane = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  for (std::size_t i = 0; i < plane; ++i)
    for (int c = 0; c < 3; ++c)
      t.data()[static_cast<std::size_t>(c) * plane + i] =
          static_cast<float>(samples[i * static_cast<std::size_t>(channels) +
                                     static_cast<std::size_t>(channels == 1 ? 0 : c)]);
  return t;
}

// --- PNM --------------------------------------------------------------------

class PnmReader {
 public:
  PnmReader(std::string_view bytes, const std::string& name) : b_(bytes), name_(name) {}

  Tensor read() {
    if (b_.size() < 2 || b_[0] != 'P') bad("not a PNM file");
    const char kind = b_[1];
    if (kind != '2' && kind != '3' && kind != '5' && kind != '6') bad("unsupported PNM variant P" + std::string(1, kind));
    pos_ = 2;
    const int width = header_int("width");
    const int height = header_int("height");
    const int maxval = header_int("maxval");
    if (width < 1 || height < 1) bad("image dimensions must be positive");
    if (maxval < 1 || maxval > 65535) bad("maxval out of range");
    const int channels = (kind == '3' || kind == '6') ? 3 : 1;
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                              static_cast<std::size_t>(channels);
    std::vector<double> samples(count);
    if (kind == '5' || kind == '6') {
      if (pos_ >= b_.size() || !std::isspace(static_cast<unsigned char>(b_[pos_]))) bad("truncated header");
      ++pos_;
      const std::size_t bps = maxval > 255 ? 2 : 1;
      if (b_.size() - pos_ < count * bps) bad("truncated pixel data");
      for (std::size_t i = 0; i < count; ++i) {
        const auto* p = reinterpret_cast<const unsigned char*>(b_.data() + pos_ + i * bps);
        const int v = bps == 2 ? (p[0] << 8 | p[1]) : p[0];
        if (v > maxval) bad("sample exceeds maxval");
        samples[i] = static_cast<double>(v) / maxval;
      }
      if (b_.size() - pos_ != count * bps) bad("trailing bytes after pixel data");
    } else {
      for (std::size_t i = 0; i < count; ++i) {
        const int v = next_int("pixel data");
        if (v < 0 || v > maxval) bad("sample outside [0, maxval]");
        samples[i] = static_cast<double>(v) / maxval;
      }
      skip_space();
      if (pos_ != b_.size()) bad("trailing data after pixel data");
    }
    return gray_or_rgb(width, height, channels, samples);
  }

 private:
  [[noreturn]] void bad(const std::string& why) const { fail(ErrorKind::parse, name_ + ": " + why); }

  void skip_space() {
    while (pos_ < b_.size()) {
      if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(b_[pos_]))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  int next_int(const char* what) {
    skip_space();
    int v = 0;
    auto res = std::from_chars(b_.data() + pos_, b_.data() + b_.size(), v);
    if (res.ec != std::errc{} || res.ptr == b_.data() + pos_) bad(std::string("truncated or malformed ") + what);
    pos_ = static_cast<std::size_t>(res.ptr - b_.data());
    return v;
  }

  int header_int(const char* what) {
    if (pos_ < b_.size() && !std::isspace(static_cast<unsigned char>(b_[pos_])) && b_[pos_] != '#')
      bad("malformed header");
    return next_int(what);
  }

  std::string_view b_;
  const std::string& name_;
  std::size_t pos_ = 0;
};

// --- PNG --------------------------------------------------------------------

struct PngSource {
  std::string_view bytes;
  std::size_t pos = 0;
};

struct PngRaw {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<unsigned char> pixels;
  std::string error;
};

void png_read_memory(png_structp png, png_bytep out, png_size_t n) {
  auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
  if (src->bytes.size() - src->pos < n) png_error(png, "truncated file");
  std::memcpy(out, src->bytes.data() + src->pos, n);
  src->pos += n;
}

void png_on_error(png_structp png, png_const_charp msg) {
  auto* raw = static_cast<PngRaw*>(png_get_error_ptr(png));
  raw->error = msg;
  png_longjmp(png, 1);
}

void png_on_warning(png_structp, png_const_charp) {}

// Returns false with raw.error set on failure. Keeps every C++ object out
// of the frame that setjmp guards.
bool png_decode(PngSource& src, PngRaw& raw) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &raw, png_on_error, png_on_warning);
  if (!png) {
    raw.error = "out of memory";
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    raw.error = "out of memory";
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, &src, png_read_memory);
  png_read_info(png, info);
  const auto width = png_get_image_width(png, info);
  const auto height = png_get_image_height(png, info);
  const int depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  const int interlace = png_get_interlace_type(png, info);
  if (depth != 8 || (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_RGB) ||
      interlace != PNG_INTERLACE_NONE)
    png_error(png, "only 8-bit non-interlaced gray or RGB PNG is supported");
  raw.width = static_cast<int>(width);
  raw.height = static_cast<int>(height);
  raw.channels = color == PNG_COLOR_TYPE_RGB ? 3 : 1;
  const std::size_t row = png_get_rowbytes(png, info);
  raw.pixels.resize(row * height);
  for (png_uint_32 y = 0; y < height; ++y) png_read_row(png, raw.pixels.data() + row * y, nullptr);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

Tensor read_png(std::string_view bytes, const std::string& name) {
  PngSource src{bytes};
  PngRaw raw;
  if (!png_decode(src, raw)) fail(ErrorKind::parse, name + ": " + raw.error);
  std::vector<double> samples(raw.pixels.size());
  std::transform(raw.pixels.begin(), raw.pixels.end(), samples.begin(),
                 [](unsigned char v) { return v / 255.0; });
  return gray_or_rgb(raw.width, raw.height, raw.channels, samples);
}

// --- annotations -------------------------------------------------------------

std::vector<std::string_view> fields_of(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

const char* const kImageExtensions[] = {".ppm", ".pgm", ".pnm", ".png"};

}  // namespace

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorKind::io, path.string() + ": read error");
  return std::move(ss).str();
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, path.string() + ": cannot open for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      fail(ErrorKind::io, path.string() + ": write failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorKind::io, path.string() + ": cannot replace file");
  }
}

Tensor decode_image(std::string_view bytes, const std::string& name) {
  static constexpr unsigned char kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSig, 8) == 0) return read_png(bytes, name);
  return PnmReader(bytes, name).read();
}

Tensor load_image(const fs::path& path) { return decode_image(read_file(path), path.string()); }

std::string encode_ppm(const Tensor& image) {
  if (image.channels() != 3 && image.channels() != 1)
    fail(ErrorKind::shape, "PPM needs 1 or 3 channels, got " + std::to_string(image.channels()));
  std::string out = "P6\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      for (int c = 0; c < 3; ++c) {
        const float v = image.at(image.channels() == 1 ? 0 : c, y, x);
        out.push_back(static_cast<char>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f)));
      }
  return out;
}

std::vector<GroundTruth> parse_yolo_annotations(std::string_view text, ImageSize size,
                                                const std::string& image_id, const std::string& source) {
  std::vector<GroundTruth> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto fields = fields_of(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (fields.empty()) continue;
    auto bad = [&](const std::string& why) {
      fail(ErrorKind::parse, source + ":" + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 5) bad("expected 5 fields `class cx cy w h`, got " + std::to_string(fields.size()));
    GroundTruth gt;
    gt.image_id = image_id;
    auto res = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), gt.class_id);
    if (res.ec != std::errc{} || res.ptr != fields[0].data() + fields[0].size() || gt.class_id < 0)
      bad("class must be a non-negative integer");
    double v[4];
    for (std::size_t k = 0; k < 4; ++k) {
      const auto f = fields[k + 1];
      auto r = std::from_chars(f.data(), f.data() + f.size(), v[k]);
      if (r.ec != std::errc{} || r.ptr != f.data() + f.size()) bad("bad number '" + std::string(f) + "'");
    }
    if (!(v[0] >= 0 && v[0] <= 1 && v[1] >= 0 && v[1] <= 1)) bad("center outside [0, 1]");
    if (!(v[2] > 0 && v[2] <= 1 && v[3] > 0 && v[3] <= 1)) bad("size outside (0, 1]");
    const double w = size.width, h = size.height;
    const double cx = v[0] * w, cy = v[1] * h, bw = v[2] * w, bh = v[3] * h;
    gt.box = {std::max(0.0, cx - bw / 2), std::max(0.0, cy - bh / 2), std::min(w, cx + bw / 2),
              std::min(h, cy + bh / 2)};
    if (!gt.box.valid()) bad("box is empty inside the image");
    out.push_back(gt);
  }
  return out;
}

std::vector<AnnotatedImage> load_yolo_annotations(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) fail(ErrorKind::io, dir.string() + ": not a directory");
  std::vector<AnnotatedImage> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto& p = entry.path();
    if (!entry.is_regular_file() || p.extension() != ".txt" || p.filename() == "classes.txt") continue;
    AnnotatedImage im;
    im.id = p.stem().string();
    for (const char* ext : kImageExtensions) {
      auto candidate = p;
      candidate.replace_extension(ext);
      if (fs::is_regular_file(candidate, ec)) {
        im.image_path = candidate;
        break;
      }
    }
    if (im.image_path.empty()) fail(ErrorKind::io, p.string() + ": no image with the same name");
    const Tensor img = load_image(im.image_path);
    im.size = {img.width(), img.height()};
    im.truths = parse_yolo_annotations(read_file(p), im.size, im.id, p.string());
    out.push_back(std::move(im));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

std::vector<std::string> load_class_names(const fs::path& dir) {
  const auto path = dir / "classes.txt";
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) return {};
  std::vector<std::string> names;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    std::size_t b = 0;
    while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    if (b < line.size()) names.push_back(line.substr(b));
  }
  return names;
}

}  // namespace yolos
