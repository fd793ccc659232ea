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

#include "doctest.h"

#include <fstream>

#include "test_util.hpp"
#include "yolos/error.hpp"
#include "yolos/io.hpp"

using namespace yolos;

namespace {

// 2x2 RGB: red, green / blue, white.
const unsigned char kRgbPng[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52, 0x00, 0x00,
    0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x08, 0x02, 0x00, 0x00, 0x00, 0xfd, 0xd4, 0x9a, 0x73, 0x00, 0x00, 0x00,
    0x12, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0xf8, 0xcf, 0xc0, 0xc0, 0x00, 0xc2, 0x0c, 0xff, 0x81, 0x00,
    0x00, 0x1f, 0xee, 0x05, 0xfb, 0x0b, 0xd9, 0x68, 0x8b, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae,
    0x42, 0x60, 0x82};
// 2x1 gray: 0, 51.
const unsigned char kGrayPng[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52, 0x00, 0x00,
    0x00, 0x02, 0x00, 0x00, 0x00, 0x01, 0x08, 0x00, 0x00, 0x00, 0x00, 0xd1, 0x49, 0x20, 0x56, 0x00, 0x00, 0x00,
    0x0b, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x60, 0x30, 0x06, 0x00, 0x00, 0x36, 0x00, 0x34, 0x39, 0x32,
    0xd3, 0x91, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};
// 1x1 16-bit gray.
const unsigned char kDeepPng[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52, 0x00, 0x00,
    0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x10, 0x00, 0x00, 0x00, 0x00, 0x6a, 0xee, 0x47, 0x16, 0x00, 0x00, 0x00,
    0x0b, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x60, 0x64, 0x02, 0x00, 0x00, 0x07, 0x00, 0x04, 0x76, 0x49,
    0xe3, 0x28, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

template <std::size_t N>
std::string_view bytes(const unsigned char (&a)[N]) {
  return {reinterpret_cast<const char*>(a), N};
}

void expect_parse_error(std::string_view data) {
  try {
    decode_image(data);
    FAIL("accepted malformed image");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
  }
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("binary ppm values scale to [0, 1]") {
    const std::string ppm = std::string("P6\n# comment\n2 2\n255\n") +
                            std::string("\xff\x00\x00\x00\xff\x00\x00\x00\xff\x80\x80\x80", 12);
    const auto t = decode_image(ppm);
    CHECK(t.shape() == Shape{2, 2, 3});
    CHECK(t.at(0, 0, 0) == 1.0f);
    CHECK(t.at(1, 0, 0) == 0.0f);
    CHECK(t.at(1, 0, 1) == 1.0f);
    CHECK(t.at(2, 1, 0) == 1.0f);
    CHECK(t.at(2, 1, 1) == doctest::Approx(128.0 / 255));
  }

  TEST_CASE("all-white ascii pgm becomes three planes of ones") {
    const auto t = decode_image("P2 3 2 7\n7 7 7\n7 7 7\n");
    CHECK(t.shape() == Shape{3, 2, 3});
    for (float v : t.data()) CHECK(v == 1.0f);
  }

  TEST_CASE("16-bit samples are big-endian") {
    const auto t = decode_image(std::string("P5 1 1 1000\n", 12) + std::string("\x01\xf4", 2));
    CHECK(t.at(0, 0, 0) == doctest::Approx(0.5));
  }

  TEST_CASE("malformed pnm files are parse errors") {
    expect_parse_error(std::string("P6 2 2 255\n") + std::string(11, '\0'));
    expect_parse_error(std::string("P6 1 1 255\n") + std::string(4, '\0'));
    expect_parse_error("P3 1 1 255\n1 2\n");
    expect_parse_error("P2 1 1 5\n6\n");
    expect_parse_error("P4 1 1\n\x00");
    expect_parse_error("P2 0 1 5\n");
    expect_parse_error("");
  }

  TEST_CASE("png gray and rgb decode") {
    const auto rgb = decode_image(bytes(kRgbPng));
    CHECK(rgb.shape() == Shape{2, 2, 3});
    CHECK(rgb.at(0, 0, 0) == 1.0f);
    CHECK(rgb.at(1, 0, 0) == 0.0f);
    CHECK(rgb.at(1, 0, 1) == 1.0f);
    CHECK(rgb.at(2, 1, 0) == 1.0f);
    CHECK(rgb.at(0, 1, 1) == 1.0f);
    const auto gray = decode_image(bytes(kGrayPng));
    CHECK(gray.shape() == Shape{2, 1, 3});
    CHECK(gray.at(2, 0, 1) == doctest::Approx(0.2));
  }

  TEST_CASE("unsupported or damaged png is a parse error") {
    expect_parse_error(bytes(kDeepPng));
    expect_parse_error(bytes(kRgbPng).substr(0, 40));
    std::string corrupt(bytes(kRgbPng));
    corrupt[45] ^= 0x55;
    expect_parse_error(corrupt);
  }

  TEST_CASE("ppm encode and reload") {
    Tensor t(Shape{3, 2, 3});
    for (std::size_t i = 0; i < t.size(); ++i) t.storage()[i] = static_cast<float>(i) / 17;
    const auto back = decode_image(encode_ppm(t));
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(back.data()[i] == doctest::Approx(t.data()[i]).epsilon(0.01));
  }

  TEST_CASE("files: missing is io, atomic write replaces") {
    TempDir dir("io");
    try {
      load_image(dir / "none.ppm");
      FAIL("expected an io error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::io);
    }
    write_file_atomic(dir / "a.txt", "one");
    write_file_atomic(dir / "a.txt", "two");
    CHECK(read_file(dir / "a.txt") == "two");
    CHECK(std::distance(std::filesystem::directory_iterator(dir.path()), {}) == 1);
  }

  TEST_CASE("annotation rows scale to pixels") {
    const auto g = parse_yolo_annotations("2 0.25 0.25 0.1 0.2\n\n0 0.5 0.5 1 1\n", {1920, 1080}, "x", "x.txt");
    REQUIRE(g.size() == 2);
    CHECK(g[0].class_id == 2);
    CHECK(g[0].box.x_min == doctest::Approx(384));
    CHECK(g[0].box.y_min == doctest::Approx(162));
    CHECK(g[0].box.x_max == doctest::Approx(576));
    CHECK(g[0].box.y_max == doctest::Approx(378));
    CHECK(g[1].box == Box{0, 0, 1920, 1080});
    CHECK(g[1].image_id == "x");
  }

  TEST_CASE("boxes reaching past the edge are clipped") {
    const auto g = parse_yolo_annotations("0 0 0 0.5 0.5\n", {100, 100}, "x", "x.txt");
    CHECK(g[0].box == Box{0, 0, 25, 25});
  }

  TEST_CASE("bad annotation rows name the file and line") {
    for (const char* row : {"0 1.5 0.5 0.1 0.1", "0 0.5 0.5 0 0.1", "a 0.5 0.5 0.1 0.1", "-1 0.5 0.5 0.1 0.1",
                            "0 0.5 0.5 0.1", "0 0.5 0.5 0.1 1.01", "0.5 0.5 0.5 0.1 0.1"}) {
      try {
        parse_yolo_annotations(std::string("0 0.5 0.5 0.1 0.1\n") + row + "\n", {10, 10}, "x", "x.txt");
        FAIL("accepted " << row);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::parse);
        CHECK(std::string(e.what()).rfind("x.txt:2: ", 0) == 0);
      }
    }
  }

  TEST_CASE("annotation directories pair images by stem") {
    TempDir dir("io");
    std::string p2 = "P2 20 10 1\n";
    for (int i = 0; i < 200; ++i) p2 += "1 ";
    write_file_atomic(dir / "b.pgm", p2);
    write_file_atomic(dir / "a.png", std::string(bytes(kRgbPng)));
    write_file_atomic(dir / "b.txt", "1 0.5 0.5 0.5 0.5\n");
    write_file_atomic(dir / "a.txt", "");
    write_file_atomic(dir / "classes.txt", " car \n\nvan\n");
    const auto set = load_yolo_annotations(dir.path());
    REQUIRE(set.size() == 2);
    CHECK(set[0].id == "a");
    CHECK(set[0].truths.empty());
    CHECK(set[1].size.width == 20);
    CHECK(set[1].truths[0].box == Box{5, 2.5, 15, 7.5});
    CHECK(load_class_names(dir.path()) == std::vector<std::string>{"car", "van"});
    write_file_atomic(dir / "c.txt", "0 0.5 0.5 0.1 0.1\n");
    CHECK_THROWS_AS(load_yolo_annotations(dir.path()), Error);
    CHECK_THROWS_AS(load_yolo_annotations(dir / "nope"), Error);
  }
}
