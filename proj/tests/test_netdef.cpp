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

#include "reference_data.hpp"
#include "yolos/analysis.hpp"
#include "yolos/engine.hpp"
#include "yolos/error.hpp"
#include "yolos/netdef.hpp"

using namespace yolos;

namespace {

int residual_pairs(const NetworkGraph& g) {
  int n = 0;
  for (const auto& l : g.layers) n += l.residual_partner.has_value();
  return n;
}

}  // namespace

TEST_SUITE("netdef") {
  TEST_CASE("yolo_s has a single 52x52x255 head at stride 8") {
    const auto g = build_builtin(BuiltinNet::yolo_s, 80);
    CHECK(g.layers.size() == 30);
    CHECK(g.layers[28].kind == LayerKind::conv);
    CHECK(g.layers[29].kind == LayerKind::yolo_head);
    REQUIRE(g.heads.size() == 1);
    CHECK(g.heads[0].layer == 29);
    const auto shapes = infer_shapes(g);
    CHECK(shapes[28] == Shape{52, 52, 255});
    CHECK(receptive_fields(g)[29].cumulative_stride == 8);
  }

  TEST_CASE("yolo_l heads emit 26, 52 and 104 grids") {
    const auto g = build_builtin("yolo_l", 80);
    const auto shapes = infer_shapes(g);
    CHECK(shapes[49] == Shape{26, 26, 255});
    CHECK(shapes[61] == Shape{52, 52, 255});
    CHECK(shapes[73] == Shape{104, 104, 255});
    const auto rf = receptive_fields(g);
    REQUIRE(g.heads.size() == 3);
    CHECK(rf[static_cast<std::size_t>(g.heads[0].layer)].cumulative_stride == 16);
    CHECK(rf[static_cast<std::size_t>(g.heads[1].layer)].cumulative_stride == 8);
    CHECK(rf[static_cast<std::size_t>(g.heads[2].layer)].cumulative_stride == 4);
  }

  TEST_CASE("head channels follow B(5+C)") {
    CHECK(infer_shapes(build_builtin("yolo_s", 1))[28].channels == 18);
    CHECK(infer_shapes(build_builtin("yolo_s", 7))[28].channels == 36);
    const auto six = build_builtin("yolo_s", 80, HeadConfig{6});
    CHECK(infer_shapes(six)[28].channels == 6 * 85);
    CHECK(six.heads[0].anchors.size() == 6);
    CHECK(validate(six).empty());
    CHECK(infer_shapes(build_builtin("ju2019", 2, HeadConfig{6})).back().channels == 42);
  }

  TEST_CASE("multi-head nets reject B other than 3") {
    CHECK_THROWS_AS(build_builtin("yolo_l", 80, HeadConfig{6}), Error);
    CHECK_THROWS_AS(build_builtin("yolov3", 80, HeadConfig{2}), Error);
  }

  TEST_CASE("unknown name and bad class count are rejected") {
    CHECK_THROWS_AS(build_builtin("yolo_xl", 80), Error);
    try {
      build_builtin("yolo_s", 0);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::invalid_argument);
    }
  }

  TEST_CASE("every built-in validates and round-trips through text") {
    for (BuiltinNet n : all_builtins()) {
      for (int classes : {1, 8, 80}) {
        const auto g = build_builtin(n, classes);
        CHECK(validate(g).empty());
        CHECK(parse_text(to_text(g)) == g);
      }
    }
  }

  TEST_CASE("residual pairs keep the block channel count") {
    for (const char* name : {"yolo_s", "yolo_l"}) {
      const auto g = build_builtin(name, 80);
      const auto shapes = infer_shapes(g);
      for (std::size_t i = 0; i < g.layers.size(); ++i) {
        const auto& l = g.layers[i];
        if (!l.residual_partner) continue;
        CHECK(g.layers[i - 1].kernel == 1);
        CHECK(l.kernel == 3);
        CHECK(shapes[static_cast<std::size_t>(*l.residual_partner)].channels == shapes[i].channels);
      }
    }
    CHECK(residual_pairs(build_builtin("yolo_s", 80)) == 7);
    CHECK(residual_pairs(build_builtin("yolo_l", 80)) == 19);
  }

  TEST_CASE("yolo_s concat takes 22, 20 and 13 for 896 channels") {
    const auto g = build_builtin("yolo_s", 80);
    CHECK(g.layers[23].route_sources == std::vector<int>{22, 20, 13});
    const auto shapes = infer_shapes(g);
    CHECK(shapes[22].channels + shapes[20].channels + shapes[13].channels == 896);
    CHECK(shapes[23] == Shape{52, 52, 896});
  }

  TEST_CASE("self reference is a forward reference") {
    auto g = build_builtin("yolo_s", 80);
    g.layers[21].route_sources = {21};
    const auto v = validate(g);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "forward reference at layer 21");
  }

  TEST_CASE("perturbed concat is a shape violation") {
    auto g = build_builtin("yolo_s", 80);
    g.layers[23].route_sources = {22, 19, 13};  // 26x26 source: 512 + 128 + 256 channels off-grid
    const auto v = validate(g);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rfind("shape violation", 0) == 0);
  }

  TEST_CASE("same-grid channel perturbation is caught by the weights") {
    const auto g = build_builtin("yolo_s", 80);
    const auto w = WeightSet::zeros(g);
    auto h = g;
    h.layers[23].route_sources = {22, 20, 12};  // 512 + 128 + 128 = 768
    CHECK(validate(h).empty());
    CHECK(infer_shapes(h)[23].channels == 768);
    try {
      check_weights(h, w);
      FAIL("expected a shape error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::shape);
    }
  }

  TEST_CASE("structural violations are reported, not thrown") {
    auto g = build_builtin("yolo_s", 80);
    g.layers[5].route_sources = {1};
    g.heads[0].anchors.pop_back();
    const auto v = validate(g);
    CHECK(v.size() == 2);
    NetworkGraph empty;
    CHECK_FALSE(validate(empty).empty());
  }

  TEST_CASE("text parser reports line numbers") {
    const std::string ok = to_text(build_builtin("tiny_yolov3", 3));
    CHECK(parse_text(ok).layers.size() == build_builtin("tiny_yolov3", 3).layers.size());
    auto expect_parse_error = [](const std::string& text, const std::string& needle) {
      try {
        parse_text(text);
        FAIL("expected a parse error");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::parse);
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
      }
    };
    expect_parse_error("net name=x width=8 height=8 channels=3\n0 conv filters=a size=1\n", "line 2");
    expect_parse_error("net name=x width=8 height=8 channels=3\n0 blob\n", "line 2");
    expect_parse_error("net name=x width=8 height=8 channels=3\n1 conv filters=1 size=1\n", "line 2");
    expect_parse_error("0 conv filters=1 size=1\n", "line 1");
  }
}
