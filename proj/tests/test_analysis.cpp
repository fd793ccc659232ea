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

#include <cmath>

#include "reference_data.hpp"
#include "yolos/analysis.hpp"
#include "yolos/error.hpp"

using namespace yolos;

namespace {

NetworkGraph chain(Shape input, std::vector<LayerSpec> layers) {
  NetworkGraph g;
  g.name = "t";
  g.input_shape = input;
  g.layers = std::move(layers);
  return g;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("reference rows for yolo_s and yolo_l") {
    for (auto [name, rows] : {std::pair{"yolo_s", &kYoloSGolden}, std::pair{"yolo_l", &kYoloLGolden}}) {
      const auto g = build_builtin(name, 80);
      const auto bad = golden_mismatches(g, analyze(g), *rows);
      for (const auto& b : bad) MESSAGE(name << ": " << b);
      CHECK(bad.empty());
    }
  }

  TEST_CASE("shape examples") {
    const auto s = infer_shapes(build_builtin("yolo_s", 80));
    CHECK(s[9] == Shape{52, 52, 256});
    CHECK(s[22] == Shape{52, 52, 512});
    const auto g = chain({416, 416, 3}, {LayerSpec::conv(32, 3)});
    CHECK(infer_shapes(g)[0] == Shape{416, 416, 32});
    const auto odd = chain({5, 5, 1}, {LayerSpec::conv(4, 3, 2)});
    CHECK(infer_shapes(odd)[0] == Shape{3, 3, 4});
  }

  TEST_CASE("shape errors") {
    auto g = chain({6, 6, 1}, {LayerSpec::conv(2, 3, 2), LayerSpec::reshape_passthrough()});
    CHECK_THROWS_AS(infer_shapes(g), Error);
    g = chain({8, 8, 1}, {LayerSpec::conv(2, 3, 2), LayerSpec::conv(2, 3, 1), LayerSpec::route({0, 1}),
                          LayerSpec::route({2, 0})});
    CHECK_NOTHROW(infer_shapes(g));
    g = chain({8, 8, 1}, {LayerSpec::conv(2, 3, 2), LayerSpec::conv(2, 3, 2), LayerSpec::route({0, 1})});
    try {
      infer_shapes(g);
      FAIL("expected a shape error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::shape);
    }
  }

  TEST_CASE("receptive field examples") {
    const auto g = build_builtin("yolo_s", 80);
    const auto rf = receptive_fields(g);
    CHECK(rf[0] == FieldStride{3, 1});
    CHECK(rf[1] == FieldStride{5, 2});
    CHECK(rf.back() == FieldStride{101, 8});
    const auto l = build_builtin("yolo_l", 80);
    const auto rl = receptive_fields(l);
    CHECK(rl[static_cast<std::size_t>(l.heads[0].layer)] == FieldStride{533, 16});
    CHECK(rl[static_cast<std::size_t>(l.heads[1].layer)] == FieldStride{213, 8});
    CHECK(rl[static_cast<std::size_t>(l.heads[2].layer)] == FieldStride{53, 4});
  }

  TEST_CASE("upsample leaves the field unchanged") {
    const auto g = chain({16, 16, 1}, {LayerSpec::conv(1, 3, 2), LayerSpec::upsample()});
    const auto rf = receptive_fields(g);
    CHECK(rf[1] == rf[0]);
  }

  TEST_CASE("head stride equals the product of strides on its path") {
    for (BuiltinNet n : all_builtins()) {
      const auto g = build_builtin(n, 80);
      const auto rf = receptive_fields(g);
      const auto shapes = infer_shapes(g);
      for (const auto& h : g.heads) {
        const auto& s = shapes[static_cast<std::size_t>(h.layer)];
        CHECK(rf[static_cast<std::size_t>(h.layer)].cumulative_stride * s.width == g.input_shape.width);
      }
    }
  }

  TEST_CASE("receptive field grows along the backbone chain") {
    for (BuiltinNet n : all_builtins()) {
      const auto g = build_builtin(n, 80);
      const auto rf = receptive_fields(g);
      for (std::size_t i = 1; i < g.layers.size(); ++i) {
        if (g.layers[i].kind == LayerKind::route) continue;
        if (g.layers[i - 1].kind == LayerKind::yolo_head) continue;
        CHECK(rf[i].receptive_field >= rf[i - 1].receptive_field);
        CHECK(rf[i].cumulative_stride >= rf[i - 1].cumulative_stride);
      }
      for (const auto& f : rf) {
        const auto cs = f.cumulative_stride;
        CHECK((cs & (cs - 1)) == 0);
      }
    }
  }

  TEST_CASE("parameter convention") {
    CHECK(conv_params(LayerSpec::conv(32, 3), 3) == 992);
    CHECK(conv_params(LayerSpec::conv(255, 1, 1, Activation::linear, false), 512) == 130815);
    const auto g = chain({4, 4, 3}, {LayerSpec::conv(32, 3), LayerSpec::upsample()});
    const auto p = count_params(g);
    CHECK(p.total == 992);
    CHECK(p.per_layer == std::vector<std::int64_t>{992, 0});
  }

  TEST_CASE("flops convention") {
    const auto one = chain({1, 1, 1}, {LayerSpec::conv(1, 1, 1, Activation::linear, false)});
    CHECK(analyze(one).total_flops == 2);
    CHECK(count_flops(one, one.input_shape) == doctest::Approx(2e-9));
  }

  TEST_CASE("aggregates within 2 percent and exact head geometry") {
    for (const auto& ref : kNetRefs) {
      const auto g = build_builtin(ref.name, 80);
      const double params = static_cast<double>(count_params(g).total);
      const double bf = count_flops(g, g.input_shape);
      INFO(ref.name);
      CHECK(std::abs(params / ref.params - 1) <= 0.02);
      CHECK(std::abs(bf / ref.bflops - 1) <= 0.02);
      const auto rf = receptive_fields(g);
      const auto shapes = infer_shapes(g);
      REQUIRE(g.heads.size() == ref.heads.size());
      for (std::size_t h = 0; h < ref.heads.size(); ++h) {
        const auto i = static_cast<std::size_t>(g.heads[h].layer);
        CHECK(shapes[i].width == ref.heads[h].grid);
        CHECK(rf[i].receptive_field == ref.heads[h].receptive_field);
        CHECK(rf[i].cumulative_stride == ref.heads[h].cumulative_stride);
      }
    }
  }

  TEST_CASE("doubling the input quadruples conv flops and keeps params") {
    for (BuiltinNet n : all_builtins()) {
      const auto g = build_builtin(n, 80);
      const auto a = analyze(g);
      const auto b = analyze(g, {832, 832, 3});
      CHECK(a.total_params == b.total_params);
      for (std::size_t i = 0; i < a.layers.size(); ++i) CHECK(b.layers[i].flops == 4 * a.layers[i].flops);
    }
  }

  TEST_CASE("report has the ten columns and a totals line") {
    const auto g = build_builtin("yolo_s", 80);
    const auto text = format_report(g, analyze(g), ReportFormat::text);
    CHECK(text.substr(0, text.find('\n')).find("#") != std::string::npos);
    for (const char* col : {"Type", "F", "S/S", "Input", "Output", "CS", "RF", "Params", "FLOPs"})
      CHECK(text.find(col) != std::string::npos);
    const auto csv = format_report(g, analyze(g), ReportFormat::csv);
    CHECK(csv.rfind("#,Type,F,S/S,Input,Output,CS,RF,Params,FLOPs\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 31);
  }
}
