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

#include "suites.hpp"

namespace {

void expect(const SuiteResult& r, int min_cases) {
  INFO(r.first_failure);
  CHECK(r.cases >= min_cases);
  CHECK(r.failures == 0);
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("iou symmetry, bounds and scale invariance") { expect(suites::iou_properties(), 200); }
  TEST_CASE("nms idempotence and subset") { expect(suites::nms_properties(), 200); }
  TEST_CASE("AP depends only on confidence order") { expect(suites::ap_monotone_properties(), 200); }
  TEST_CASE("anchor scale equivariance and order independence") { expect(suites::anchor_scale_properties(), 200); }
  TEST_CASE("tile and letterbox coordinate round trip") { expect(suites::tile_roundtrip_properties(), 200); }
  TEST_CASE("equal supports and the F1 identity") { expect(suites::aggregate_properties(), 200); }
  TEST_CASE("detections and reports re-parse losslessly") { expect(suites::serialization_properties(), 200); }
}
