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

#include <span>
#include <vector>

#include "yolos/error.hpp"
#include "yolos/netdef.hpp"

namespace yolos {

// Dense float feature map, channel-major planar: data[(c * H + y) * W + x].
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, float fill = 0.0f)
      : shape_(shape), data_(static_cast<std::size_t>(checked(shape).size()), fill) {}
  Tensor(Shape shape, std::vector<float> data) : shape_(checked(shape)), data_(std::move(data)) {
    if (static_cast<std::int64_t>(data_.size()) != shape_.size())
      fail(ErrorKind::shape, "tensor data length does not match " + to_string(shape_));
  }

  const Shape& shape() const { return shape_; }
  int width() const { return shape_.width; }
  int height() const { return shape_.height; }
  int channels() const { return shape_.channels; }
  std::size_t size() const { return data_.size(); }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }
  std::vector<float>& storage() { return data_; }

  std::span<float> plane(int c) { return data().subspan(plane_offset(c), plane_size()); }
  std::span<const float> plane(int c) const { return data().subspan(plane_offset(c), plane_size()); }

  float& at(int c, int y, int x) { return data_[index(c, y, x)]; }
  float at(int c, int y, int x) const { return data_[index(c, y, x)]; }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  static const Shape& checked(const Shape& s) {
    if (s.width < 0 || s.height < 0 || s.channels < 0)
      fail(ErrorKind::shape, "negative tensor shape " + to_string(s));
    return s;
  }
  std::size_t plane_size() const {
    return static_cast<std::size_t>(shape_.width) * static_cast<std::size_t>(shape_.height);
  }
  std::size_t plane_offset(int c) const { return static_cast<std::size_t>(c) * plane_size(); }
  std::size_t index(int c, int y, int x) const {
    return plane_offset(c) + static_cast<std::size_t>(y) * static_cast<std::size_t>(shape_.width) +
           static_cast<std::size_t>(x);
  }

  Shape shape_{};
  std::vector<float> data_;
};

}  // namespace yolos
