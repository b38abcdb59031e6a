// Copyright (c) 2026 The prnukit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace prnukit {

/// Real-valued row-major working buffer (residuals, fingerprints, surfaces).
struct Plane {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> values;

  Plane() = default;
  Plane(std::size_t h, std::size_t w, double fill = 0.0)
      : height(h), width(w), values(h * w, fill) {}

  std::size_t size() const noexcept { return values.size(); }
  bool empty() const noexcept { return values.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return values[r * width + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values[r * width + c]; }

  std::span<double> row(std::size_t r) { return {values.data() + r * width, width}; }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * width, width};
  }

  bool same_dims(const Plane& o) const noexcept {
    return height == o.height && width == o.width;
  }
};

/// Integer sample grid as it came off the camera (or the simulator).
struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 1;
  int depth = 8;
  std::vector<std::uint16_t> pixels;  // row-major, channel-interleaved
  std::string source_tag;

  Image() = default;
  Image(std::size_t h, std::size_t w, std::size_t c, int bit_depth)
      : height(h), width(w), channels(c), depth(bit_depth), pixels(h * w * c, 0) {}

  std::uint16_t& at(std::size_t r, std::size_t c, std::size_t ch = 0) {
    return pixels[(r * width + c) * channels + ch];
  }
  std::uint16_t at(std::size_t r, std::size_t c, std::size_t ch = 0) const {
    return pixels[(r * width + c) * channels + ch];
  }

  std::uint32_t max_value() const noexcept { return (1u << depth) - 1u; }
};

/// Throws Errc::invalid_argument on a broken Image invariant.
void validate(const Image& img);

/// Throws Errc::invalid_argument on NaN/Inf.
void validate_finite(const Plane& p, const char* what);

/// Minimum edge for every pipeline entry point.
inline constexpr std::size_t kMinPipelineEdge = 64;

void require_pipeline_size(std::size_t height, std::size_t width);

}  // namespace prnukit
