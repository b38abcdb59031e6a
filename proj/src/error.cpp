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

#include "prnukit/error.hpp"

#include <cmath>
#include <string>

#include "prnukit/plane.hpp"

namespace prnukit {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::io: return "io";
    case Errc::malformed_header: return "malformed_header";
    case Errc::truncated: return "truncated";
    case Errc::unsupported_format: return "unsupported_format";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::degenerate_input: return "degenerate_input";
    case Errc::vocabulary: return "vocabulary";
    case Errc::duplicate: return "duplicate";
    case Errc::missing_soi: return "missing_soi";
    case Errc::segment_overrun: return "segment_overrun";
    case Errc::reserved_marker: return "reserved_marker";
    case Errc::malformed_segment: return "malformed_segment";
    case Errc::malformed_exif: return "malformed_exif";
    case Errc::insufficient_support: return "insufficient_support";
    case Errc::empty_input: return "empty_input";
    case Errc::unwritable: return "unwritable";
  }
  return "unknown";
}

void validate(const Image& img) {
  if (img.channels != 1 && img.channels != 3)
    throw Error(Errc::invalid_argument,
                "image channels must be 1 or 3, got " + std::to_string(img.channels));
  if (img.depth != 8 && img.depth != 16)
    throw Error(Errc::invalid_argument,
                "image depth must be 8 or 16, got " + std::to_string(img.depth));
  if (img.pixels.size() != img.height * img.width * img.channels)
    throw Error(Errc::invalid_argument, "pixel count does not match height*width*channels");
  const auto maxv = img.max_value();
  for (auto v : img.pixels)
    if (v > maxv) throw Error(Errc::invalid_argument, "sample exceeds bit depth");
}

void validate_finite(const Plane& p, const char* what) {
  if (p.values.size() != p.height * p.width)
    throw Error(Errc::invalid_argument, std::string(what) + ": size does not match dims");
  for (double v : p.values)
    if (!std::isfinite(v))
      throw Error(Errc::invalid_argument, std::string(what) + ": non-finite value");
}

void require_pipeline_size(std::size_t height, std::size_t width) {
  if (height < kMinPipelineEdge || width < kMinPipelineEdge)
    throw Error(Errc::invalid_argument,
                "pipeline inputs must be at least 64x64, got " + std::to_string(height) +
                    "x" + std::to_string(width));
}

}  // namespace prnukit
