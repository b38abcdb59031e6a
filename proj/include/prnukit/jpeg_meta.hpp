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
#include <optional>
#include <span>
#include <vector>

namespace prnukit {

struct Segment {
  std::uint8_t marker = 0;
  std::size_t offset = 0;  // position of the 0xFF that introduces the marker
  std::size_t length = 0;  // payload bytes, length field excluded
};

struct SegmentList {
  std::vector<Segment> segments;
};

/// Walks marker segments from SOI up to SOS or EOI. Throws missing_soi,
/// segment_overrun, reserved_marker or malformed_segment.
SegmentList scan_segments(std::span<const std::uint8_t> bytes);

struct Rational {
  std::uint32_t num = 0;
  std::uint32_t den = 0;
  bool operator==(const Rational&) const = default;
};

struct MfpTags {
  bool mhdr = false;
  bool lhdr = false;
  bool mfp3 = false;
  std::optional<Rational> zoom_ratio;

  bool is_mfp() const noexcept { return mhdr || lhdr || mfp3; }
  bool operator==(const MfpTags&) const = default;
};

/// Case-sensitive search for MHDR, LHDR and MFP3 inside each APP4 payload
/// (matches never span two segments), plus the Exif digital zoom ratio.
MfpTags detect_mfp(std::span<const std::uint8_t> bytes);

/// DigitalZoomRatio (0xA404) from the first APP1 Exif segment. Returns
/// nullopt when there is no Exif segment or the tag is absent; throws
/// malformed_exif on a broken TIFF structure.
std::optional<Rational> parse_zoom(std::span<const std::uint8_t> bytes);

}  // namespace prnukit
