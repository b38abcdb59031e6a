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

#include "prnukit/jpeg_meta.hpp"

#include <algorithm>
#include <cstring>
#include <string>
#include <string_view>

#include "prnukit/error.hpp"

namespace prnukit {
namespace {

constexpr std::uint8_t kSoi = 0xD8, kEoi = 0xD9, kSos = 0xDA, kTem = 0x01;
constexpr std::uint8_t kApp1 = 0xE1, kApp4 = 0xE4;

std::string hex_byte(std::uint8_t b) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  return {kHex[b >> 4], kHex[b & 15]};
}

bool standalone(std::uint8_t m) { return m == kTem || (m >= 0xD0 && m <= 0xD7); }

std::span<const std::uint8_t> payload(std::span<const std::uint8_t> bytes, const Segment& s) {
  return bytes.subspan(s.offset + 4, s.length);
}

bool contains(std::span<const std::uint8_t> hay, std::string_view needle) {
  const auto* first = reinterpret_cast<const std::uint8_t*>(needle.data());
  return std::search(hay.begin(), hay.end(), first, first + needle.size()) != hay.end();
}

class TiffReader {
 public:
  explicit TiffReader(std::span<const std::uint8_t> tiff) : t_(tiff) {
    if (t_.size() < 8) fail("TIFF header truncated");
    if (t_[0] == 'I' && t_[1] == 'I') little_ = true;
    else if (t_[0] == 'M' && t_[1] == 'M') little_ = false;
    else fail("bad TIFF byte order");
    if (u16(2) != 42) fail("bad TIFF magic");
  }

  std::uint16_t u16(std::size_t at) const {
    need(at, 2);
    return little_ ? static_cast<std::uint16_t>(t_[at] | (t_[at + 1] << 8))
                   : static_cast<std::uint16_t>((t_[at] << 8) | t_[at + 1]);
  }

  std::uint32_t u32(std::size_t at) const {
    need(at, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      const std::uint32_t b = t_[at + (little_ ? 3 - i : i)];
      v = (v << 8) | b;
    }
    return v;
  }

  struct Entry {
    std::uint16_t tag, type;
    std::uint32_t count;
    std::size_t value_at;  // offset of the 4-byte value/offset field
  };

  // Returns the entry for `tag` in the IFD at `ifd`, if present.
  std::optional<Entry> find(std::size_t ifd, std::uint16_t tag) const {
    const std::uint16_t n = u16(ifd);
    need(ifd + 2, static_cast<std::size_t>(n) * 12 + 4);
    for (std::uint16_t i = 0; i < n; ++i) {
      const std::size_t e = ifd + 2 + static_cast<std::size_t>(i) * 12;
      if (u16(e) == tag) return Entry{tag, u16(e + 2), u32(e + 4), e + 8};
    }
    return std::nullopt;
  }

  std::size_t ifd0() const { return u32(4); }

  [[noreturn]] static void fail(const std::string& msg) {
    throw Error(Errc::malformed_exif, "exif: " + msg);
  }

 private:
  void need(std::size_t at, std::size_t n) const {
    if (at > t_.size() || n > t_.size() - at) fail("offset out of range");
  }

  std::span<const std::uint8_t> t_;
  bool little_ = true;
};

constexpr std::uint16_t kExifIfdTag = 0x8769, kZoomTag = 0xA404;
constexpr std::uint16_t kTypeLong = 4, kTypeRational = 5;

}  // namespace

SegmentList scan_segments(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 0xFF || bytes[1] != kSoi)
    throw Error(Errc::missing_soi, "jpeg: missing SOI");
  SegmentList out;
  std::size_t pos = 2;
  while (true) {
    if (pos >= bytes.size()) throw Error(Errc::segment_overrun, "jpeg: unexpected end before EOI/SOS");
    if (bytes[pos] != 0xFF)
      throw Error(Errc::malformed_segment, "jpeg: expected marker at byte " + std::to_string(pos));
    while (pos < bytes.size() && bytes[pos] == 0xFF) ++pos;
    if (pos >= bytes.size()) throw Error(Errc::segment_overrun, "jpeg: file ends inside fill bytes");
    const std::size_t at = pos - 1;
    const std::uint8_t m = bytes[pos++];
    if (m == kEoi) break;
    if (m == kSoi) throw Error(Errc::malformed_segment, "jpeg: nested SOI");
    if (standalone(m)) continue;
    if (m == 0x00 || (m >= 0x02 && m <= 0xBF))
      throw Error(Errc::reserved_marker, "jpeg: reserved marker 0x" + hex_byte(m));
    if (bytes.size() - pos < 2) throw Error(Errc::segment_overrun, "jpeg: truncated length field");
    const std::size_t len = (static_cast<std::size_t>(bytes[pos]) << 8) | bytes[pos + 1];
    if (len < 2) throw Error(Errc::malformed_segment, "jpeg: segment length < 2");
    if (len > bytes.size() - pos) throw Error(Errc::segment_overrun, "jpeg: segment overruns file");
    out.segments.push_back({m, at, len - 2});
    pos += len;
    if (m == kSos) break;
  }
  return out;
}

std::optional<Rational> parse_zoom(std::span<const std::uint8_t> bytes) {
  const auto segs = scan_segments(bytes);
  for (const auto& s : segs.segments) {
    if (s.marker != kApp1) continue;
    const auto p = payload(bytes, s);
    static constexpr std::uint8_t kExif[6] = {'E', 'x', 'i', 'f', 0, 0};
    if (p.size() < 6 || std::memcmp(p.data(), kExif, 6) != 0) continue;
    const TiffReader tiff(p.subspan(6));
    const auto exif = tiff.find(tiff.ifd0(), kExifIfdTag);
    if (!exif) return std::nullopt;
    if (exif->count != 1 || (exif->type != kTypeLong && exif->type != 13))
      TiffReader::fail("bad Exif IFD pointer");
    const auto zoom = tiff.find(tiff.u32(exif->value_at), kZoomTag);
    if (!zoom) return std::nullopt;
    if (zoom->type != kTypeRational || zoom->count != 1) TiffReader::fail("bad DigitalZoomRatio entry");
    const std::size_t at = tiff.u32(zoom->value_at);
    return Rational{tiff.u32(at), tiff.u32(at + 4)};
  }
  return std::nullopt;
}

MfpTags detect_mfp(std::span<const std::uint8_t> bytes) {
  const auto segs = scan_segments(bytes);
  MfpTags tags;
  for (const auto& s : segs.segments) {
    if (s.marker != kApp4) continue;
    const auto p = payload(bytes, s);
    tags.mhdr = tags.mhdr || contains(p, "MHDR");
    tags.lhdr = tags.lhdr || contains(p, "LHDR");
    tags.mfp3 = tags.mfp3 || contains(p, "MFP3");
  }
  tags.zoom_ratio = parse_zoom(bytes);
  return tags;
}

}  // namespace prnukit
