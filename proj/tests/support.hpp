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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "prnukit/plane.hpp"

namespace prnukit::testing {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("prnukit_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_bytes(const std::filesystem::path& p, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline Image random_image(std::size_t h, std::size_t w, std::size_t c, int depth, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Image img(h, w, c, depth);
  const std::uint32_t top = (1u << depth);
  for (auto& v : img.pixels) v = static_cast<std::uint16_t>(gen() % top);
  return img;
}

inline Plane gaussian_plane(std::size_t h, std::size_t w, std::uint64_t seed, double sigma = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, sigma);
  Plane p(h, w);
  for (auto& v : p.values) v = nd(gen);
  return p;
}

inline Plane constant_plane(std::size_t h, std::size_t w, double v) {
  Plane p(h, w);
  for (auto& x : p.values) x = v;
  return p;
}

// O(H^2 W^2) circular NCC, written without any FFT or helper from the library.
inline Plane brute_ncc(const Plane& a, const Plane& b) {
  const std::size_t h = a.height, w = a.width, n = h * w;
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a.values[i];
    mb += b.values[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double na = 0, nb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    na += (a.values[i] - ma) * (a.values[i] - ma);
    nb += (b.values[i] - mb) * (b.values[i] - mb);
  }
  const double norm = std::sqrt(na * nb);
  Plane out(h, w);
  for (std::size_t s1 = 0; s1 < h; ++s1)
    for (std::size_t s2 = 0; s2 < w; ++s2) {
      double acc = 0;
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j)
          acc += (a(i, j) - ma) * (b((i + s1) % h, (j + s2) % w) - mb);
      out(s1, s2) = acc / norm;
    }
  return out;
}

inline double max_abs_diff(const Plane& a, const Plane& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline Plane disk_mask(std::size_t h, std::size_t w, double cr, double cc, double radius) {
  Plane m(h, w);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) {
      const double dr = static_cast<double>(r) + 0.5 - cr, dc = static_cast<double>(c) + 0.5 - cc;
      m(r, c) = dr * dr + dc * dc <= radius * radius ? 1.0 : 0.0;
    }
  return m;
}

// ---- crafted JPEG files -----------------------------------------------------

struct JpegPlan {
  bool mhdr = false, lhdr = false, mfp3 = false;
  bool big_endian = false;
  bool with_exif = true;
  bool with_zoom = true;
  std::uint32_t zoom_num = 2, zoom_den = 1;
  std::uint64_t filler_seed = 0;  // noise bytes around the tags
};

class ByteWriter {
 public:
  explicit ByteWriter(bool big) : big_(big) {}
  void u8(std::uint8_t v) { out.push_back(v); }
  void u16(std::uint16_t v) {
    if (big_) {
      u8(v >> 8);
      u8(v & 0xFF);
    } else {
      u8(v & 0xFF);
      u8(v >> 8);
    }
  }
  void u32(std::uint32_t v) {
    if (big_) {
      u16(static_cast<std::uint16_t>(v >> 16));
      u16(static_cast<std::uint16_t>(v & 0xFFFF));
    } else {
      u16(static_cast<std::uint16_t>(v & 0xFFFF));
      u16(static_cast<std::uint16_t>(v >> 16));
    }
  }
  void bytes(const std::string& s) { out.insert(out.end(), s.begin(), s.end()); }
  std::vector<std::uint8_t> out;

 private:
  bool big_;
};

// TIFF block: header, IFD0 {Make, ExifIFD}, Exif IFD {ExposureTime, [DigitalZoomRatio]}.
inline std::vector<std::uint8_t> build_tiff(const JpegPlan& p) {
  ByteWriter t(p.big_endian);
  t.bytes(p.big_endian ? "MM" : "II");
  t.u16(42);
  t.u32(8);
  // IFD0 at 8: 2 entries -> 2 + 24 + 4 = 30 bytes; Make string follows at 38
  t.u16(2);
  t.u16(0x010F);
  t.u16(2);
  t.u32(8);
  t.u32(38);
  t.u16(0x8769);
  t.u16(4);
  t.u32(1);
  t.u32(46);
  t.u32(0);
  t.bytes(std::string("samsung", 7));
  t.u8(0);
  // Exif IFD at 46
  const std::uint16_t n = p.with_zoom ? 2 : 1;
  const std::uint32_t data_at = 46 + 2 + 12u * n + 4;
  t.u16(n);
  t.u16(0x829A);
  t.u16(5);
  t.u32(1);
  t.u32(data_at);
  if (p.with_zoom) {
    t.u16(0xA404);
    t.u16(5);
    t.u32(1);
    t.u32(data_at + 8);
  }
  t.u32(0);
  t.u32(1);
  t.u32(120);
  if (p.with_zoom) {
    t.u32(p.zoom_num);
    t.u32(p.zoom_den);
  }
  return t.out;
}

inline void segment(std::vector<std::uint8_t>& f, std::uint8_t marker, const std::vector<std::uint8_t>& payload) {
  f.push_back(0xFF);
  f.push_back(marker);
  const std::size_t len = payload.size() + 2;
  f.push_back(static_cast<std::uint8_t>(len >> 8));
  f.push_back(static_cast<std::uint8_t>(len & 0xFF));
  f.insert(f.end(), payload.begin(), payload.end());
}

inline std::vector<std::uint8_t> as_bytes(const std::string& s) { return {s.begin(), s.end()}; }

inline std::vector<std::uint8_t> build_jpeg(const JpegPlan& p) {
  std::mt19937_64 gen(p.filler_seed);
  // lowercase filler only, so it can never spell an uppercase tag by accident
  auto filler = [&](std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += static_cast<char>('a' + gen() % 26);
    return s;
  };
  std::vector<std::uint8_t> f{0xFF, 0xD8};
  segment(f, 0xE0, as_bytes(std::string("JFIF\0\1\1\0\0\1\0\1\0\0", 14)));
  if (p.with_exif) {
    auto exif = as_bytes(std::string("Exif\0\0", 6));
    const auto tiff = build_tiff(p);
    exif.insert(exif.end(), tiff.begin(), tiff.end());
    segment(f, 0xE1, exif);
  }
  std::string app4 = filler(gen() % 16);
  if (p.mhdr) app4 += "MHDR" + filler(gen() % 8);
  if (p.lhdr) app4 += "LHDR" + filler(gen() % 8);
  if (p.mfp3) app4 += "MFP3" + filler(gen() % 8);
  segment(f, 0xE4, as_bytes(app4));
  segment(f, 0xDB, std::vector<std::uint8_t>(65, 1));
  segment(f, 0xDA, {1, 1, 0, 0, 63, 0});
  for (int i = 0; i < 64; ++i) f.push_back(static_cast<std::uint8_t>(gen() & 0xFF));
  f.push_back(0xFF);
  f.push_back(0xD9);
  return f;
}

}  // namespace prnukit::testing
