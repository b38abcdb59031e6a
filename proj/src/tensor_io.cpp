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

#include "prnukit/tensor_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "prnukit/error.hpp"

namespace prnukit {
namespace fs = std::filesystem;

namespace {

constexpr std::array<char, 4> kFptMagic{'F', 'P', 'T', '1'};

std::uint32_t read_u32le(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}

void put_u32le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

struct FptTensor {
  std::size_t height = 0, width = 0, channels = 0;
  std::vector<float> data;
};

FptTensor parse_fpt(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  if (bytes.size() < 16) throw Error(Errc::truncated, name + ": FPT header truncated");
  FptTensor t;
  t.height = read_u32le(bytes.data() + 4);
  t.width = read_u32le(bytes.data() + 8);
  t.channels = read_u32le(bytes.data() + 12);
  if (t.height == 0 || t.width == 0 || t.channels == 0)
    throw Error(Errc::malformed_header, name + ": FPT header has a zero dimension");
  const std::size_t n = t.height * t.width * t.channels;
  if (n > (bytes.size() - 16) / 4)
    throw Error(Errc::truncated, name + ": FPT payload truncated");
  t.data.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    t.data[i] = std::bit_cast<float>(read_u32le(bytes.data() + 16 + 4 * i));
  return t;
}

std::string encode_fpt(std::size_t h, std::size_t w, std::size_t c,
                       const auto& values) {
  std::string out(kFptMagic.begin(), kFptMagic.end());
  put_u32le(out, static_cast<std::uint32_t>(h));
  put_u32le(out, static_cast<std::uint32_t>(w));
  put_u32le(out, static_cast<std::uint32_t>(c));
  out.reserve(out.size() + values.size() * 4);
  for (auto v : values) put_u32le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

class PnmHeaderReader {
 public:
  PnmHeaderReader(const std::vector<std::uint8_t>& b, std::string name)
      : bytes_(b), name_(std::move(name)) {}

  std::size_t next_uint() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) throw Error(Errc::truncated, name_ + ": PNM header truncated");
    if (!std::isdigit(bytes_[pos_]))
      throw Error(Errc::malformed_header, name_ + ": expected a number in PNM header");
    std::size_t v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > (1u << 30)) throw Error(Errc::malformed_header, name_ + ": PNM value too large");
    }
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t payload_start() {
    if (pos_ >= bytes_.size()) throw Error(Errc::truncated, name_ + ": PNM header truncated");
    if (!std::isspace(bytes_[pos_]))
      throw Error(Errc::malformed_header, name_ + ": missing whitespace after maxval");
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::string name_;
  std::size_t pos_ = 2;
};

Image parse_pnm(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  const std::size_t channels = bytes[1] == '5' ? 1 : 3;
  PnmHeaderReader rd(bytes, name);
  const auto width = rd.next_uint();
  const auto height = rd.next_uint();
  const auto maxval = rd.next_uint();
  if (width == 0 || height == 0)
    throw Error(Errc::malformed_header, name + ": zero image dimension");
  if (maxval != 255 && maxval != 65535)
    throw Error(Errc::unsupported_format,
                name + ": PNM maxval must be 255 or 65535, got " + std::to_string(maxval));
  const auto start = rd.payload_start();
  const int depth = maxval == 255 ? 8 : 16;
  const std::size_t bps = depth / 8;
  const std::size_t n = width * height * channels;
  if (start > bytes.size() || (bytes.size() - start) / bps < n)
    throw Error(Errc::truncated, name + ": PNM payload truncated");
  Image img(height, width, channels, depth);
  const std::uint8_t* p = bytes.data() + start;
  if (bps == 1) {
    std::copy(p, p + n, img.pixels.begin());
  } else {
    for (std::size_t i = 0; i < n; ++i)
      img.pixels[i] = static_cast<std::uint16_t>(p[2 * i] << 8 | p[2 * i + 1]);
  }
  return img;
}

Image image_from_fpt(const FptTensor& t, const std::string& name) {
  if (t.channels != 1 && t.channels != 3)
    throw Error(Errc::unsupported_format, name + ": FPT image must have 1 or 3 channels");
  Image img(t.height, t.width, t.channels, 8);
  float maxv = 0.0f;
  for (std::size_t i = 0; i < t.data.size(); ++i) {
    const float v = t.data[i];
    if (!(v >= 0.0f && v <= 65535.0f) || v != std::floor(v))
      throw Error(Errc::unsupported_format,
                  name + ": FPT samples must be integers in [0, 65535] to load as an image");
    img.pixels[i] = static_cast<std::uint16_t>(v);
    maxv = std::max(maxv, v);
  }
  img.depth = maxv > 255.0f ? 16 : 8;
  return img;
}

bool has_fpt_magic(const std::vector<std::uint8_t>& b) {
  return b.size() >= 4 && std::equal(kFptMagic.begin(), kFptMagic.end(), b.begin());
}

bool is_fpt_path(const fs::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
  return ext == ".fpt";
}

// Catmull-Rom weights for the four taps around x.
struct Taps {
  std::array<std::size_t, 4> index;
  std::array<double, 4> weight;
};

double cubic_kernel(double t) {
  constexpr double a = -0.5;
  t = std::abs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

std::vector<Taps> make_taps(std::size_t in, std::size_t out) {
  std::vector<Taps> taps(out);
  const double scale = static_cast<double>(in) / static_cast<double>(out);
  for (std::size_t o = 0; o < out; ++o) {
    const double x = (static_cast<double>(o) + 0.5) * scale - 0.5;
    const double fl = std::floor(x);
    for (int k = 0; k < 4; ++k) {
      const double src = fl - 1.0 + k;
      const auto clamped =
          static_cast<std::size_t>(std::clamp(src, 0.0, static_cast<double>(in - 1)));
      taps[o].index[k] = clamped;
      taps[o].weight[k] = cubic_kernel(x - src);
    }
  }
  return taps;
}

}  // namespace

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::io, "read failed for " + path.string());
  return bytes;
}

void write_file_atomic(const fs::path& path, const std::string& bytes) {
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::unwritable, "cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(Errc::unwritable, "write failed for " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(Errc::unwritable, "cannot rename into " + path.string());
  }
}

Image load_image(const fs::path& path) {
  const auto bytes = read_file(path);
  const auto name = path.string();
  Image img;
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) {
    img = parse_pnm(bytes, name);
  } else if (has_fpt_magic(bytes)) {
    img = image_from_fpt(parse_fpt(bytes, name), name);
  } else {
    throw Error(Errc::unsupported_format, name + ": not a P5/P6 PNM or FPT file");
  }
  img.source_tag = path.filename().string();
  return img;
}

void save_image(const Image& img, const fs::path& path) {
  validate(img);
  if (is_fpt_path(path)) {
    write_file_atomic(path, encode_fpt(img.height, img.width, img.channels, img.pixels));
    return;
  }
  std::ostringstream header;
  header << (img.channels == 1 ? "P5" : "P6") << '\n'
         << img.width << ' ' << img.height << '\n'
         << img.max_value() << '\n';
  std::string out = header.str();
  if (img.depth == 8) {
    out.reserve(out.size() + img.pixels.size());
    for (auto v : img.pixels) out.push_back(static_cast<char>(v));
  } else {
    out.reserve(out.size() + 2 * img.pixels.size());
    for (auto v : img.pixels) {
      out.push_back(static_cast<char>(v >> 8));
      out.push_back(static_cast<char>(v & 0xFF));
    }
  }
  write_file_atomic(path, out);
}

Plane load_plane(const fs::path& path) {
  const auto bytes = read_file(path);
  if (!has_fpt_magic(bytes)) return to_luma(load_image(path));
  const auto t = parse_fpt(bytes, path.string());
  if (t.channels != 1)
    throw Error(Errc::unsupported_format, path.string() + ": FPT plane must have one channel");
  Plane p(t.height, t.width);
  std::copy(t.data.begin(), t.data.end(), p.values.begin());
  validate_finite(p, path.string().c_str());
  return p;
}

void save_plane(const Plane& p, const fs::path& path) {
  validate_finite(p, "save_plane");
  write_file_atomic(path, encode_fpt(p.height, p.width, 1, p.values));
}

Plane to_luma(const Image& img) {
  Plane out(img.height, img.width);
  if (img.channels == 1) {
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = img.pixels[i];
  } else if (img.channels == 3) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto* px = &img.pixels[3 * i];
      out.values[i] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
    }
  } else {
    throw Error(Errc::invalid_argument,
                "to_luma: unsupported channel count " + std::to_string(img.channels));
  }
  return out;
}

Plane working_luma(const Image& img) {
  Plane p = to_luma(img);
  if (img.depth == 16)
    for (auto& v : p.values) v /= 257.0;
  return p;
}

Plane crop_center(const Plane& p, std::size_t h, std::size_t w) {
  if (h > p.height || w > p.width)
    throw Error(Errc::invalid_argument, "crop_center: requested block exceeds plane");
  const std::size_t r0 = (p.height - h) / 2;
  const std::size_t c0 = (p.width - w) / 2;
  Plane out(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    auto src = p.row(r0 + r).subspan(c0, w);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

Plane resize_bicubic(const Plane& p, std::size_t h, std::size_t w) {
  if (h < 4 || w < 4) throw Error(Errc::invalid_argument, "resize_bicubic: target below 4x4");
  if (p.empty()) throw Error(Errc::invalid_argument, "resize_bicubic: empty input");
  const auto col_taps = make_taps(p.width, w);
  const auto row_taps = make_taps(p.height, h);

  Plane horiz(p.height, w);
  for (std::size_t r = 0; r < p.height; ++r) {
    const auto src = p.row(r);
    auto dst = horiz.row(r);
    for (std::size_t c = 0; c < w; ++c) {
      const auto& t = col_taps[c];
      dst[c] = t.weight[0] * src[t.index[0]] + t.weight[1] * src[t.index[1]] +
               t.weight[2] * src[t.index[2]] + t.weight[3] * src[t.index[3]];
    }
  }
  Plane out(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    const auto& t = row_taps[r];
    auto dst = out.row(r);
    for (int k = 0; k < 4; ++k) {
      const auto src = horiz.row(t.index[k]);
      const double wk = t.weight[k];
      for (std::size_t c = 0; c < w; ++c) dst[c] += wk * src[c];
    }
  }
  return out;
}

Plane circular_shift(const Plane& p, long d1, long d2) {
  Plane out(p.height, p.width);
  const long H = static_cast<long>(p.height), W = static_cast<long>(p.width);
  if (H == 0 || W == 0) return out;
  const long s1 = ((d1 % H) + H) % H, s2 = ((d2 % W) + W) % W;
  for (long r = 0; r < H; ++r) {
    const auto src = p.row(static_cast<std::size_t>((r + s1) % H));
    auto dst = out.row(static_cast<std::size_t>(r));
    for (long c = 0; c < W; ++c) dst[c] = src[(c + s2) % W];
  }
  return out;
}

Image from_plane(const Plane& p, int depth) {
  Image img(p.height, p.width, 1, depth);
  const double maxv = static_cast<double>(img.max_value());
  for (std::size_t i = 0; i < p.size(); ++i)
    img.pixels[i] = static_cast<std::uint16_t>(std::clamp(std::round(p.values[i]), 0.0, maxv));
  return img;
}

// ---------------------------------------------------------------------------

const char* role_name(Role r) noexcept { return r == Role::reference ? "reference" : "test"; }
const char* label_name(Label l) noexcept { return l == Label::genuine ? "genuine" : "impostor"; }

namespace {

constexpr std::array<std::pair<Tag, const char*>, 4> kTagNames{{
    {kTagMfp, "mfp"}, {kTagZoom, "zoom"}, {kTagBokeh, "bokeh"}, {kTagRaw, "raw"}}};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::string tags_string(std::uint8_t tags) {
  std::string out;
  for (const auto& [tag, name] : kTagNames) {
    if (!(tags & tag)) continue;
    if (!out.empty()) out += ',';
    out += name;
  }
  return out;
}

void DatasetManifest::add(ManifestEntry e) {
  for (const auto& existing : entries)
    if (existing.path == e.path) throw Error(Errc::duplicate, "duplicate manifest path: " + e.path);
  entries.push_back(std::move(e));
}

DatasetManifest parse_manifest(const std::string& text) {
  DatasetManifest m;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto fields = split(line, '\t');
    const auto where = "manifest line " + std::to_string(line_no);
    if (fields.size() < 3 || fields.size() > 4 || fields[0].empty())
      throw Error(Errc::malformed_header, where + ": expected path, role, label[, tags]");
    ManifestEntry e;
    e.path = fields[0];
    if (fields[1] == "reference") e.role = Role::reference;
    else if (fields[1] == "test") e.role = Role::test;
    else throw Error(Errc::vocabulary, where + ": unknown role '" + fields[1] + "'");
    if (fields[2] == "genuine") e.label = Label::genuine;
    else if (fields[2] == "impostor") e.label = Label::impostor;
    else throw Error(Errc::vocabulary, where + ": unknown label '" + fields[2] + "'");
    if (fields.size() == 4 && !fields[3].empty()) {
      for (const auto& name : split(fields[3], ',')) {
        auto it = std::find_if(kTagNames.begin(), kTagNames.end(),
                               [&](const auto& kv) { return name == kv.second; });
        if (it == kTagNames.end())
          throw Error(Errc::vocabulary, where + ": unknown tag '" + name + "'");
        e.tags |= it->first;
      }
    }
    m.add(std::move(e));
  }
  return m;
}

std::string format_manifest(const DatasetManifest& m) {
  std::string out;
  for (const auto& e : m.entries) {
    out += e.path;
    out += '\t';
    out += role_name(e.role);
    out += '\t';
    out += label_name(e.label);
    out += '\t';
    out += tags_string(e.tags);
    out += '\n';
  }
  return out;
}

DatasetManifest load_manifest(const fs::path& path) {
  const auto bytes = read_file(path);
  return parse_manifest(std::string(bytes.begin(), bytes.end()));
}

void save_manifest(const DatasetManifest& m, const fs::path& path) {
  write_file_atomic(path, format_manifest(m));
}

fs::path resolve_entry(const fs::path& manifest_path, const ManifestEntry& e) {
  fs::path p(e.path);
  if (p.is_absolute()) return p;
  return manifest_path.parent_path() / p;
}

}  // namespace prnukit
