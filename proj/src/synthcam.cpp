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

#include "prnukit/synthcam.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "prnukit/error.hpp"
#include "prnukit/rng.hpp"

namespace prnukit {
namespace {

enum Stream : std::uint32_t {
  kStreamPrnu = 1,
  kStreamNoise = 2,
  kStreamScene = 3,
  kStreamPattern = 4,
  kStreamGrain = 5,
};

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

void SynthSpec::validate() const {
  require_pipeline_size(height, width);
  if (!(prnu_sigma > 0.0 && prnu_sigma <= 0.1))
    throw Error(Errc::invalid_argument, "prnu_sigma must be in (0, 0.1]");
  if (!(noise_sigma >= 0.0)) throw Error(Errc::invalid_argument, "noise_sigma must be >= 0");
  if (scene.kind == SceneKind::flat && !(scene.intensity >= 16.0 && scene.intensity <= 250.0))
    throw Error(Errc::invalid_argument, "flat intensity must be in [16, 250]");
  if (pattern) {
    if (pattern->basis.s1 <= 0)
      throw Error(Errc::invalid_argument, "pattern basis must have a positive row period");
    if (!(pattern->amplitude >= 0.0))
      throw Error(Errc::invalid_argument, "pattern amplitude must be >= 0");
  }
}

Plane gen_prnu(const SynthSpec& spec) {
  spec.validate();
  CounterRng rng(spec.seed, kStreamPrnu);
  Plane k(spec.height, spec.width);
  for (auto& v : k.values) v = spec.prnu_sigma * rng.normal();
  return k;
}

Plane scene_plane(const SynthSpec& spec, std::size_t shot) {
  Plane x(spec.height, spec.width);
  const double h = static_cast<double>(spec.height), w = static_cast<double>(spec.width);
  switch (spec.scene.kind) {
    case SceneKind::flat:
      std::fill(x.values.begin(), x.values.end(), spec.scene.intensity);
      break;
    case SceneKind::gradient:
      for (std::size_t r = 0; r < spec.height; ++r)
        for (std::size_t c = 0; c < spec.width; ++c)
          x(r, c) = 32.0 + 192.0 * (static_cast<double>(c) + 0.5) / w;
      break;
    case SceneKind::texture: {
      // Smooth random field: low-frequency cosines plus a few soft edges.
      CounterRng rng(spec.scene.seed, kStreamScene, static_cast<std::uint32_t>(shot));
      struct Wave { double fy, fx, phase, amp; };
      std::vector<Wave> waves(12);
      for (auto& wv : waves) {
        const double period = 24.0 + 200.0 * rng.uniform();
        const double angle = kTwoPi * rng.uniform();
        wv = {std::sin(angle) / period, std::cos(angle) / period, kTwoPi * rng.uniform(),
              6.0 + 10.0 * rng.uniform()};
      }
      struct Edge { double ny, nx, offset, amp; };
      std::vector<Edge> edges(3);
      for (auto& e : edges) {
        const double angle = kTwoPi * rng.uniform();
        e = {std::sin(angle), std::cos(angle),
             (rng.uniform() - 0.5) * 0.6 * std::min(h, w), 25.0 * (rng.uniform() - 0.5)};
      }
      for (std::size_t r = 0; r < spec.height; ++r)
        for (std::size_t c = 0; c < spec.width; ++c) {
          const double y = static_cast<double>(r), xx = static_cast<double>(c);
          double v = 128.0;
          for (const auto& wv : waves) v += wv.amp * std::cos(kTwoPi * (wv.fy * y + wv.fx * xx) + wv.phase);
          for (const auto& e : edges) {
            const double d = e.ny * (y - h / 2) + e.nx * (xx - w / 2) - e.offset;
            v += e.amp * std::tanh(d / 2.0);
          }
          x(r, c) = std::clamp(v, 30.0, 225.0);
        }
      break;
    }
  }
  return x;
}

Plane pattern_plane(const PatternSpec& p, std::size_t height, std::size_t width) {
  Plane out(height, width);
  const long p1 = p.basis.s1, p2 = p.basis.s2;
  if (p1 <= 0) throw Error(Errc::invalid_argument, "pattern basis must have a positive row period");
  if (p.waveform == Waveform::tiled_noise) {
    for (std::size_t r = 0; r < height; ++r) {
      const long i = static_cast<long>(r) + p.phase.s1;
      const long strip = (i >= 0 ? i : i - p1 + 1) / p1;  // floor division
      const long row_in_tile = i - strip * p1;
      for (std::size_t c = 0; c < width; ++c) {
        const long col = static_cast<long>(c) + p.phase.s2 - strip * p2;
        out(r, c) = p.amplitude * normal_at(p.seed, kStreamPattern, static_cast<std::uint32_t>(row_in_tile),
                                            static_cast<std::uint32_t>(col));
      }
    }
  } else {
    const double norm2 = static_cast<double>(p1 * p1 + p2 * p2);
    const double cycles = std::max(1.0, std::round(0.45 * std::sqrt(norm2)));
    const double f1 = cycles * p1 / norm2, f2 = cycles * p2 / norm2;
    for (std::size_t r = 0; r < height; ++r)
      for (std::size_t c = 0; c < width; ++c) {
        const double i = static_cast<double>(static_cast<long>(r) + p.phase.s1);
        const double j = static_cast<double>(static_cast<long>(c) + p.phase.s2);
        out(r, c) = p.amplitude * std::cos(kTwoPi * (f1 * i + f2 * j));
      }
  }
  return out;
}

std::pair<Image, TruthBundle> capture(const SynthSpec& spec, const Plane& k, std::size_t shot) {
  spec.validate();
  if (k.height != spec.height || k.width != spec.width)
    throw Error(Errc::dimension_mismatch, "capture: PRNU plane dims differ from spec");
  const Plane x = scene_plane(spec, shot);
  TruthBundle truth;
  truth.k_true = k;
  if (spec.pattern) truth.pattern_plane = pattern_plane(*spec.pattern, spec.height, spec.width);
  CounterRng noise(spec.seed, kStreamNoise, static_cast<std::uint32_t>(shot));
  Image img(spec.height, spec.width, 1, 8);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double y = (1.0 + k.values[i]) * x.values[i] + spec.noise_sigma * noise.normal();
    if (truth.pattern_plane) y += truth.pattern_plane->values[i];
    img.pixels[i] = static_cast<std::uint16_t>(std::clamp(std::round(y), 0.0, 255.0));
  }
  std::ostringstream tag;
  tag << "synth:seed=" << spec.seed << ":shot=" << shot;
  img.source_tag = tag.str();
  return {std::move(img), std::move(truth)};
}

bool Rect::overlaps(const Rect& o) const noexcept {
  return row < o.row + o.height && o.row < row + height && col < o.col + o.width &&
         o.col < col + width;
}

std::pair<Image, ShiftMap> apply_hdr_shifts(const Image& img, const std::vector<HdrRegion>& regions,
                                            std::size_t block) {
  validate(img);
  for (std::size_t a = 0; a < regions.size(); ++a) {
    const auto& reg = regions[a];
    if (reg.rect.height == 0 || reg.rect.width == 0 || reg.rect.row + reg.rect.height > img.height ||
        reg.rect.col + reg.rect.width > img.width)
      throw Error(Errc::invalid_argument, "apply_hdr_shifts: region out of bounds");
    if (std::abs(reg.shift.s1) > kMaxHdrShift || std::abs(reg.shift.s2) > kMaxHdrShift)
      throw Error(Errc::invalid_argument, "apply_hdr_shifts: shifts are limited to 16 px");
    for (std::size_t b = a + 1; b < regions.size(); ++b)
      if (reg.rect.overlaps(regions[b].rect))
        throw Error(Errc::invalid_argument, "apply_hdr_shifts: regions overlap");
  }
  Image out = img;
  const long H = static_cast<long>(img.height), W = static_cast<long>(img.width);
  for (const auto& reg : regions)
    for (std::size_t r = reg.rect.row; r < reg.rect.row + reg.rect.height; ++r) {
      const auto sr = static_cast<std::size_t>(std::clamp(static_cast<long>(r) + reg.shift.s1, 0L, H - 1));
      for (std::size_t c = reg.rect.col; c < reg.rect.col + reg.rect.width; ++c) {
        const auto sc = static_cast<std::size_t>(std::clamp(static_cast<long>(c) + reg.shift.s2, 0L, W - 1));
        for (std::size_t ch = 0; ch < img.channels; ++ch) out.at(r, c, ch) = img.at(sr, sc, ch);
      }
    }
  ShiftMap truth = make_shift_grid(img.height, img.width, block, block, 0);
  for (auto& cell : truth.cells) {
    const std::size_t cr = cell.row + std::min(block, img.height - cell.row) / 2;
    const std::size_t cc = cell.col + std::min(block, img.width - cell.col) / 2;
    for (const auto& reg : regions)
      if (reg.rect.contains(cr, cc)) cell.shift = reg.shift;
  }
  return {std::move(out), std::move(truth)};
}

std::pair<Image, Plane> apply_bokeh(const Image& img, const Plane& mask, double blur_sigma,
                                    double grain_sigma, std::uint64_t seed) {
  validate(img);
  if (!(blur_sigma > 0.0)) throw Error(Errc::invalid_argument, "apply_bokeh: blur_sigma must be > 0");
  if (mask.height != img.height || mask.width != img.width)
    throw Error(Errc::dimension_mismatch, "apply_bokeh: mask dims differ from image");
  const long radius = static_cast<long>(std::ceil(3.0 * blur_sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double ksum = 0.0;
  for (long d = -radius; d <= radius; ++d) {
    const double v = std::exp(-0.5 * (d * d) / (blur_sigma * blur_sigma));
    kernel[static_cast<std::size_t>(d + radius)] = v;
    ksum += v;
  }
  for (auto& v : kernel) v /= ksum;

  const long H = static_cast<long>(img.height), W = static_cast<long>(img.width);
  Image out = img;
  CounterRng grain(seed, kStreamGrain);
  for (std::size_t ch = 0; ch < img.channels; ++ch) {
    Plane horiz(img.height, img.width);
    for (long r = 0; r < H; ++r)
      for (long c = 0; c < W; ++c) {
        double s = 0.0;
        for (long d = -radius; d <= radius; ++d)
          s += kernel[static_cast<std::size_t>(d + radius)] *
               img.at(static_cast<std::size_t>(r), static_cast<std::size_t>(std::clamp(c + d, 0L, W - 1)), ch);
        horiz(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = s;
      }
    const double maxv = static_cast<double>(img.max_value());
    for (long r = 0; r < H; ++r)
      for (long c = 0; c < W; ++c) {
        if (mask(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) == 0.0) continue;
        double s = 0.0;
        for (long d = -radius; d <= radius; ++d)
          s += kernel[static_cast<std::size_t>(d + radius)] *
               horiz(static_cast<std::size_t>(std::clamp(r + d, 0L, H - 1)), static_cast<std::size_t>(c));
        s += grain_sigma * grain.normal();
        out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c), ch) =
            static_cast<std::uint16_t>(std::clamp(std::round(s), 0.0, maxv));
      }
  }
  return {std::move(out), mask};
}

// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size()) throw Error(Errc::invalid_argument, "synth spec: bad number for " + key);
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  std::uint64_t out = 0;
  try {
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty() || v[0] == '-')
    throw Error(Errc::invalid_argument, "synth spec: bad integer for " + key);
  return out;
}

Shift to_shift(const std::string& key, const std::string& v) {
  const auto comma = v.find(',');
  if (comma == std::string::npos)
    throw Error(Errc::invalid_argument, "synth spec: " + key + " expects 'a,b'");
  return {static_cast<long>(to_double(key, trim(v.substr(0, comma)))),
          static_cast<long>(to_double(key, trim(v.substr(comma + 1))))};
}

}  // namespace

SynthSpec parse_synth_spec(const std::string& text) {
  SynthSpec spec;
  PatternSpec pat;
  bool has_pattern = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(Errc::invalid_argument, "synth spec: expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto val = trim(line.substr(eq + 1));
    if (key == "height") spec.height = to_u64(key, val);
    else if (key == "width") spec.width = to_u64(key, val);
    else if (key == "prnu_sigma") spec.prnu_sigma = to_double(key, val);
    else if (key == "noise_sigma") spec.noise_sigma = to_double(key, val);
    else if (key == "seed") spec.seed = to_u64(key, val);
    else if (key == "rng") {
      if (val != kRngName) throw Error(Errc::vocabulary, "synth spec: unsupported rng '" + val + "'");
    }
    else if (key == "scene") {
      if (val == "flat") spec.scene.kind = SceneKind::flat;
      else if (val == "gradient") spec.scene.kind = SceneKind::gradient;
      else if (val == "texture") spec.scene.kind = SceneKind::texture;
      else throw Error(Errc::vocabulary, "synth spec: unknown scene '" + val + "'");
    } else if (key == "scene_intensity") spec.scene.intensity = to_double(key, val);
    else if (key == "scene_seed") spec.scene.seed = to_u64(key, val);
    else if (key.rfind("pattern_", 0) == 0) {
      has_pattern = true;
      if (key == "pattern_basis") pat.basis = to_shift(key, val);
      else if (key == "pattern_amplitude") pat.amplitude = to_double(key, val);
      else if (key == "pattern_phase") pat.phase = to_shift(key, val);
      else if (key == "pattern_seed") pat.seed = to_u64(key, val);
      else if (key == "pattern_waveform") {
        if (val == "cosine") pat.waveform = Waveform::cosine;
        else if (val == "tiled_noise") pat.waveform = Waveform::tiled_noise;
        else throw Error(Errc::vocabulary, "synth spec: unknown waveform '" + val + "'");
      } else if (key == "pattern_enabled") {
        if (val == "false" || val == "0") has_pattern = false;
      } else throw Error(Errc::vocabulary, "synth spec: unknown key '" + key + "'");
    } else {
      throw Error(Errc::vocabulary, "synth spec: unknown key '" + key + "'");
    }
  }
  if (has_pattern) spec.pattern = pat;
  spec.validate();
  return spec;
}

std::string format_synth_spec(const SynthSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  os << "height = " << spec.height << "\nwidth = " << spec.width
     << "\nprnu_sigma = " << spec.prnu_sigma << "\nnoise_sigma = " << spec.noise_sigma
     << "\nseed = " << spec.seed << "\nscene = "
     << (spec.scene.kind == SceneKind::flat       ? "flat"
         : spec.scene.kind == SceneKind::gradient ? "gradient"
                                                  : "texture")
     << "\nscene_intensity = " << spec.scene.intensity << "\nscene_seed = " << spec.scene.seed << '\n';
  if (spec.pattern) {
    const auto& p = *spec.pattern;
    os << "pattern_basis = " << p.basis.s1 << "," << p.basis.s2
       << "\npattern_amplitude = " << p.amplitude << "\npattern_phase = " << p.phase.s1 << ","
       << p.phase.s2 << "\npattern_waveform = "
       << (p.waveform == Waveform::cosine ? "cosine" : "tiled_noise")
       << "\npattern_seed = " << p.seed << '\n';
  }
  os << "rng = " << kRngName << '\n';
  return os.str();
}

}  // namespace prnukit
