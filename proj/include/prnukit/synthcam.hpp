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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prnukit/correlate.hpp"
#include "prnukit/local_analysis.hpp"
#include "prnukit/plane.hpp"

namespace prnukit {

enum class SceneKind { flat, gradient, texture };

struct Scene {
  SceneKind kind = SceneKind::flat;
  double intensity = 128.0;  // flat scenes
  std::uint64_t seed = 0;    // texture scenes; varies per shot
};

enum class Waveform { cosine, tiled_noise };

/// Pipeline-injected periodic pattern. tiled_noise satisfies
/// P(i + p1, j + p2) = P(i, j) and nothing shorter; cosine runs along the
/// basis with round(0.45 |basis|) cycles per basis step.
struct PatternSpec {
  Shift basis{60, 65};
  double amplitude = 2.0;  // std (tiled_noise) or peak (cosine), 8-bit units
  Shift phase{0, 0};
  Waveform waveform = Waveform::tiled_noise;
  std::uint64_t seed = 1;
};

struct SynthSpec {
  std::size_t height = 512, width = 512;
  double prnu_sigma = 0.02;
  double noise_sigma = 3.0;
  Scene scene;
  std::optional<PatternSpec> pattern;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TruthBundle {
  Plane k_true;
  std::optional<Plane> pattern_plane;
  std::optional<ShiftMap> hdr_truth;
  std::optional<Plane> bokeh_truth;
};

Plane gen_prnu(const SynthSpec& spec);
Plane scene_plane(const SynthSpec& spec, std::size_t shot);
Plane pattern_plane(const PatternSpec& p, std::size_t height, std::size_t width);

/// Y = clamp(round((1 + K) .* X + Theta + P), 0, 255); shot selects the
/// independent noise (and texture) draw.
std::pair<Image, TruthBundle> capture(const SynthSpec& spec, const Plane& k, std::size_t shot = 0);

struct Rect {
  std::size_t row = 0, col = 0, height = 0, width = 0;
  bool overlaps(const Rect& o) const noexcept;
  bool contains(std::size_t r, std::size_t c) const noexcept {
    return r >= row && r < row + height && c >= col && c < col + width;
  }
};

struct HdrRegion {
  Rect rect;
  Shift shift;
};

inline constexpr long kMaxHdrShift = 16;

/// Inside each rect, out(i, j) = in(i + d1, j + d2), clamped to the frame.
/// The truth map assigns each block the shift of the region holding its center.
std::pair<Image, ShiftMap> apply_hdr_shifts(const Image& img, const std::vector<HdrRegion>& regions,
                                            std::size_t block = kDefaultHdrBlock);

/// Inside mask: Gaussian blur (radius 3 sigma, per channel) plus grain.
std::pair<Image, Plane> apply_bokeh(const Image& img, const Plane& mask, double blur_sigma,
                                    double grain_sigma, std::uint64_t seed = 0);

/// Flat `key = value` grammar, see README.
SynthSpec parse_synth_spec(const std::string& text);
std::string format_synth_spec(const SynthSpec& spec);

}  // namespace prnukit
