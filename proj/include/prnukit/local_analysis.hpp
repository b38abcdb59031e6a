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
#include <vector>

#include "prnukit/correlate.hpp"
#include "prnukit/fingerprint.hpp"
#include "prnukit/plane.hpp"

namespace prnukit {

// ---- HDR local translations ------------------------------------------------

struct ShiftCell {
  Shift shift;
  double confidence = 0.0;  // block-level PCE at the chosen shift
  std::size_t row = 0, col = 0;  // block origin in pixels
};

/// Block grid over the frame; the last row/column of blocks is clipped.
struct ShiftMap {
  std::size_t height = 0, width = 0;  // frame
  std::size_t block = 512, stride = 512, search_radius = 20;
  std::size_t rows = 0, cols = 0;
  std::vector<ShiftCell> cells;  // row-major

  const ShiftCell& at(std::size_t r, std::size_t c) const { return cells[r * cols + c]; }
  ShiftCell& at(std::size_t r, std::size_t c) { return cells[r * cols + c]; }
};

inline constexpr std::size_t kDefaultHdrBlock = 512;
inline constexpr std::size_t kDefaultSearchRadius = 20;

/// Empty map (zero shifts) with the grid geometry filled in.
ShiftMap make_shift_grid(std::size_t height, std::size_t width, std::size_t block,
                         std::size_t stride = 0, std::size_t search_radius = kDefaultSearchRadius);

/// Per block: argmax of rho_{w,term}(s) over |s1|,|s2| <= search_radius.
ShiftMap block_shift_map(const Plane& w, const Plane& term, std::size_t block = kDefaultHdrBlock,
                         std::size_t search_radius = kDefaultSearchRadius, std::size_t stride = 0);

/// Each block of fp resampled at (i + d1, j + d2) mod frame; later blocks
/// win where strided blocks overlap.
Fingerprint adapt_fingerprint(const Fingerprint& fp, const ShiftMap& map);

// ---- Bokeh ---------------------------------------------------------------

struct BlockCorrMap {
  std::size_t height = 0, width = 0;
  std::size_t block = 21;
  Plane grid;  // ceil(H/block) x ceil(W/block) of rho(0,0)
};

inline constexpr std::size_t kDefaultBokehBlock = 21;

BlockCorrMap block_corr_map(const Plane& w, const Plane& term,
                            std::size_t block = kDefaultBokehBlock);

struct BokehMask {
  std::size_t rows = 0, cols = 0, block = 0;
  std::vector<std::uint8_t> block_mask;  // 1 = bokeh suspect
  Plane pixel_mask;                      // block mask at pixel resolution
  double threshold_used = 0.0;
  bool full_frame_warning = false;

  std::size_t masked_pixels() const;
};

/// Cells below threshold are flagged; nullopt selects Otsu over the cells.
BokehMask bokeh_mask(const BlockCorrMap& map, std::optional<double> threshold = std::nullopt);

double otsu_threshold(const std::vector<double>& values, int bins = 256);

/// Masked samples replaced by the plane's unmasked mean before correlating;
/// the PCE support counts unmasked samples only.
PceResult masked_pce(const Plane& w, const Plane& term, const BokehMask& mask);

inline constexpr double kMaxMaskedFraction = 0.9;

}  // namespace prnukit
