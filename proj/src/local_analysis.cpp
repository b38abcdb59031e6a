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

#include "prnukit/local_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "prnukit/error.hpp"

namespace prnukit {
namespace {

Plane extract(const Plane& p, std::size_t r0, std::size_t c0, std::size_t h, std::size_t w) {
  Plane out(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    auto src = p.row(r0 + r).subspan(c0, w);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

bool is_constant(const Plane& p) {
  const auto [lo, hi] = std::minmax_element(p.values.begin(), p.values.end());
  return *lo == *hi;
}

std::size_t grid_count(std::size_t extent, std::size_t stride) {
  return (extent + stride - 1) / stride;
}

}  // namespace

ShiftMap make_shift_grid(std::size_t height, std::size_t width, std::size_t block,
                         std::size_t stride, std::size_t search_radius) {
  if (block == 0) throw Error(Errc::invalid_argument, "block size must be > 0");
  if (stride == 0) stride = block;
  ShiftMap m;
  m.height = height;
  m.width = width;
  m.block = block;
  m.stride = stride;
  m.search_radius = search_radius;
  m.rows = grid_count(height, stride);
  m.cols = grid_count(width, stride);
  m.cells.resize(m.rows * m.cols);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) {
      m.at(r, c).row = r * stride;
      m.at(r, c).col = c * stride;
    }
  return m;
}

ShiftMap block_shift_map(const Plane& w, const Plane& term, std::size_t block,
                         std::size_t search_radius, std::size_t stride) {
  if (!w.same_dims(term)) throw Error(Errc::dimension_mismatch, "block_shift_map: dims differ");
  if (block == 0 || block > std::min(w.height, w.width))
    throw Error(Errc::invalid_argument, "block_shift_map: block larger than frame");
  if (search_radius > block / 4)
    throw Error(Errc::invalid_argument, "block_shift_map: search_radius must be <= block/4");
  ShiftMap map = make_shift_grid(w.height, w.width, block, stride, search_radius);
  const long rad = static_cast<long>(search_radius);
  for (auto& cell : map.cells) {
    const std::size_t bh = std::min(block, w.height - cell.row);
    const std::size_t bw = std::min(block, w.width - cell.col);
    const Plane a = extract(w, cell.row, cell.col, bh, bw);
    const Plane b = extract(term, cell.row, cell.col, bh, bw);
    if (bh < 2 * search_radius + 1 || bw < 2 * search_radius + 1 || is_constant(a) ||
        is_constant(b))
      continue;  // clipped sliver or flat block: no evidence, keep (0,0)
    const CorrSurface s = ncc_surface(a, b);
    long best1 = 0, best2 = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (long s1 = -rad; s1 <= rad; ++s1)
      for (long s2 = -rad; s2 <= rad; ++s2) {
        const double v = s.at(s1, s2);
        if (v > best) {
          best = v;
          best1 = s1;
          best2 = s2;
        }
      }
    cell.shift = {best1, best2};
    const auto r = static_cast<std::size_t>((best1 + long(bh)) % long(bh));
    const auto c = static_cast<std::size_t>((best2 + long(bw)) % long(bw));
    cell.confidence = pce_at(s, r, c, bh * bw);
  }
  return map;
}

Fingerprint adapt_fingerprint(const Fingerprint& fp, const ShiftMap& map) {
  const Plane& src = fp.plane;
  if (src.height != map.height || src.width != map.width)
    throw Error(Errc::dimension_mismatch, "adapt_fingerprint: map and fingerprint dims differ");
  Fingerprint out = fp;
  const long H = static_cast<long>(src.height), W = static_cast<long>(src.width);
  for (const auto& cell : map.cells) {
    const std::size_t bh = std::min(map.block, src.height - cell.row);
    const std::size_t bw = std::min(map.block, src.width - cell.col);
    for (std::size_t r = cell.row; r < cell.row + bh; ++r) {
      const auto sr = static_cast<std::size_t>(((static_cast<long>(r) + cell.shift.s1) % H + H) % H);
      for (std::size_t c = cell.col; c < cell.col + bw; ++c) {
        const auto sc = static_cast<std::size_t>(((static_cast<long>(c) + cell.shift.s2) % W + W) % W);
        out.plane(r, c) = src(sr, sc);
      }
    }
  }
  out.post_flags.emplace_back("adapted");
  return out;
}

BlockCorrMap block_corr_map(const Plane& w, const Plane& term, std::size_t block) {
  if (!w.same_dims(term)) throw Error(Errc::dimension_mismatch, "block_corr_map: dims differ");
  if (block < 3) throw Error(Errc::invalid_argument, "block_corr_map: block must be >= 3");
  BlockCorrMap m;
  m.height = w.height;
  m.width = w.width;
  m.block = block;
  m.grid = Plane(grid_count(w.height, block), grid_count(w.width, block));
  for (std::size_t gr = 0; gr < m.grid.height; ++gr)
    for (std::size_t gc = 0; gc < m.grid.width; ++gc) {
      const std::size_t r0 = gr * block, c0 = gc * block;
      const std::size_t r1 = std::min(r0 + block, w.height), c1 = std::min(c0 + block, w.width);
      const double n = static_cast<double>((r1 - r0) * (c1 - c0));
      double ma = 0.0, mb = 0.0;
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t c = c0; c < c1; ++c) {
          ma += w(r, c);
          mb += term(r, c);
        }
      ma /= n;
      mb /= n;
      double sab = 0.0, saa = 0.0, sbb = 0.0;
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t c = c0; c < c1; ++c) {
          const double a = w(r, c) - ma, b = term(r, c) - mb;
          sab += a * b;
          saa += a * a;
          sbb += b * b;
        }
      m.grid(gr, gc) = (saa > 0.0 && sbb > 0.0) ? sab / std::sqrt(saa * sbb) : 0.0;
    }
  return m;
}

std::size_t BokehMask::masked_pixels() const {
  return static_cast<std::size_t>(
      std::count_if(pixel_mask.values.begin(), pixel_mask.values.end(), [](double v) { return v != 0.0; }));
}

double otsu_threshold(const std::vector<double>& values, int bins) {
  if (values.empty()) return 0.0;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) return lo;
  const double width = (hi - lo) / bins;
  std::vector<double> hist(static_cast<std::size_t>(bins), 0.0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    hist[std::min(b, hist.size() - 1)] += 1.0;
  }
  const double total = static_cast<double>(values.size());
  double sum_all = 0.0;
  for (std::size_t b = 0; b < hist.size(); ++b) sum_all += static_cast<double>(b) * hist[b];
  double w0 = 0.0, sum0 = 0.0, best = -1.0;
  std::size_t best_bin = 0;
  for (std::size_t b = 0; b + 1 < hist.size(); ++b) {
    w0 += hist[b];
    sum0 += static_cast<double>(b) * hist[b];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double m0 = sum0 / w0, m1 = (sum_all - sum0) / w1;
    const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
    if (between > best) {
      best = between;
      best_bin = b;
    }
  }
  return lo + width * static_cast<double>(best_bin + 1);
}

BokehMask bokeh_mask(const BlockCorrMap& map, std::optional<double> threshold) {
  BokehMask m;
  m.rows = map.grid.height;
  m.cols = map.grid.width;
  m.block = map.block;
  m.threshold_used = threshold ? *threshold : otsu_threshold(map.grid.values);
  m.block_mask.resize(map.grid.size());
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < map.grid.size(); ++i) {
    m.block_mask[i] = map.grid.values[i] < m.threshold_used ? 1 : 0;
    flagged += m.block_mask[i];
  }
  m.full_frame_warning = flagged == m.block_mask.size() && !m.block_mask.empty();
  m.pixel_mask = Plane(map.height, map.width);
  for (std::size_t r = 0; r < map.height; ++r)
    for (std::size_t c = 0; c < map.width; ++c)
      m.pixel_mask(r, c) = m.block_mask[(r / map.block) * m.cols + c / map.block];
  return m;
}

PceResult masked_pce(const Plane& w, const Plane& term, const BokehMask& mask) {
  if (!w.same_dims(term) || !w.same_dims(mask.pixel_mask))
    throw Error(Errc::dimension_mismatch, "masked_pce: dims differ");
  const std::size_t masked = mask.masked_pixels();
  if (static_cast<double>(masked) > kMaxMaskedFraction * static_cast<double>(w.size()))
    throw Error(Errc::insufficient_support, "masked_pce: mask covers more than 90% of the frame");
  const std::size_t support = w.size() - masked;
  if (masked == 0) return pce(w, term);
  auto fill = [&](const Plane& p) {
    double mean = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (mask.pixel_mask.values[i] == 0.0) mean += p.values[i];
    mean /= static_cast<double>(support);
    Plane out = p;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (mask.pixel_mask.values[i] != 0.0) out.values[i] = mean;
    return out;
  };
  return pce_from_surface(ncc_surface(fill(w), fill(term)), support);
}

}  // namespace prnukit
