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

#include "prnukit/wavelet.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <sstream>

#include "prnukit/error.hpp"
#include "prnukit/tensor_io.hpp"

namespace prnukit {
namespace {

// Daubechies 8-tap (4 vanishing moments) scaling filter.
constexpr std::array<double, 8> kLow{
    0.23037781330885523,  0.71484657055254153,  0.63088076792959036,
    -0.02798376941698385, -0.18703481171888114, 0.03084138183598697,
    0.03288301166698295,  -0.01059740178499728};

constexpr std::array<double, 8> make_high() {
  std::array<double, 8> g{};
  for (std::size_t k = 0; k < 8; ++k) g[k] = (k % 2 ? -1.0 : 1.0) * kLow[7 - k];
  return g;
}
constexpr std::array<double, 8> kHigh = make_high();

// One analysis step over a strided line of even length n.
void analyze_line(const double* in, std::size_t stride, std::size_t n, double* lo, double* hi) {
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double a = 0.0, d = 0.0;
    for (std::size_t k = 0; k < 8; ++k) {
      const double x = in[((2 * i + k) % n) * stride];
      a += kLow[k] * x;
      d += kHigh[k] * x;
    }
    lo[i] = a;
    hi[i] = d;
  }
}

void synthesize_line(const double* lo, const double* hi, std::size_t n, double* out,
                     std::size_t stride) {
  for (std::size_t i = 0; i < n; ++i) out[i * stride] = 0.0;
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i)
    for (std::size_t k = 0; k < 8; ++k)
      out[((2 * i + k) % n) * stride] += kLow[k] * lo[i] + kHigh[k] * hi[i];
}

// Splits p (h x w) into four (h/2 x w/2) subbands.
void analyze_2d(const Plane& p, Plane& ll, SubbandLevel& lvl) {
  const std::size_t h = p.height, w = p.width, h2 = h / 2, w2 = w / 2;
  Plane rows(h, w);  // [lo | hi] along each row
  for (std::size_t r = 0; r < h; ++r)
    analyze_line(p.row(r).data(), 1, w, rows.row(r).data(), rows.row(r).data() + w2);

  Plane cols(h, w);
  std::vector<double> lo(h2), hi(h2);
  for (std::size_t c = 0; c < w; ++c) {
    analyze_line(rows.values.data() + c, w, h, lo.data(), hi.data());
    for (std::size_t r = 0; r < h2; ++r) {
      cols(r, c) = lo[r];
      cols(r + h2, c) = hi[r];
    }
  }
  ll = Plane(h2, w2);
  lvl.lh = Plane(h2, w2);
  lvl.hl = Plane(h2, w2);
  lvl.hh = Plane(h2, w2);
  for (std::size_t r = 0; r < h2; ++r)
    for (std::size_t c = 0; c < w2; ++c) {
      ll(r, c) = cols(r, c);
      lvl.hl(r, c) = cols(r, c + w2);
      lvl.lh(r, c) = cols(r + h2, c);
      lvl.hh(r, c) = cols(r + h2, c + w2);
    }
}

Plane synthesize_2d(const Plane& ll, const SubbandLevel& lvl) {
  const std::size_t h2 = ll.height, w2 = ll.width, h = 2 * h2, w = 2 * w2;
  Plane rows(h, w);
  std::vector<double> lo(h2), hi(h2), line(h);
  for (std::size_t c = 0; c < w; ++c) {
    const bool right = c >= w2;
    const std::size_t cc = right ? c - w2 : c;
    for (std::size_t r = 0; r < h2; ++r) {
      lo[r] = right ? lvl.hl(r, cc) : ll(r, cc);
      hi[r] = right ? lvl.hh(r, cc) : lvl.lh(r, cc);
    }
    synthesize_line(lo.data(), hi.data(), h, rows.values.data() + c, w);
  }
  Plane out(h, w);
  for (std::size_t r = 0; r < h; ++r)
    synthesize_line(rows.row(r).data(), rows.row(r).data() + w2, w, out.row(r).data(), 1);
  return out;
}

// Mean of v over a k x k window centered at each sample, periodic boundary.
Plane box_mean_periodic(const Plane& v, int k) {
  const std::size_t h = v.height, w = v.width;
  const long half = k / 2;
  Plane tmp(h, w), out(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    const auto src = v.row(r);
    auto dst = tmp.row(r);
    for (std::size_t c = 0; c < w; ++c) {
      double s = 0.0;
      for (long d = -half; d <= half; ++d)
        s += src[static_cast<std::size_t>(((static_cast<long>(c) + d) % long(w) + long(w)) % long(w))];
      dst[c] = s;
    }
  }
  const double norm = 1.0 / (static_cast<double>(k) * k);
  for (std::size_t r = 0; r < h; ++r) {
    auto dst = out.row(r);
    for (long d = -half; d <= half; ++d) {
      const auto rr = static_cast<std::size_t>(((static_cast<long>(r) + d) % long(h) + long(h)) % long(h));
      const auto src = tmp.row(rr);
      for (std::size_t c = 0; c < w; ++c) dst[c] += src[c];
    }
    for (auto& x : dst) x *= norm;
  }
  return out;
}

// Replaces the band by the part the Wiener gain removes, (1 - gain) * c.
// Coefficients at round-off level relative to the input are flushed to 0.
void removed_part(Plane& band, const DenoiseConfig& cfg, double flush) {
  const double s0 = cfg.base_noise_sigma * cfg.base_noise_sigma;
  Plane sq(band.height, band.width);
  for (std::size_t i = 0; i < band.size(); ++i) sq.values[i] = band.values[i] * band.values[i];
  Plane min_var(band.height, band.width, std::numeric_limits<double>::infinity());
  for (int k : cfg.window_sizes) {
    const Plane m = box_mean_periodic(sq, k);
    for (std::size_t i = 0; i < m.size(); ++i) min_var.values[i] = std::min(min_var.values[i], m.values[i]);
  }
  for (std::size_t i = 0; i < band.size(); ++i) {
    const double sig = std::max(0.0, min_var.values[i] - s0);
    band.values[i] = std::abs(band.values[i]) <= flush ? 0.0 : band.values[i] * (s0 / (sig + s0));
  }
}

Plane mirror_pad(const Plane& p, std::size_t h, std::size_t w) {
  auto reflect = [](std::size_t i, std::size_t n) {
    // symmetric: ... 2 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
    const std::size_t period = 2 * n;
    i %= period;
    return i < n ? i : period - 1 - i;
  };
  Plane out(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    const auto src = p.row(reflect(r, p.height));
    auto dst = out.row(r);
    for (std::size_t c = 0; c < w; ++c) dst[c] = src[reflect(c, p.width)];
  }
  return out;
}

}  // namespace

void DenoiseConfig::validate() const {
  if (levels < 1) throw Error(Errc::invalid_argument, "denoise: levels must be >= 1");
  if (!(base_noise_sigma > 0.0))
    throw Error(Errc::invalid_argument, "denoise: base_noise_sigma must be > 0");
  if (window_sizes.empty()) throw Error(Errc::invalid_argument, "denoise: no window sizes");
  for (int k : window_sizes)
    if (k < 3 || k % 2 == 0)
      throw Error(Errc::invalid_argument, "denoise: window sizes must be odd and >= 3");
}

std::string DenoiseConfig::describe() const {
  std::ostringstream os;
  os << "db8/levels=" << levels << "/sigma0=" << base_noise_sigma << "/windows=";
  for (std::size_t i = 0; i < window_sizes.size(); ++i) os << (i ? "," : "") << window_sizes[i];
  return os.str();
}

WaveletPyramid dwt2(const Plane& p, int levels) {
  if (levels < 1) throw Error(Errc::invalid_argument, "dwt2: levels must be >= 1");
  const std::size_t unit = std::size_t{1} << levels;
  if (p.height < unit || p.width < unit || p.height % unit || p.width % unit)
    throw Error(Errc::invalid_argument,
                "dwt2: plane edges must be multiples of 2^levels (" + std::to_string(unit) + ")");
  WaveletPyramid pyr;
  pyr.details.resize(static_cast<std::size_t>(levels));
  Plane current = p;
  for (int l = 0; l < levels; ++l) {
    Plane ll;
    analyze_2d(current, ll, pyr.details[static_cast<std::size_t>(l)]);
    current = std::move(ll);
  }
  pyr.ll = std::move(current);
  return pyr;
}

Plane idwt2(const WaveletPyramid& pyr) {
  Plane current = pyr.ll;
  for (auto it = pyr.details.rbegin(); it != pyr.details.rend(); ++it)
    current = synthesize_2d(current, *it);
  return current;
}

Plane denoise(const Plane& p, const DenoiseConfig& cfg) {
  cfg.validate();
  require_pipeline_size(p.height, p.width);
  const std::size_t unit = std::size_t{1} << cfg.levels;
  const std::size_t ph = (p.height + unit - 1) / unit * unit;
  const std::size_t pw = (p.width + unit - 1) / unit * unit;
  const bool padded = ph != p.height || pw != p.width;

  double peak = 0.0;
  for (double v : p.values) peak = std::max(peak, std::abs(v));
  const double flush = 1e-11 * peak;

  WaveletPyramid pyr = dwt2(padded ? mirror_pad(p, ph, pw) : p, cfg.levels);
  for (auto& lvl : pyr.details) {
    removed_part(lvl.lh, cfg, flush);
    removed_part(lvl.hl, cfg, flush);
    removed_part(lvl.hh, cfg, flush);
  }
  std::fill(pyr.ll.values.begin(), pyr.ll.values.end(), 0.0);
  const Plane removed = idwt2(pyr);
  Plane out = p;
  for (std::size_t r = 0; r < p.height; ++r) {
    const auto src = removed.row(r);
    auto dst = out.row(r);
    for (std::size_t c = 0; c < p.width; ++c) dst[c] -= src[c];
  }
  return out;
}

Residual residual(const Image& img, const DenoiseConfig& cfg) {
  validate(img);
  require_pipeline_size(img.height, img.width);
  Plane y = working_luma(img);
  Plane f = denoise(y, cfg);
  for (std::size_t i = 0; i < y.size(); ++i) y.values[i] -= f.values[i];
  return {std::move(y), img.source_tag};
}

}  // namespace prnukit
