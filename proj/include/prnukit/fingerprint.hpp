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

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "prnukit/plane.hpp"
#include "prnukit/wavelet.hpp"

namespace prnukit {

/// Running sums of W.*Y and Y.*Y over L images, mergeable across shards.
struct FingerprintAccumulator {
  Plane numerator;
  Plane denominator;
  std::size_t count = 0;
  std::vector<std::string> provenance;
  bool skip_saturated = true;  // saturated pixels contribute to neither sum

  FingerprintAccumulator() = default;
  FingerprintAccumulator(std::size_t h, std::size_t w)
      : numerator(h, w), denominator(h, w) {}
};

void accumulate(FingerprintAccumulator& acc, const Image& img, const Residual& res);

/// a followed by b; provenance concatenates in that order.
FingerprintAccumulator merge(FingerprintAccumulator a, const FingerprintAccumulator& b);

struct Fingerprint {
  Plane plane;
  std::vector<std::string> post_flags;  // append-only: zero_mean, wiener_fft, adapted
  std::vector<std::string> provenance;
  double eps = 1.0;
  std::string denoise;  // DenoiseConfig::describe() of the estimating run

  bool has_flag(const std::string& f) const;
};

inline constexpr double kDefaultEps = 1.0;

/// K = num ./ (den + eps).
Fingerprint finalize(const FingerprintAccumulator& acc, double eps = kDefaultEps);

Fingerprint zero_mean(Fingerprint fp);
Fingerprint wiener_fft(Fingerprint fp, double strength = 1.0);

/// Hadamard product K .* Y on the 8-bit luma scale: the PCE reference term.
Plane fingerprint_term(const Plane& k, const Image& img);
inline Plane fingerprint_term(const Fingerprint& fp, const Image& img) {
  return fingerprint_term(fp.plane, img);
}

struct EstimateOptions {
  DenoiseConfig denoise;
  double eps = kDefaultEps;
  bool skip_saturated = true;
  unsigned threads = 1;
};

// Batch estimation in manifest order. Per-image contributions are computed
// `threads` at a time and merged through a pairwise tree whose shape depends
// only on the image count, so results are identical for any thread count.
Fingerprint estimate_fingerprint(std::size_t count,
                                 const std::function<Image(std::size_t)>& load,
                                 const EstimateOptions& opts);
Fingerprint estimate_fingerprint(const std::vector<Image>& images, const EstimateOptions& opts);

// FPT plane plus a `<path>.hdr` key=value sidecar.
void save_fingerprint(const Fingerprint& fp, const std::filesystem::path& path);
Fingerprint load_fingerprint(const std::filesystem::path& path);
std::string fingerprint_header(const Fingerprint& fp);

}  // namespace prnukit
