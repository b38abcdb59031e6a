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

#include <string>
#include <vector>

#include "prnukit/plane.hpp"

namespace prnukit {

/// Parameters of the wavelet-domain local Wiener filter.
struct DenoiseConfig {
  int levels = 4;
  double base_noise_sigma = 3.0;  // 8-bit units
  std::vector<int> window_sizes{3, 5, 7, 9};

  void validate() const;
  std::string describe() const;  // "db8/levels=4/sigma0=3/windows=3,5,7,9"
};

struct SubbandLevel {
  Plane lh, hl, hh;
};

/// Orthonormal separable decomposition, finest level first.
struct WaveletPyramid {
  std::vector<SubbandLevel> details;
  Plane ll;
};

// Daubechies 8-tap filters with periodic extension. dwt2 requires both
// edges to be divisible by 2^levels.
WaveletPyramid dwt2(const Plane& p, int levels);
Plane idwt2(const WaveletPyramid& pyr);

/// F(.): inputs not divisible by 2^levels are mirror-padded, then cropped.
Plane denoise(const Plane& p, const DenoiseConfig& cfg);

struct Residual {
  Plane plane;
  std::string source_tag;
};

/// W = Y - F(Y) on the 8-bit-scale luma of img.
Residual residual(const Image& img, const DenoiseConfig& cfg);

}  // namespace prnukit
