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

#include <complex>
#include <cstddef>
#include <vector>

#include "prnukit/plane.hpp"

namespace prnukit::detail {

using Spectrum = std::vector<std::complex<double>>;

// 2-D real FFT of fixed size. Plans are created with FFTW_ESTIMATE so the
// same size always yields the same plan and bit-identical output. Planning
// is serialized; an instance must not be shared between threads.
class RealFft2d {
 public:
  RealFft2d(std::size_t height, std::size_t width);
  ~RealFft2d();
  RealFft2d(const RealFft2d&) = delete;
  RealFft2d& operator=(const RealFft2d&) = delete;

  std::size_t spectrum_width() const noexcept { return width_ / 2 + 1; }

  Spectrum forward(const Plane& p);
  /// Normalized inverse (includes the 1/(HW) factor).
  Plane inverse(const Spectrum& s);

 private:
  std::size_t height_, width_;
  double* real_ = nullptr;
  void* complex_ = nullptr;
  void* fwd_ = nullptr;
  void* inv_ = nullptr;
};

/// Circular cross-correlation c(s) = sum_i a(i) b(i + s) via FFT.
Plane circular_xcorr(const Plane& a, const Plane& b);

}  // namespace prnukit::detail
