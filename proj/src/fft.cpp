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

#include "fft.hpp"

#include <algorithm>
#include <cstring>
#include <mutex>

#include <fftw3.h>

namespace prnukit::detail {
namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft2d::RealFft2d(std::size_t height, std::size_t width) : height_(height), width_(width) {
  const std::size_t n_real = height * width;
  const std::size_t n_cplx = height * spectrum_width();
  std::lock_guard lock(planner_mutex());
  real_ = fftw_alloc_real(n_real);
  auto* cplx = fftw_alloc_complex(n_cplx);
  complex_ = cplx;
  fwd_ = fftw_plan_dft_r2c_2d(static_cast<int>(height), static_cast<int>(width), real_, cplx,
                              FFTW_ESTIMATE);
  inv_ = fftw_plan_dft_c2r_2d(static_cast<int>(height), static_cast<int>(width), cplx, real_,
                              FFTW_ESTIMATE);
}

RealFft2d::~RealFft2d() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(inv_));
  fftw_free(real_);
  fftw_free(complex_);
}

Spectrum RealFft2d::forward(const Plane& p) {
  std::copy(p.values.begin(), p.values.end(), real_);
  fftw_execute(static_cast<fftw_plan>(fwd_));
  const std::size_t n = height_ * spectrum_width();
  Spectrum out(n);
  std::memcpy(out.data(), complex_, n * sizeof(std::complex<double>));
  return out;
}

Plane RealFft2d::inverse(const Spectrum& s) {
  std::memcpy(complex_, s.data(), s.size() * sizeof(std::complex<double>));
  fftw_execute(static_cast<fftw_plan>(inv_));
  Plane out(height_, width_);
  const double norm = 1.0 / static_cast<double>(height_ * width_);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = real_[i] * norm;
  return out;
}

Plane circular_xcorr(const Plane& a, const Plane& b) {
  RealFft2d fft(a.height, a.width);
  Spectrum fa = fft.forward(a);
  const Spectrum fb = fft.forward(b);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] = std::conj(fa[i]) * fb[i];
  return fft.inverse(fa);
}

}  // namespace prnukit::detail
