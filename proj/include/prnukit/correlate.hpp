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

#include <cstddef>

#include "prnukit/plane.hpp"
#include "prnukit/wavelet.hpp"

namespace prnukit {

/// rho(s1, s2) for every circular shift; index (s1, s2) in [0,H) x [0,W).
struct CorrSurface {
  Plane values;

  double at(long s1, long s2) const;  // any integer shift, wrapped
};

struct Shift {
  long s1 = 0;
  long s2 = 0;
  bool operator==(const Shift&) const = default;
};

/// Maps a raw index in [0, n) to the signed shift in (-n/2, n/2].
long signed_shift(std::size_t index, std::size_t n) noexcept;

enum class SearchMode { full, zero_only };
enum class Decision { h0, h1 };

struct VerifyConfig {
  double tau = 60.0;
  SearchMode search = SearchMode::full;

  void validate() const;
};

/// Signed PCE. pce_at_origin is the same statistic with the peak pinned
/// at (0,0), kept so zero_only decisions need no second correlation.
struct PceResult {
  double pce = 0.0;
  Shift peak;
  double rho_max = 0.0;
  std::size_t excluded = 0;
  std::size_t height = 0, width = 0;
  double pce_at_origin = 0.0;
  double rho_origin = 0.0;
};

inline constexpr std::size_t kPeakNeighborhood = 11;

double ncc_at(const Plane& a, const Plane& b, long s1, long s2);
CorrSurface ncc_surface(const Plane& a, const Plane& b);
CorrSurface autocorr(const Plane& p);

PceResult pce(const Plane& w, const Plane& term);
inline PceResult pce(const Residual& w, const Plane& term) { return pce(w.plane, term); }

// Lower-level entry points shared with block and masked analyses.
// `support` is the sample count entering the (support - |N|) factor.
double pce_at(const CorrSurface& s, std::size_t r, std::size_t c, std::size_t support,
              std::size_t* excluded = nullptr);
PceResult pce_from_surface(const CorrSurface& s, std::size_t support);

Decision verify(const PceResult& r, const VerifyConfig& cfg);
const char* decision_name(Decision d) noexcept;

/// Subtracts the mean; throws Errc::degenerate_input for constant planes.
Plane centered(const Plane& p, double* norm = nullptr);

}  // namespace prnukit
