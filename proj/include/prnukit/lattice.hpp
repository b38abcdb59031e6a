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

#include "prnukit/correlate.hpp"
#include "prnukit/fingerprint.hpp"

namespace prnukit {

enum class Polarity { positive, negative };

struct LatticePeak {
  Shift shift;
  double value = 0.0;
  Polarity polarity = Polarity::positive;
};

/// Periodic structure found in an autocorrelation surface. An empty report
/// (zero basis, no peaks, strength 0) means no lattice was found.
struct LatticeReport {
  Shift basis;
  std::vector<LatticePeak> peaks;
  double strength = 0.0;
  std::size_t window = 551;

  bool empty() const noexcept { return basis == Shift{}; }
};

inline constexpr std::size_t kDefaultWindow = 551;
inline constexpr double kDefaultMinPeak = 0.02;

// Candidates are local maxima of |rho| above min_peak inside the centered
// window, outside the 11x11 origin guard. The basis is the shortest
// positive candidate whose multiples k*b (k >= 2, while inside the window)
// all land within +-1 px of positive candidates (vacuously true when 2b
// already leaves the window); the expected position of
// each multiple is refined from the previous match so fractional periods
// left by resampling still chain. Negative candidates are listed as peaks
// but never used for the basis.
LatticeReport detect_lattice(const CorrSurface& surface, std::size_t window = kDefaultWindow,
                             double min_peak = kDefaultMinPeak);

/// Largest odd window <= min(requested, H, W).
std::size_t fit_window(std::size_t requested, std::size_t height, std::size_t width);

LatticeReport lattice_of(const Plane& p, std::size_t window = kDefaultWindow,
                         double min_peak = kDefaultMinPeak);

bool basis_match(const LatticeReport& a, const LatticeReport& b);

enum class Verdict { collision_suspected, distinct, inconclusive };
const char* verdict_name(Verdict v) noexcept;

struct ScreenConfig {
  VerifyConfig verify;
  std::size_t window = kDefaultWindow;
  double min_peak = kDefaultMinPeak;
  unsigned threads = 1;
};

struct CollisionReport {
  std::string id_a, id_b;
  PceResult pce_ab;
  LatticeReport lattice_a, lattice_b;
  bool basis_match = false;
  Verdict verdict = Verdict::distinct;
};

CollisionReport collision_screen(const Fingerprint& fa, const Fingerprint& fb,
                                 const ScreenConfig& cfg = {});

struct CollisionMatrix {
  std::vector<std::string> ids;
  std::vector<std::string> groups;
  std::vector<CollisionReport> pairs;  // (i, j), i < j, row-major

  const CollisionReport& pair(std::size_t i, std::size_t j) const;
};

/// All-pairs screen. Fingerprints of differing size are resized (bicubic)
/// to the smallest common height and width first.
CollisionMatrix cross_model_screen(const std::vector<Fingerprint>& fps,
                                   const std::vector<std::string>& ids,
                                   const std::vector<std::string>& groups,
                                   const ScreenConfig& cfg = {});

}  // namespace prnukit
