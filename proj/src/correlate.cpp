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

#include "prnukit/correlate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "fft.hpp"
#include "prnukit/error.hpp"

namespace prnukit {
namespace {

void require_same_dims(const Plane& a, const Plane& b) {
  if (!a.same_dims(b) || a.empty())
    throw Error(Errc::dimension_mismatch, "correlation inputs must have equal, non-empty dims");
}

std::vector<std::size_t> wrapped_window(std::size_t center, std::size_t n) {
  const long half = static_cast<long>(kPeakNeighborhood / 2);
  std::vector<std::size_t> idx;
  for (long d = -half; d <= half; ++d) {
    const auto i = static_cast<std::size_t>(((static_cast<long>(center) + d) % long(n) + long(n)) % long(n));
    if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
  }
  return idx;
}

}  // namespace

double CorrSurface::at(long s1, long s2) const {
  const long H = static_cast<long>(values.height), W = static_cast<long>(values.width);
  return values(static_cast<std::size_t>((s1 % H + H) % H), static_cast<std::size_t>((s2 % W + W) % W));
}

long signed_shift(std::size_t index, std::size_t n) noexcept {
  return index > n / 2 ? static_cast<long>(index) - static_cast<long>(n) : static_cast<long>(index);
}

void VerifyConfig::validate() const {
  if (!(tau > 0.0)) throw Error(Errc::invalid_argument, "tau must be > 0");
}

Plane centered(const Plane& p, double* norm) {
  const double n = static_cast<double>(p.size());
  const double mean = std::accumulate(p.values.begin(), p.values.end(), 0.0) / n;
  Plane out(p.height, p.width);
  double ss = 0.0, raw = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.values[i] = p.values[i] - mean;
    ss += out.values[i] * out.values[i];
    raw += p.values[i] * p.values[i];
  }
  if (!(ss > 1e-24 * std::max(1.0, raw)))
    throw Error(Errc::degenerate_input, "correlation input has zero variance");
  if (norm) *norm = std::sqrt(ss);
  return out;
}

double ncc_at(const Plane& a, const Plane& b, long s1, long s2) {
  require_same_dims(a, b);
  double na = 0.0, nb = 0.0;
  const Plane ca = centered(a, &na);
  const Plane cb = centered(b, &nb);
  const long H = static_cast<long>(a.height), W = static_cast<long>(a.width);
  const long o1 = (s1 % H + H) % H, o2 = (s2 % W + W) % W;
  double acc = 0.0;
  for (long i = 0; i < H; ++i) {
    const auto ra = ca.row(static_cast<std::size_t>(i));
    const auto rb = cb.row(static_cast<std::size_t>((i + o1) % H));
    for (long j = 0; j < W; ++j) acc += ra[j] * rb[(j + o2) % W];
  }
  return acc / (na * nb);
}

CorrSurface ncc_surface(const Plane& a, const Plane& b) {
  require_same_dims(a, b);
  double na = 0.0, nb = 0.0;
  const Plane ca = centered(a, &na);
  const Plane cb = centered(b, &nb);
  Plane c = detail::circular_xcorr(ca, cb);
  const double inv = 1.0 / (na * nb);
  for (auto& v : c.values) v *= inv;
  return {std::move(c)};
}

CorrSurface autocorr(const Plane& p) { return ncc_surface(p, p); }

double pce_at(const CorrSurface& s, std::size_t r, std::size_t c, std::size_t support,
              std::size_t* excluded) {
  const Plane& v = s.values;
  const auto rows = wrapped_window(r, v.height);
  const auto cols = wrapped_window(c, v.width);
  double total = 0.0;
  for (double x : v.values) total += x * x;
  double near = 0.0;
  for (auto i : rows)
    for (auto j : cols) near += v(i, j) * v(i, j);
  const std::size_t n_excl = rows.size() * cols.size();
  if (excluded) *excluded = n_excl;
  const double energy = total - near;
  const double peak = v(r, c);
  const double factor = static_cast<double>(support) - static_cast<double>(n_excl);
  if (!(energy > 0.0)) return peak >= 0.0 ? std::numeric_limits<double>::infinity()
                                          : -std::numeric_limits<double>::infinity();
  return factor * (peak >= 0.0 ? 1.0 : -1.0) * peak * peak / energy;
}

PceResult pce_from_surface(const CorrSurface& s, std::size_t support) {
  const Plane& v = s.values;
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v.values[i] > v.values[best]) best = i;  // first max wins: lexicographic tie-break
  const std::size_t r = best / v.width, c = best % v.width;
  PceResult out;
  out.height = v.height;
  out.width = v.width;
  out.rho_max = v.values[best];
  out.peak = {signed_shift(r, v.height), signed_shift(c, v.width)};
  out.pce = pce_at(s, r, c, support, &out.excluded);
  out.rho_origin = v(0, 0);
  out.pce_at_origin = pce_at(s, 0, 0, support);
  return out;
}

PceResult pce(const Plane& w, const Plane& term) {
  require_same_dims(w, term);
  return pce_from_surface(ncc_surface(w, term), w.size());
}

Decision verify(const PceResult& r, const VerifyConfig& cfg) {
  const double stat = cfg.search == SearchMode::zero_only ? r.pce_at_origin : r.pce;
  return stat > cfg.tau ? Decision::h1 : Decision::h0;
}

const char* decision_name(Decision d) noexcept { return d == Decision::h1 ? "H1" : "H0"; }

}  // namespace prnukit
