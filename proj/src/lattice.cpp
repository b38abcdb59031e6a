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

#include "prnukit/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "prnukit/error.hpp"
#include "prnukit/tensor_io.hpp"

namespace prnukit {
namespace {

struct Candidate {
  long d1, d2;
  double value;
};

constexpr long kGuard = static_cast<long>(kPeakNeighborhood / 2);

bool is_local_max(const CorrSurface& s, long d1, long d2, double mag) {
  for (long a = -1; a <= 1; ++a)
    for (long b = -1; b <= 1; ++b) {
      if (a == 0 && b == 0) continue;
      const double n = std::abs(s.at(d1 + a, d2 + b));
      const bool earlier = a < 0 || (a == 0 && b < 0);
      if (earlier ? n >= mag : n > mag) return false;
    }
  return true;
}

const Candidate* nearest_match(const std::vector<Candidate>& pos, long e1, long e2) {
  const Candidate* best = nullptr;
  for (const auto& c : pos)
    if (std::abs(c.d1 - e1) <= 1 && std::abs(c.d2 - e2) <= 1 && (!best || c.value > best->value))
      best = &c;
  return best;
}

}  // namespace

std::size_t fit_window(std::size_t requested, std::size_t height, std::size_t width) {
  std::size_t w = std::min({requested, height, width});
  if (w % 2 == 0 && w > 0) --w;
  return w;
}

LatticeReport detect_lattice(const CorrSurface& surface, std::size_t window, double min_peak) {
  const Plane& v = surface.values;
  if (window % 2 == 0 || window > std::min(v.height, v.width))
    throw Error(Errc::invalid_argument, "detect_lattice: window must be odd and fit the surface");
  if (!(min_peak > 0.0 && min_peak < 1.0))
    throw Error(Errc::invalid_argument, "detect_lattice: min_peak must be in (0, 1)");
  LatticeReport report;
  report.window = window;
  const long half = static_cast<long>(window / 2);

  std::vector<Candidate> positive, negative;
  for (long d1 = -half; d1 <= half; ++d1)
    for (long d2 = -half; d2 <= half; ++d2) {
      if (std::abs(d1) <= kGuard && std::abs(d2) <= kGuard) continue;
      const double val = surface.at(d1, d2);
      const double mag = std::abs(val);
      if (mag <= min_peak || !is_local_max(surface, d1, d2, mag)) continue;
      (val > 0.0 ? positive : negative).push_back({d1, d2, val});
    }

  std::vector<Candidate> half_plane;
  for (const auto& c : positive)
    if (c.d1 > 0 || (c.d1 == 0 && c.d2 > 0)) half_plane.push_back(c);
  std::sort(half_plane.begin(), half_plane.end(), [](const Candidate& a, const Candidate& b) {
    const long na = a.d1 * a.d1 + a.d2 * a.d2, nb = b.d1 * b.d1 + b.d2 * b.d2;
    return na != nb ? na < nb : (a.d1 != b.d1 ? a.d1 < b.d1 : a.d2 < b.d2);
  });

  for (const auto& cand : half_plane) {
    std::vector<Candidate> chain{cand};
    double e1 = static_cast<double>(cand.d1), e2 = static_cast<double>(cand.d2);
    bool ok = true;
    for (long k = 2;; ++k) {
      const long p1 = std::lround(k * e1), p2 = std::lround(k * e2);
      if (std::abs(p1) > half || std::abs(p2) > half) break;
      const Candidate* m = nearest_match(positive, p1, p2);
      if (!m) {
        ok = false;
        break;
      }
      chain.push_back(*m);
      e1 = static_cast<double>(m->d1) / static_cast<double>(k);
      e2 = static_cast<double>(m->d2) / static_cast<double>(k);
    }
    if (!ok) continue;

    report.basis = {cand.d1, cand.d2};
    double sum = 0.0;
    for (const auto& c : chain) {
      report.peaks.push_back({{c.d1, c.d2}, c.value, Polarity::positive});
      const double mirrored = surface.at(-c.d1, -c.d2);
      report.peaks.push_back({{-c.d1, -c.d2}, mirrored, Polarity::positive});
      sum += std::abs(c.value) + std::abs(mirrored);
    }
    report.strength = std::min(1.0, sum / static_cast<double>(2 * chain.size()));
    for (const auto& c : negative) report.peaks.push_back({{c.d1, c.d2}, c.value, Polarity::negative});
    return report;
  }
  return report;
}

LatticeReport lattice_of(const Plane& p, std::size_t window, double min_peak) {
  return detect_lattice(autocorr(p), fit_window(window, p.height, p.width), min_peak);
}

bool basis_match(const LatticeReport& a, const LatticeReport& b) {
  if (a.empty() || b.empty()) return false;
  return std::abs(a.basis.s1 - b.basis.s1) <= 1 && std::abs(a.basis.s2 - b.basis.s2) <= 1;
}

const char* verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::collision_suspected: return "collision_suspected";
    case Verdict::distinct: return "distinct";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

CollisionReport screen_pair(const Fingerprint& fa, const Fingerprint& fb, const LatticeReport& la,
                            const LatticeReport& lb, const ScreenConfig& cfg) {
  CollisionReport rep;
  rep.pce_ab = pce(fa.plane, fb.plane);
  rep.lattice_a = la;
  rep.lattice_b = lb;
  rep.basis_match = basis_match(la, lb);
  const bool exceeds = verify(rep.pce_ab, cfg.verify) == Decision::h1;
  rep.verdict = !exceeds ? Verdict::distinct
                         : (rep.basis_match ? Verdict::collision_suspected : Verdict::inconclusive);
  return rep;
}

}  // namespace

CollisionReport collision_screen(const Fingerprint& fa, const Fingerprint& fb, const ScreenConfig& cfg) {
  cfg.verify.validate();
  if (!fa.plane.same_dims(fb.plane))
    throw Error(Errc::dimension_mismatch, "collision_screen: fingerprint dims differ");
  const auto la = lattice_of(fa.plane, cfg.window, cfg.min_peak);
  const auto lb = lattice_of(fb.plane, cfg.window, cfg.min_peak);
  return screen_pair(fa, fb, la, lb, cfg);
}

const CollisionReport& CollisionMatrix::pair(std::size_t i, std::size_t j) const {
  if (i == j || i >= ids.size() || j >= ids.size())
    throw Error(Errc::invalid_argument, "CollisionMatrix::pair: bad index");
  if (i > j) std::swap(i, j);
  const std::size_t n = ids.size();
  // offset of row i in the packed upper triangle
  const std::size_t row_start = i * n - i * (i + 1) / 2;
  return pairs[row_start + (j - i - 1)];
}

CollisionMatrix cross_model_screen(const std::vector<Fingerprint>& input,
                                   const std::vector<std::string>& ids,
                                   const std::vector<std::string>& groups, const ScreenConfig& cfg) {
  cfg.verify.validate();
  if (input.size() < 2)
    throw Error(Errc::invalid_argument, "cross_model_screen: needs at least two fingerprints");
  if (ids.size() != input.size() || groups.size() != input.size())
    throw Error(Errc::invalid_argument, "cross_model_screen: ids/groups must match fingerprints");
  std::size_t h = input.front().plane.height, w = input.front().plane.width;
  for (const auto& f : input) {
    h = std::min(h, f.plane.height);
    w = std::min(w, f.plane.width);
  }
  std::vector<Fingerprint> fps = input;
  for (auto& f : fps)
    if (f.plane.height != h || f.plane.width != w) f.plane = resize_bicubic(f.plane, h, w);

  std::vector<LatticeReport> lattices(fps.size());
  for (std::size_t i = 0; i < fps.size(); ++i) lattices[i] = lattice_of(fps[i].plane, cfg.window, cfg.min_peak);

  CollisionMatrix out;
  out.ids = ids;
  out.groups = groups;
  std::vector<std::pair<std::size_t, std::size_t>> todo;
  for (std::size_t i = 0; i < fps.size(); ++i)
    for (std::size_t j = i + 1; j < fps.size(); ++j) todo.emplace_back(i, j);
  out.pairs.resize(todo.size());
  const std::size_t batch = std::max<unsigned>(1, cfg.threads);
  for (std::size_t start = 0; start < todo.size(); start += batch) {
    const std::size_t end = std::min(todo.size(), start + batch);
    std::vector<std::future<CollisionReport>> jobs;
    for (std::size_t t = start; t < end; ++t) {
      const auto [i, j] = todo[t];
      jobs.push_back(std::async(batch == 1 ? std::launch::deferred : std::launch::async, [&, i, j] {
        return screen_pair(fps[i], fps[j], lattices[i], lattices[j], cfg);
      }));
    }
    for (std::size_t t = start; t < end; ++t) {
      out.pairs[t] = jobs[t - start].get();
      out.pairs[t].id_a = ids[todo[t].first];
      out.pairs[t].id_b = ids[todo[t].second];
    }
  }
  return out;
}

}  // namespace prnukit
