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

#include "prnukit/rng.hpp"

#include <cmath>
#include <numbers>

namespace prnukit {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

double to_unit(std::uint32_t a, std::uint32_t b) {
  return ((a >> 5) * 67108864.0 + (b >> 6)) * (1.0 / 9007199254740992.0);
}

double box_muller(double u_open, double u2, double* spare) {
  const double r = std::sqrt(-2.0 * std::log(u_open));
  const double t = 2.0 * std::numbers::pi * u2;
  if (spare) *spare = r * std::sin(t);
  return r * std::cos(t);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::uint32_t CounterRng::next_u32() noexcept {
  if (used_ == 4) {
    buf_ = philox4x32_10({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                          stream_, substream_},
                         key_);
    ++block_;
    used_ = 0;
  }
  return buf_[used_++];
}

double CounterRng::uniform() noexcept {
  const auto a = next_u32();
  const auto b = next_u32();
  return to_unit(a, b);
}

double CounterRng::normal() noexcept {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  have_spare_ = true;
  return box_muller(u1, u2, &spare_);
}

double normal_at(std::uint64_t seed, std::uint32_t stream, std::uint32_t a,
                 std::uint32_t b) noexcept {
  const auto r = philox4x32_10({a, b, stream, 0x7A11u},
                               {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  return box_muller(1.0 - to_unit(r[0], r[1]), to_unit(r[2], r[3]), nullptr);
}

}  // namespace prnukit
