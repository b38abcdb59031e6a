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

#include <array>
#include <cstdint>

namespace prnukit {

inline constexpr const char* kRngName = "philox4x32-10";

/// Philox4x32 with 10 rounds (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// Sequential stream over one (seed, stream, substream) key. Streams are
/// independent by construction, so batch jobs can derive one per index.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint32_t stream, std::uint32_t substream = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream),
        substream_(substream) {}

  std::uint32_t next_u32() noexcept;
  double uniform() noexcept;  // [0, 1), 53 bits
  double normal() noexcept;   // Box-Muller

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_, substream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int used_ = 4;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Stateless normal deviate addressed by (seed, stream, a, b); used where a
/// value must be a pure function of its coordinates (tiled patterns).
double normal_at(std::uint64_t seed, std::uint32_t stream, std::uint32_t a,
                 std::uint32_t b) noexcept;

}  // namespace prnukit
