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

#include <stdexcept>
#include <string>

namespace prnukit {

// Stable numbering: mirrored one-to-one by pk_status in prnukit.h.
enum class Errc {
  io = 1,
  malformed_header = 2,
  truncated = 3,
  unsupported_format = 4,
  invalid_argument = 5,
  dimension_mismatch = 6,
  degenerate_input = 7,
  vocabulary = 8,
  duplicate = 9,
  missing_soi = 10,
  segment_overrun = 11,
  reserved_marker = 12,
  malformed_segment = 13,
  malformed_exif = 14,
  insufficient_support = 15,
  empty_input = 16,
  unwritable = 17,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace prnukit
