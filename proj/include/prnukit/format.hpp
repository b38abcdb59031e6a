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

namespace prnukit {

/// 17 significant digits (round-trip exact); "inf", "-inf", "nan" otherwise.
std::string format_real(double v);

/// Whole-string parse; accepts the tokens format_real emits.
double parse_double(const std::string& text, const std::string& what);

}  // namespace prnukit
