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

#include "json.hpp"
#include "prnukit/correlate.hpp"
#include "prnukit/jpeg_meta.hpp"
#include "prnukit/lattice.hpp"
#include "prnukit/local_analysis.hpp"
#include "prnukit/roc.hpp"
#include "prnukit/wavelet.hpp"

namespace prnukit::report {

using nlohmann::json;

json to_json(const Shift& s);
json to_json(const PceResult& r);
json to_json(const VerifyConfig& c);
json to_json(const DenoiseConfig& c);
json to_json(const LatticeReport& r);
json to_json(const CollisionReport& r);
json to_json(const CollisionMatrix& m);
json to_json(const ShiftMap& m);
json to_json(const BlockCorrMap& m);
json to_json(const BokehMask& m);
json to_json(const MfpTags& t);

// Readers for the JSON above; throw malformed_header on shape errors.
ShiftMap shift_map_from_json(const json& j);
BlockCorrMap block_map_from_json(const json& j);
BokehMask bokeh_mask_from_json(const json& j);

/// `pair_id,group_a,group_b,pce,verdict`
std::string scatter_csv(const CollisionMatrix& m);

/// Hand-emitted heat map, one rect per cell, fixed blue-white-red ramp
/// over [-vmax, vmax].
std::string heatmap_svg(const Plane& values, double vmax, double cell_px = 1.0);

std::string shift_map_svg(const ShiftMap& m);

}  // namespace prnukit::report
