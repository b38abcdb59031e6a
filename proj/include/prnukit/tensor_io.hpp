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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "prnukit/plane.hpp"

namespace prnukit {

// Image and tensor files. Format follows the file:
//   P5/P6 PNM, maxval 255 or 65535, 16-bit samples big-endian;
//   FPT ("FPT1", u32 LE height/width/channels, f32 LE payload).
// save_image picks the format from the extension (.fpt -> FPT, else PNM).
Image load_image(const std::filesystem::path& path);
void save_image(const Image& img, const std::filesystem::path& path);

// FPT planes are the lossless float container for residuals, fingerprints
// and correlation surfaces. load_plane also accepts PNM and returns luma.
Plane load_plane(const std::filesystem::path& path);
void save_plane(const Plane& p, const std::filesystem::path& path);

/// BT.601 luma (0.299, 0.587, 0.114); identity cast for one channel.
Plane to_luma(const Image& img);

/// Luma on the 8-bit scale: 16-bit images are divided by 257.
Plane working_luma(const Image& img);

/// Top-left at (floor((H-h)/2), floor((W-w)/2)).
Plane crop_center(const Plane& p, std::size_t h, std::size_t w);

/// Catmull-Rom bicubic (a = -0.5), edge-clamped, pixel-center aligned.
Plane resize_bicubic(const Plane& p, std::size_t h, std::size_t w);

/// out(i, j) = p((i + d1) mod H, (j + d2) mod W); same index convention as
/// the NCC shift (s1, s2).
Plane circular_shift(const Plane& p, long d1, long d2);

Image from_plane(const Plane& p, int depth);  // rounds and clamps

// ---------------------------------------------------------------------------
// Dataset manifests: `path<TAB>role<TAB>label<TAB>tag1,tag2`, '#' comments.

enum class Role { reference, test };
enum class Label { genuine, impostor };

enum Tag : std::uint8_t {
  kTagMfp = 1u << 0,
  kTagZoom = 1u << 1,
  kTagBokeh = 1u << 2,
  kTagRaw = 1u << 3,
};

struct ManifestEntry {
  std::string path;
  Role role = Role::reference;
  Label label = Label::genuine;
  std::uint8_t tags = 0;

  bool has(Tag t) const noexcept { return (tags & t) != 0; }
  bool operator==(const ManifestEntry&) const = default;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  void add(ManifestEntry e);  // throws Errc::duplicate
  bool operator==(const DatasetManifest&) const = default;
};

DatasetManifest parse_manifest(const std::string& text);
std::string format_manifest(const DatasetManifest& m);
DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& m, const std::filesystem::path& path);

const char* role_name(Role r) noexcept;
const char* label_name(Label l) noexcept;
std::string tags_string(std::uint8_t tags);

/// Relative manifest paths resolve against the manifest's directory.
std::filesystem::path resolve_entry(const std::filesystem::path& manifest_path,
                                    const ManifestEntry& e);

// Write to a sibling temp file then rename, so a failure leaves no output.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace prnukit
