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

#include "doctest.h"

#include <sys/stat.h>

#include <cstring>
#include <functional>
#include <unistd.h>

#include "prnukit/error.hpp"
#include "prnukit/tensor_io.hpp"
#include "support.hpp"

using namespace prnukit;
using namespace prnukit::testing;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::io;
}

std::vector<std::uint8_t> header(const std::string& h) { return {h.begin(), h.end()}; }

}  // namespace

TEST_SUITE("load_image") {
  TEST_CASE("2x2 P5 maps bytes directly") {
    TempDir dir("io");
    auto bytes = header("P5\n2 2\n255\n");
    bytes.insert(bytes.end(), {0, 255, 17, 34});
    write_bytes(dir / "a.pgm", bytes);
    const Image img = load_image(dir / "a.pgm");
    CHECK(img.height == 2);
    CHECK(img.width == 2);
    CHECK(img.channels == 1);
    CHECK(img.depth == 8);
    CHECK(img.pixels == std::vector<std::uint16_t>{0, 255, 17, 34});
  }

  TEST_CASE("P6 with short payload is truncated") {
    TempDir dir("io");
    auto bytes = header("P6\n4 4\n255\n");
    bytes.resize(bytes.size() + 24, 7);
    write_bytes(dir / "a.ppm", bytes);
    CHECK(code_of([&] { load_image(dir / "a.ppm"); }) == Errc::truncated);
  }

  TEST_CASE("16-bit samples are big-endian") {
    TempDir dir("io");
    auto bytes = header("P5 1 2 65535\n");
    bytes.insert(bytes.end(), {0x01, 0x02, 0xFF, 0xFE});
    write_bytes(dir / "a.pgm", bytes);
    const Image img = load_image(dir / "a.pgm");
    CHECK(img.depth == 16);
    CHECK(img.pixels == std::vector<std::uint16_t>{0x0102, 0xFFFE});
  }

  TEST_CASE("header comments are skipped") {
    TempDir dir("io");
    auto bytes = header("P5\n# made by hand\n1 1\n# depth\n255\n");
    bytes.push_back(9);
    write_bytes(dir / "a.pgm", bytes);
    CHECK(load_image(dir / "a.pgm").pixels == std::vector<std::uint16_t>{9});
  }

  TEST_CASE("distinct error codes") {
    TempDir dir("io");
    CHECK(code_of([&] { load_image(dir / "missing.pgm"); }) == Errc::io);
    write_bytes(dir / "bad.pgm", header("P5\nx y\n255\n"));
    CHECK(code_of([&] { load_image(dir / "bad.pgm"); }) == Errc::malformed_header);
    write_bytes(dir / "ascii.pgm", header("P2\n1 1\n255\n7\n"));
    CHECK(code_of([&] { load_image(dir / "ascii.pgm"); }) == Errc::unsupported_format);
    write_bytes(dir / "depth.pgm", header("P5\n1 1\n1023\n\x01\x02"));
    CHECK(code_of([&] { load_image(dir / "depth.pgm"); }) == Errc::unsupported_format);
    write_bytes(dir / "junk.bin", header("GIF89a"));
    CHECK(code_of([&] { load_image(dir / "junk.bin"); }) == Errc::unsupported_format);
  }
}

TEST_SUITE("save_image") {
  TEST_CASE("round-trip random 8-bit RGB 64x64") {
    TempDir dir("io");
    const Image img = random_image(64, 64, 3, 8, 1);
    save_image(img, dir / "rgb.ppm");
    const Image back = load_image(dir / "rgb.ppm");
    CHECK(back.pixels == img.pixels);
    CHECK(back.channels == 3);
  }

  TEST_CASE("1x1 zero") {
    TempDir dir("io");
    Image img(1, 1, 1, 8);
    save_image(img, dir / "z.pgm");
    CHECK(load_image(dir / "z.pgm").pixels == std::vector<std::uint16_t>{0});
  }

  TEST_CASE("16-bit gradient 32x32") {
    TempDir dir("io");
    Image img(32, 32, 1, 16);
    for (std::size_t r = 0; r < 32; ++r)
      for (std::size_t c = 0; c < 32; ++c) img.at(r, c) = static_cast<std::uint16_t>(r * 2048 + c * 63);
    save_image(img, dir / "g.pgm");
    const Image back = load_image(dir / "g.pgm");
    CHECK(back.depth == 16);
    CHECK(back.pixels == img.pixels);
  }

  TEST_CASE("property: load(save(x)) == x across depths, channels and formats") {
    TempDir dir("io");
    std::mt19937_64 gen(42);
    for (int i = 0; i < 40; ++i) {
      const std::size_t h = 1 + gen() % 20, w = 1 + gen() % 20, c = gen() % 2 ? 3 : 1;
      const int depth = gen() % 2 ? 16 : 8;
      Image img = random_image(h, w, c, depth, gen());
      if (depth == 16) img.pixels[0] = 65535;  // keeps the FPT depth inference unambiguous
      const bool fpt = gen() % 2;
      const auto path = dir / (fpt ? "x.fpt" : (c == 3 ? "x.ppm" : "x.pgm"));
      save_image(img, path);
      const Image back = load_image(path);
      CHECK(back.pixels == img.pixels);
      CHECK(back.channels == img.channels);
      CHECK(back.depth == img.depth);
    }
  }

  TEST_CASE("unwritable path") {
    if (::geteuid() == 0) {
      // root ignores directory permissions; use a path under a regular file instead
      TempDir dir("io");
      write_text(dir / "file", "x");
      CHECK(code_of([&] { save_image(Image(1, 1, 1, 8), dir / "file" / "a.pgm"); }) == Errc::unwritable);
    } else {
      TempDir dir("io");
      std::filesystem::create_directories(dir / "ro");
      ::chmod((dir / "ro").c_str(), 0555);
      CHECK(code_of([&] { save_image(Image(1, 1, 1, 8), dir / "ro" / "a.pgm"); }) == Errc::unwritable);
      ::chmod((dir / "ro").c_str(), 0755);
    }
  }

  TEST_CASE("invalid sample rejected") {
    TempDir dir("io");
    Image img(1, 1, 1, 8);
    img.pixels[0] = 256;
    CHECK(code_of([&] { save_image(img, dir / "a.pgm"); }) == Errc::invalid_argument);
  }
}

TEST_SUITE("fpt planes") {
  TEST_CASE("plane round-trip is float32-exact") {
    TempDir dir("io");
    Plane p = gaussian_plane(7, 9, 3);
    for (auto& v : p.values) v = static_cast<float>(v);
    save_plane(p, dir / "p.fpt");
    const Plane back = load_plane(dir / "p.fpt");
    CHECK(back.height == 7);
    CHECK(back.width == 9);
    CHECK(back.values == p.values);
  }

  TEST_CASE("fpt layout: magic, LE dims, f32 payload") {
    TempDir dir("io");
    Plane p(1, 2);
    p.values = {1.0, -2.5};
    save_plane(p, dir / "p.fpt");
    const auto bytes = read_file(dir / "p.fpt");
    REQUIRE(bytes.size() == 4 + 12 + 8);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "FPT1");
    CHECK(bytes[4] == 1);
    CHECK(bytes[8] == 2);
    CHECK(bytes[12] == 1);
    float v1;
    std::memcpy(&v1, bytes.data() + 20, 4);
    CHECK(v1 == -2.5f);
  }

  TEST_CASE("truncated fpt") {
    TempDir dir("io");
    auto bytes = header("FPT1");
    bytes.insert(bytes.end(), {2, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0, 0, 0});
    write_bytes(dir / "t.fpt", bytes);
    CHECK(code_of([&] { load_plane(dir / "t.fpt"); }) == Errc::truncated);
  }

  TEST_CASE("non-finite values are refused") {
    TempDir dir("io");
    Plane p(1, 1);
    p.values[0] = std::nan("");
    CHECK(code_of([&] { save_plane(p, dir / "n.fpt"); }) == Errc::invalid_argument);
  }

  TEST_CASE("load_plane on PNM returns luma") {
    TempDir dir("io");
    Image img(1, 1, 3, 8);
    img.pixels = {100, 200, 50};
    save_image(img, dir / "c.ppm");
    CHECK(load_plane(dir / "c.ppm").values[0] == doctest::Approx(153.0).epsilon(1e-12));
  }
}

TEST_SUITE("to_luma") {
  TEST_CASE("gray is identity") {
    Image img(1, 2, 1, 8);
    img.pixels = {5, 7};
    CHECK(to_luma(img).values == std::vector<double>{5.0, 7.0});
  }

  TEST_CASE("white stays white") {
    Image img(1, 1, 3, 8);
    img.pixels = {255, 255, 255};
    CHECK(std::abs(to_luma(img).values[0] - 255.0) < 1e-9);
  }

  TEST_CASE("BT.601 arithmetic") {
    Image img(1, 1, 3, 8);
    img.pixels = {100, 200, 50};
    CHECK(std::abs(to_luma(img).values[0] - 153.0) < 1e-9);
  }

  TEST_CASE("unsupported channel count") {
    Image img(1, 1, 2, 8);
    CHECK(code_of([&] { to_luma(img); }) == Errc::invalid_argument);
  }

  TEST_CASE("property: linear in per-sample scaling") {
    std::mt19937_64 gen(5);
    for (int i = 0; i < 20; ++i) {
      Image img = random_image(4, 5, 3, 8, gen());
      for (auto& v : img.pixels) v = static_cast<std::uint16_t>(v / 4);
      const std::uint16_t a = static_cast<std::uint16_t>(1 + gen() % 4);
      Image scaled = img;
      for (auto& v : scaled.pixels) v = static_cast<std::uint16_t>(v * a);
      const Plane l1 = to_luma(img), l2 = to_luma(scaled);
      for (std::size_t k = 0; k < l1.size(); ++k) CHECK(std::abs(l2.values[k] - a * l1.values[k]) < 1e-9);
    }
  }

  TEST_CASE("working luma rescales 16-bit by 1/257") {
    Image img(1, 1, 1, 16);
    img.pixels = {65535};
    CHECK(working_luma(img).values[0] == doctest::Approx(255.0));
  }
}

TEST_SUITE("crop_center") {
  TEST_CASE("full size is identity") {
    const Plane p = gaussian_plane(6, 9, 1);
    CHECK(crop_center(p, 6, 9).values == p.values);
  }

  TEST_CASE("5x5 to 3x3 takes rows/cols 1..3") {
    Plane p(5, 5);
    for (std::size_t i = 0; i < 25; ++i) p.values[i] = static_cast<double>(i);
    const Plane c = crop_center(p, 3, 3);
    CHECK(c(0, 0) == p(1, 1));
    CHECK(c(2, 2) == p(3, 3));
  }

  TEST_CASE("3024x4032 to 551x551 starts at (1236,1740)") {
    Plane p(3024, 4032);
    p(1236, 1740) = 1.0;
    p(1235, 1740) = 2.0;
    const Plane c = crop_center(p, 551, 551);
    CHECK(c(0, 0) == 1.0);
  }

  TEST_CASE("oversize request") {
    CHECK(code_of([] { crop_center(Plane(4, 4), 5, 4); }) == Errc::invalid_argument);
  }

  TEST_CASE("property: nested crops compose for even differences") {
    std::mt19937_64 gen(9);
    for (int i = 0; i < 50; ++i) {
      const std::size_t h = 10 + gen() % 20, w = 10 + gen() % 20;
      const Plane p = gaussian_plane(h, w, gen());
      const std::size_t h1 = h - 2 * (gen() % 4), w1 = w - 2 * (gen() % 4);
      const std::size_t h2 = h1 - 2 * (gen() % 3), w2 = w1 - 2 * (gen() % 3);
      CHECK(crop_center(crop_center(p, h1, w1), h2, w2).values == crop_center(p, h2, w2).values);
    }
  }
}

TEST_SUITE("resize_bicubic") {
  TEST_CASE("same size is identity") {
    const Plane p = gaussian_plane(17, 23, 4);
    CHECK(max_abs_diff(resize_bicubic(p, 17, 23), p) < 1e-9);
  }

  TEST_CASE("constant stays constant") {
    const Plane p = constant_plane(20, 30, 7.25);
    const Plane r = resize_bicubic(p, 13, 41);
    for (double v : r.values) CHECK(std::abs(v - 7.25) < 1e-12);
  }

  TEST_CASE("degenerate target") {
    CHECK(code_of([] { resize_bicubic(Plane(8, 8), 3, 8); }) == Errc::invalid_argument);
  }

  TEST_CASE("property: overshoot bounded by a quarter of the range") {
    std::mt19937_64 gen(11);
    for (int i = 0; i < 30; ++i) {
      const Plane p = gaussian_plane(8 + gen() % 20, 8 + gen() % 20, gen());
      const Plane r = resize_bicubic(p, 4 + gen() % 40, 4 + gen() % 40);
      const auto [lo, hi] = std::minmax_element(p.values.begin(), p.values.end());
      const double range = *hi - *lo;
      for (double v : r.values) {
        CHECK(v >= *lo - 0.25 * range);
        CHECK(v <= *hi + 0.25 * range);
      }
    }
  }
}

TEST_SUITE("circular_shift") {
  TEST_CASE("out(i) = p(i + d)") {
    Plane p(3, 4);
    for (std::size_t i = 0; i < 12; ++i) p.values[i] = static_cast<double>(i);
    const Plane s = circular_shift(p, 1, -1);
    CHECK(s(0, 0) == p(1, 3));
    CHECK(s(2, 3) == p(0, 2));
  }
}

TEST_SUITE("manifest") {
  TEST_CASE("empty file is empty manifest") {
    TempDir dir("io");
    write_text(dir / "m.tsv", "");
    CHECK(load_manifest(dir / "m.tsv").entries.empty());
  }

  TEST_CASE("3-entry round trip") {
    TempDir dir("io");
    DatasetManifest m;
    m.add({"a.pgm", Role::reference, Label::genuine, 0});
    m.add({"b.pgm", Role::test, Label::impostor, kTagMfp | kTagZoom});
    m.add({"sub/c.ppm", Role::test, Label::genuine, kTagBokeh | kTagRaw});
    save_manifest(m, dir / "m.tsv");
    CHECK(load_manifest(dir / "m.tsv") == m);
  }

  TEST_CASE("comments and empty tag field") {
    const auto m = parse_manifest("# header\na.pgm\treference\tgenuine\t\nb.pgm\ttest\timpostor\n");
    REQUIRE(m.entries.size() == 2);
    CHECK(m.entries[0].tags == 0);
    CHECK(m.entries[1].label == Label::impostor);
  }

  TEST_CASE("vocabulary errors") {
    CHECK(code_of([] { parse_manifest("a.pgm\ttraining\tgenuine\t\n"); }) == Errc::vocabulary);
    CHECK(code_of([] { parse_manifest("a.pgm\ttest\tmaybe\t\n"); }) == Errc::vocabulary);
    CHECK(code_of([] { parse_manifest("a.pgm\ttest\tgenuine\tsepia\n"); }) == Errc::vocabulary);
  }

  TEST_CASE("duplicate path") {
    CHECK(code_of([] { parse_manifest("a.pgm\ttest\tgenuine\t\na.pgm\treference\tgenuine\t\n"); }) ==
          Errc::duplicate);
  }

  TEST_CASE("relative entries resolve against the manifest directory") {
    const ManifestEntry e{"x.pgm", Role::test, Label::genuine, 0};
    CHECK(resolve_entry("/data/set/m.tsv", e) == std::filesystem::path("/data/set/x.pgm"));
    const ManifestEntry abs{"/abs/y.pgm", Role::test, Label::genuine, 0};
    CHECK(resolve_entry("/data/set/m.tsv", abs) == std::filesystem::path("/abs/y.pgm"));
  }
}

TEST_SUITE("atomic writes") {
  TEST_CASE("failure leaves no file behind") {
    TempDir dir("io");
    write_text(dir / "file", "x");
    CHECK_THROWS_AS(write_file_atomic(dir / "file" / "out.txt", "data"), Error);
    std::size_t n = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path())) n += e.path().filename() != "file";
    CHECK(n == 0);
  }
}
