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

#include <cmath>
#include <random>

#include "prnukit/correlate.hpp"
#include "prnukit/error.hpp"
#include "prnukit/fingerprint.hpp"
#include "prnukit/lattice.hpp"
#include "prnukit/synthcam.hpp"
#include "prnukit/tensor_io.hpp"
#include "support.hpp"

using namespace prnukit;
using namespace prnukit::testing;

namespace {

double stddev(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

SynthSpec small_spec(std::uint64_t seed) {
  SynthSpec s;
  s.height = s.width = 128;
  s.seed = seed;
  return s;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::io;
}

}  // namespace

TEST_SUITE("gen_prnu") {
  TEST_CASE("deterministic per seed") {
    SynthSpec s = small_spec(1);
    CHECK(gen_prnu(s).values == gen_prnu(s).values);
  }

  TEST_CASE("sample std within 2% at 512x512") {
    SynthSpec s;
    s.seed = 2;
    const Plane k = gen_prnu(s);
    CHECK(k.height == 512);
    CHECK(std::abs(stddev(k.values) - s.prnu_sigma) <= 0.02 * s.prnu_sigma);
    CHECK(std::abs(mean_of(k.values)) < 0.001);
  }

  TEST_CASE("distinct seeds are uncorrelated") {
    SynthSpec a, b;
    a.seed = 3;
    b.seed = 4;
    CHECK(std::abs(ncc_at(gen_prnu(a), gen_prnu(b), 0, 0)) < 0.02);
  }
}

TEST_SUITE("capture") {
  TEST_CASE("model collapse: no PRNU, no noise, flat 128") {
    SynthSpec s = small_spec(5);
    s.prnu_sigma = 1e-9;
    s.noise_sigma = 0.0;
    const auto [img, truth] = capture(s, gen_prnu(s));
    CHECK(img.depth == 8);
    CHECK(img.channels == 1);
    for (auto v : img.pixels) CHECK(v == 128);
    CHECK_FALSE(truth.pattern_plane.has_value());
  }

  TEST_CASE("deterministic and shot-dependent") {
    const SynthSpec s = small_spec(6);
    const Plane k = gen_prnu(s);
    CHECK(capture(s, k, 3).first.pixels == capture(s, k, 3).first.pixels);
    CHECK(capture(s, k, 3).first.pixels != capture(s, k, 4).first.pixels);
  }

  TEST_CASE("tiled_noise pattern shows up as lattice (60,65)") {
    SynthSpec s;
    s.seed = 7;
    s.pattern = PatternSpec{};
    s.pattern->amplitude = 3.0;
    const Plane k = gen_prnu(s);
    const auto [img, truth] = capture(s, k);
    REQUIRE(truth.pattern_plane.has_value());
    const Residual w = residual(img, DenoiseConfig{});
    const LatticeReport rep = lattice_of(w.plane, fit_window(kDefaultWindow, 512, 512), kDefaultMinPeak);
    REQUIRE_FALSE(rep.empty());
    CHECK(rep.basis == Shift{60, 65});
  }

  TEST_CASE("pattern plane is periodic along the basis") {
    PatternSpec p;
    const Plane pat = pattern_plane(p, 200, 200);
    for (std::size_t r = 0; r + 60 < 200; r += 7)
      for (std::size_t c = 0; c + 65 < 200; c += 11) CHECK(pat(r, c) == pat(r + 60, c + 65));
    CHECK(pat(10, 10) != pat(10, 75));
  }

  TEST_CASE("cosine energy below the noise floor lands in the residual") {
    SynthSpec s;
    s.seed = 8;
    s.prnu_sigma = 1e-9;
    s.noise_sigma = 0.0;
    PatternSpec p;
    p.waveform = Waveform::cosine;
    s.pattern = p;
    const auto [img, truth] = capture(s, gen_prnu(s));
    const Residual w = residual(img, DenoiseConfig{});
    const double var = stddev(w.plane.values) * stddev(w.plane.values);
    const double expect = p.amplitude * p.amplitude / 2.0;
    CHECK(std::abs(var - expect) <= 0.2 * expect);
  }

  TEST_CASE("doubling the scene doubles the sensor response") {
    SynthSpec a;
    a.seed = 9;
    a.scene.intensity = 60.0;
    SynthSpec b = a;
    b.scene.intensity = 120.0;
    const Plane k = gen_prnu(a);
    const Plane ya = to_luma(capture(a, k).first), yb = to_luma(capture(b, k).first);
    CHECK(std::abs(mean_of(yb.values) / mean_of(ya.values) - 2.0) <= 0.02);
  }

  TEST_CASE("L=20 flat captures recover K") {
    const SynthSpec s = small_spec(10);
    const Plane k = gen_prnu(s);
    std::vector<Image> imgs;
    for (std::size_t i = 0; i < 20; ++i) imgs.push_back(capture(s, k, i).first);
    CHECK(ncc_at(estimate_fingerprint(imgs, EstimateOptions{}).plane, k, 0, 0) >= 0.4);
  }

  TEST_CASE("PRNU plane dims must match") {
    const SynthSpec s = small_spec(11);
    CHECK(code_of([&] { capture(s, Plane(10, 10)); }) == Errc::dimension_mismatch);
  }

  TEST_CASE("spec validation") {
    SynthSpec s = small_spec(12);
    s.prnu_sigma = 0.2;
    CHECK_THROWS_AS(s.validate(), Error);
    s = small_spec(12);
    s.scene.intensity = 251;
    CHECK_THROWS_AS(s.validate(), Error);
    s.scene.kind = SceneKind::texture;
    CHECK_NOTHROW(s.validate());
  }
}

TEST_SUITE("apply_hdr_shifts") {
  TEST_CASE("no regions is identity") {
    const SynthSpec s = small_spec(13);
    const Image img = capture(s, gen_prnu(s)).first;
    const auto [out, truth] = apply_hdr_shifts(img, {}, 64);
    CHECK(out.pixels == img.pixels);
    for (const auto& c : truth.cells) CHECK(c.shift == Shift{0, 0});
  }

  TEST_CASE("region content is resampled at i + d") {
    Image img(64, 64, 1, 8);
    for (std::size_t r = 0; r < 64; ++r)
      for (std::size_t c = 0; c < 64; ++c) img.at(r, c) = static_cast<std::uint16_t>(r * 3 + c);
    const auto [out, truth] = apply_hdr_shifts(img, {HdrRegion{Rect{0, 0, 32, 32}, Shift{5, 3}}}, 32);
    CHECK(out.at(10, 10) == img.at(15, 13));
    CHECK(out.at(40, 40) == img.at(40, 40));
    CHECK(truth.at(0, 0).shift == Shift{5, 3});
    CHECK(truth.at(1, 1).shift == Shift{0, 0});
  }

  TEST_CASE("quadrant shifts recovered by block_shift_map") {
    SynthSpec s;
    s.height = s.width = 512;
    s.scene.kind = SceneKind::texture;
    s.seed = 14;
    const Plane k = gen_prnu(s);
    const Image img = capture(s, k).first;
    const auto [out, truth] = apply_hdr_shifts(
        img, {HdrRegion{Rect{0, 0, 256, 256}, Shift{5, 3}}, HdrRegion{Rect{256, 0, 256, 256}, Shift{5, -3}}}, 256);
    const Residual w = residual(out, DenoiseConfig{});
    const ShiftMap m = block_shift_map(w.plane, fingerprint_term(k, out), 256, 20);
    CHECK(m.at(0, 0).shift == Shift{5, 3});
    CHECK(m.at(1, 0).shift == Shift{5, -3});
    CHECK(m.at(0, 1).shift == Shift{0, 0});
  }

  TEST_CASE("overlap, bounds and shift limits") {
    const Image img(64, 64, 1, 8);
    CHECK_THROWS_AS(apply_hdr_shifts(img, {HdrRegion{Rect{0, 0, 40, 40}, Shift{1, 1}},
                                           HdrRegion{Rect{30, 30, 20, 20}, Shift{1, 1}}}),
                    Error);
    CHECK_THROWS_AS(apply_hdr_shifts(img, {HdrRegion{Rect{50, 0, 20, 20}, Shift{1, 1}}}), Error);
    CHECK_THROWS_AS(apply_hdr_shifts(img, {HdrRegion{Rect{0, 0, 20, 20}, Shift{17, 0}}}), Error);
  }
}

TEST_SUITE("apply_bokeh") {
  TEST_CASE("empty mask is identity") {
    const SynthSpec s = small_spec(15);
    const Image img = capture(s, gen_prnu(s)).first;
    CHECK(apply_bokeh(img, Plane(128, 128), 4.0, 2.0, 1).first.pixels == img.pixels);
  }

  TEST_CASE("outside the mask is untouched") {
    const SynthSpec s = small_spec(16);
    const Image img = capture(s, gen_prnu(s)).first;
    const Plane mask = disk_mask(128, 128, 64, 64, 30);
    const Image out = apply_bokeh(img, mask, 4.0, 2.0, 1).first;
    for (std::size_t r = 0; r < 128; ++r)
      for (std::size_t c = 0; c < 128; ++c)
        if (mask(r, c) == 0.0) CHECK(out.at(r, c) == img.at(r, c));
  }

  TEST_CASE("full-frame bokeh destroys the genuine match") {
    std::size_t below = 0;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      SynthSpec s;
      s.height = s.width = 256;
      s.scene.kind = SceneKind::texture;
      s.seed = 300 + seed;
      const Plane k = gen_prnu(s);
      const Image img = apply_bokeh(capture(s, k).first, constant_plane(256, 256, 1.0), 4.0, 2.0, seed).first;
      below += pce(residual(img, DenoiseConfig{}).plane, fingerprint_term(k, img)).pce < 60.0;
    }
    CHECK(below >= 23);
  }

  TEST_CASE("blur sigma must be positive") {
    CHECK_THROWS_AS(apply_bokeh(Image(8, 8, 1, 8), Plane(8, 8), 0.0, 1.0), Error);
  }
}

TEST_SUITE("synth spec text") {
  TEST_CASE("format/parse round trip") {
    SynthSpec s;
    s.height = 300;
    s.width = 200;
    s.prnu_sigma = 0.015;
    s.noise_sigma = 2.5;
    s.scene.kind = SceneKind::texture;
    s.scene.seed = 77;
    s.seed = 123456789012345ull;
    PatternSpec p;
    p.basis = {40, -25};
    p.amplitude = 1.5;
    p.phase = {3, 4};
    p.waveform = Waveform::cosine;
    p.seed = 9;
    s.pattern = p;
    const SynthSpec back = parse_synth_spec(format_synth_spec(s));
    CHECK(format_synth_spec(back) == format_synth_spec(s));
    CHECK(back.pattern->basis == Shift{40, -25});
    CHECK(back.scene.kind == SceneKind::texture);
  }

  TEST_CASE("comments, blanks and defaults") {
    const SynthSpec s = parse_synth_spec("# cam\n\nheight = 64\nwidth=96\n");
    CHECK(s.height == 64);
    CHECK(s.width == 96);
    CHECK(s.prnu_sigma == 0.02);
    CHECK_FALSE(s.pattern.has_value());
  }

  TEST_CASE("pattern_enabled switches on a default pattern") {
    const SynthSpec s = parse_synth_spec("pattern_enabled = true\npattern_amplitude = 3\n");
    REQUIRE(s.pattern.has_value());
    CHECK(s.pattern->basis == Shift{60, 65});
    CHECK(s.pattern->amplitude == 3.0);
  }

  TEST_CASE("errors") {
    CHECK(code_of([] { parse_synth_spec("colour = red\n"); }) == Errc::vocabulary);
    CHECK(code_of([] { parse_synth_spec("scene = stars\n"); }) == Errc::vocabulary);
    CHECK(code_of([] { parse_synth_spec("rng = mt19937\n"); }) == Errc::vocabulary);
    CHECK(code_of([] { parse_synth_spec("height = tall\n"); }) == Errc::invalid_argument);
    CHECK(code_of([] { parse_synth_spec("pattern_basis = 60\n"); }) == Errc::invalid_argument);
    CHECK(code_of([] { parse_synth_spec("just words\n"); }) == Errc::invalid_argument);
  }
}
