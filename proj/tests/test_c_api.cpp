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

#include <unistd.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "prnukit/prnukit.h"

namespace fs = std::filesystem;

namespace {

struct Dir {
  fs::path path;
  Dir() {
    static int n = 0;
    path = fs::temp_directory_path() / ("pk_capi_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
    fs::create_directories(path);
  }
  ~Dir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  pk_string_free(s);
  return out;
}

pk_plane* noise_plane(std::size_t h, std::size_t w, std::uint64_t seed, double sigma = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n(0.0, sigma);
  std::vector<double> v(h * w);
  for (auto& x : v) x = n(gen);
  pk_plane* p = nullptr;
  REQUIRE(pk_plane_from_data(v.data(), h, w, &p) == PK_OK);
  return p;
}

pk_synth* small_synth(const char* extra = "") {
  pk_synth* s = nullptr;
  const std::string text = std::string("height = 128\nwidth = 128\nseed = 3\n") + extra;
  REQUIRE(pk_synth_parse(text.c_str(), &s) == PK_OK);
  return s;
}

}  // namespace

TEST_SUITE("status and strings") {
  TEST_CASE("names and version") {
    CHECK(std::string(pk_status_name(PK_OK)) == "ok");
    CHECK(std::string(pk_status_name(PK_ERR_TRUNCATED)) == "truncated");
    CHECK(std::string(pk_status_name(PK_ERR_MISSING_SOI)) == "missing_soi");
    CHECK(std::string(pk_version()) == "0.1.0");
    CHECK(std::string(pk_verdict_name(PK_INCONCLUSIVE)) == "inconclusive");
  }

  TEST_CASE("errors set the last message") {
    pk_image* img = nullptr;
    CHECK(pk_image_load("/nonexistent/x.pgm", &img) == PK_ERR_IO);
    CHECK(img == nullptr);
    CHECK(std::string(pk_last_error()).size() > 0);
  }

  TEST_CASE("null arguments are rejected, not dereferenced") {
    CHECK(pk_image_load(nullptr, nullptr) == PK_ERR_INVALID_ARGUMENT);
    CHECK(pk_pce(nullptr, nullptr, nullptr) == PK_ERR_INVALID_ARGUMENT);
    pk_plane_free(nullptr);
    pk_string_free(nullptr);
  }

  TEST_CASE("format_real") {
    char* s = nullptr;
    REQUIRE(pk_format_real(0.1, &s) == PK_OK);
    CHECK(take(s) == "0.10000000000000001");
    REQUIRE(pk_format_real(-INFINITY, &s) == PK_OK);
    CHECK(take(s) == "-inf");
  }

  TEST_CASE("default configs") {
    pk_verify_config v;
    pk_verify_config_default(&v);
    CHECK(v.tau == 60.0);
    CHECK(v.search == PK_SEARCH_FULL);
    pk_screen_config sc;
    pk_screen_config_default(&sc);
    CHECK(sc.window == 551);
    CHECK(sc.min_peak == 0.02);
    pk_estimate_options o;
    pk_estimate_options_default(&o);
    CHECK(o.denoise.levels == 4);
    CHECK(o.denoise.base_noise_sigma == 3.0);
    CHECK(o.eps == 1.0);
    CHECK(o.skip_saturated == 1);
  }
}

TEST_SUITE("planes and images") {
  TEST_CASE("plane data round trip through FPT") {
    Dir d;
    pk_plane* p = noise_plane(5, 7, 1);
    REQUIRE(pk_plane_save(p, (d / "p.fpt").c_str()) == PK_OK);
    pk_plane* q = nullptr;
    REQUIRE(pk_plane_load((d / "p.fpt").c_str(), &q) == PK_OK);
    size_t h = 0, w = 0;
    REQUIRE(pk_plane_dims(q, &h, &w) == PK_OK);
    CHECK(h == 5);
    CHECK(w == 7);
    for (std::size_t i = 0; i < 35; ++i)
      CHECK(pk_plane_data(q)[i] == static_cast<double>(static_cast<float>(pk_plane_data(p)[i])));
    pk_plane_free(p);
    pk_plane_free(q);
  }

  TEST_CASE("non-finite data refused") {
    const double bad[2] = {1.0, NAN};
    pk_plane* p = nullptr;
    CHECK(pk_plane_from_data(bad, 1, 2, &p) == PK_ERR_INVALID_ARGUMENT);
  }

  TEST_CASE("truncated PNM maps to its status") {
    Dir d;
    std::ofstream(d / "t.ppm", std::ios::binary) << "P6\n4 4\n255\n" << std::string(24, 'x');
    pk_image* img = nullptr;
    CHECK(pk_image_load((d / "t.ppm").c_str(), &img) == PK_ERR_TRUNCATED);
  }

  TEST_CASE("image dims and residual") {
    Dir d;
    std::ofstream(d / "c.pgm", std::ios::binary) << "P5\n64 64\n255\n" << std::string(64 * 64, '\x50');
    pk_image* img = nullptr;
    REQUIRE(pk_image_load((d / "c.pgm").c_str(), &img) == PK_OK);
    size_t h, w;
    int c, depth;
    REQUIRE(pk_image_dims(img, &h, &w, &c, &depth) == PK_OK);
    CHECK(h == 64);
    CHECK(c == 1);
    CHECK(depth == 8);
    pk_plane* r = nullptr;
    REQUIRE(pk_residual(img, nullptr, &r) == PK_OK);
    for (std::size_t i = 0; i < 64 * 64; ++i) CHECK(pk_plane_data(r)[i] == 0.0);
    pk_plane_free(r);
    pk_image_free(img);
  }
}

TEST_SUITE("correlation") {
  TEST_CASE("self PCE, strict verify") {
    pk_plane* a = noise_plane(64, 64, 2);
    pk_pce_result r;
    REQUIRE(pk_pce(a, a, &r) == PK_OK);
    CHECK(r.peak_s1 == 0);
    CHECK(r.peak_s2 == 0);
    CHECK(r.excluded == 121);
    CHECK(std::abs(r.rho_max - 1.0) < 1e-12);
    pk_decision dec;
    pk_verify_config cfg;
    pk_verify_config_default(&cfg);
    REQUIRE(pk_verify(&r, &cfg, &dec) == PK_OK);
    CHECK(dec == PK_H1);
    r.pce = 60.0;
    REQUIRE(pk_verify(&r, &cfg, &dec) == PK_OK);
    CHECK(dec == PK_H0);
    pk_plane_free(a);
  }

  TEST_CASE("mismatch and degenerate inputs") {
    pk_plane* a = noise_plane(8, 8, 3);
    pk_plane* b = noise_plane(8, 9, 4);
    const std::vector<double> flat(64, 2.0);
    pk_plane* c = nullptr;
    REQUIRE(pk_plane_from_data(flat.data(), 8, 8, &c) == PK_OK);
    pk_pce_result r;
    CHECK(pk_pce(a, b, &r) == PK_ERR_DIMENSION_MISMATCH);
    CHECK(pk_pce(a, c, &r) == PK_ERR_DEGENERATE_INPUT);
    pk_plane_free(a);
    pk_plane_free(b);
    pk_plane_free(c);
  }

  TEST_CASE("autocorr origin and surface svg") {
    pk_plane* a = noise_plane(32, 32, 5);
    pk_plane* s = nullptr;
    REQUIRE(pk_autocorr(a, &s) == PK_OK);
    CHECK(std::abs(pk_plane_data(s)[0] - 1.0) < 1e-12);
    char* svg = nullptr;
    REQUIRE(pk_surface_svg(s, 31, &svg) == PK_OK);
    const std::string text = take(svg);
    std::size_t rects = 0;
    for (auto p = text.find("<rect"); p != std::string::npos; p = text.find("<rect", p + 1)) ++rects;
    CHECK(rects == 31 * 31);
    CHECK(pk_surface_svg(s, 33, &svg) == PK_ERR_INVALID_ARGUMENT);
    pk_plane_free(a);
    pk_plane_free(s);
  }
}

TEST_SUITE("synthetic pipeline") {
  TEST_CASE("genuine and impostor through the C API") {
    Dir d;
    pk_synth* s = small_synth();
    pk_plane* k = nullptr;
    REQUIRE(pk_synth_gen_prnu(s, &k) == PK_OK);
    pk_manifest* m = nullptr;
    REQUIRE(pk_manifest_new(&m) == PK_OK);
    for (int i = 0; i < 12; ++i) {
      pk_image* img = nullptr;
      REQUIRE(pk_synth_capture(s, k, static_cast<size_t>(i), &img, nullptr) == PK_OK);
      const std::string name = "ref_" + std::to_string(i) + ".pgm";
      REQUIRE(pk_image_save(img, (d / name).c_str()) == PK_OK);
      REQUIRE(pk_manifest_add(m, name.c_str(), PK_ROLE_REFERENCE, PK_LABEL_GENUINE, "") == PK_OK);
      pk_image_free(img);
    }
    REQUIRE(pk_manifest_save(m, (d / "m.tsv").c_str()) == PK_OK);
    pk_manifest_free(m);

    pk_manifest* loaded = nullptr;
    REQUIRE(pk_manifest_load((d / "m.tsv").c_str(), &loaded) == PK_OK);
    CHECK(pk_manifest_size(loaded) == 12);
    const char *path = nullptr, *tags = nullptr, *raw = nullptr;
    pk_role role;
    pk_label label;
    REQUIRE(pk_manifest_entry(loaded, 3, &path, &role, &label, &tags) == PK_OK);
    CHECK(std::string(path) == d / "ref_3.pgm");
    REQUIRE(pk_manifest_entry_source(loaded, 3, &raw) == PK_OK);
    CHECK(std::string(raw) == "ref_3.pgm");
    CHECK(role == PK_ROLE_REFERENCE);
    CHECK(pk_manifest_entry(loaded, 12, &path, &role, &label, &tags) == PK_ERR_INVALID_ARGUMENT);

    pk_estimate_options opts;
    pk_estimate_options_default(&opts);
    opts.threads = 3;
    pk_fingerprint* fp = nullptr;
    REQUIRE(pk_fingerprint_from_manifest(loaded, &opts, &fp) == PK_OK);
    char* hdr = nullptr;
    REQUIRE(pk_fingerprint_header(fp, &hdr) == PK_OK);
    CHECK(take(hdr).find("provenance=ref_0.pgm") != std::string::npos);

    REQUIRE(pk_synth_set_scene(s, PK_SCENE_TEXTURE, 128.0, 99) == PK_OK);
    pk_image* test = nullptr;
    REQUIRE(pk_synth_capture(s, k, 5000, &test, nullptr) == PK_OK);
    pk_pce_result r;
    pk_decision dec;
    REQUIRE(pk_verify_image(fp, test, nullptr, nullptr, &r, &dec) == PK_OK);
    CHECK(dec == PK_H1);

    pk_synth* other = small_synth();
    REQUIRE(pk_synth_set_seed(other, 777) == PK_OK);
    REQUIRE(pk_synth_set_scene(other, PK_SCENE_TEXTURE, 128.0, 98) == PK_OK);
    pk_plane* k2 = nullptr;
    REQUIRE(pk_synth_gen_prnu(other, &k2) == PK_OK);
    pk_image* imp = nullptr;
    REQUIRE(pk_synth_capture(other, k2, 0, &imp, nullptr) == PK_OK);
    REQUIRE(pk_verify_image(fp, imp, nullptr, nullptr, &r, &dec) == PK_OK);
    CHECK(dec == PK_H0);

    REQUIRE(pk_fingerprint_save(fp, (d / "fp.fpt").c_str()) == PK_OK);
    CHECK(fs::exists(d / "fp.fpt.hdr"));
    pk_fingerprint* back = nullptr;
    REQUIRE(pk_fingerprint_load((d / "fp.fpt").c_str(), &back) == PK_OK);
    REQUIRE(pk_fingerprint_zero_mean(back) == PK_OK);
    REQUIRE(pk_fingerprint_header(back, &hdr) == PK_OK);
    CHECK(take(hdr).find("zero_mean") != std::string::npos);

    pk_image_free(test);
    pk_image_free(imp);
    pk_plane_free(k);
    pk_plane_free(k2);
    pk_fingerprint_free(fp);
    pk_fingerprint_free(back);
    pk_manifest_free(loaded);
    pk_synth_free(s);
    pk_synth_free(other);
  }

  TEST_CASE("spec text and pattern toggle") {
    pk_synth* s = small_synth("pattern_enabled = true\n");
    char* text = nullptr;
    REQUIRE(pk_synth_format(s, &text) == PK_OK);
    const std::string t = take(text);
    CHECK(t.find("pattern_basis = 60,65") != std::string::npos);
    CHECK(t.find("rng = philox4x32-10") != std::string::npos);
    pk_plane* k = nullptr;
    REQUIRE(pk_synth_gen_prnu(s, &k) == PK_OK);
    pk_image* img = nullptr;
    pk_plane* pat = nullptr;
    REQUIRE(pk_synth_capture(s, k, 0, &img, &pat) == PK_OK);
    CHECK(pat != nullptr);
    pk_plane_free(pat);
    pk_image_free(img);
    REQUIRE(pk_synth_set_pattern_enabled(s, 0) == PK_OK);
    REQUIRE(pk_synth_capture(s, k, 0, &img, &pat) == PK_OK);
    CHECK(pat == nullptr);
    std::uint64_t seed = 0;
    REQUIRE(pk_synth_seed(s, &seed) == PK_OK);
    CHECK(seed == 3);
    pk_image_free(img);
    pk_plane_free(k);
    pk_synth_free(s);
    pk_synth* bad = nullptr;
    CHECK(pk_synth_parse("colour = red\n", &bad) == PK_ERR_VOCABULARY);
    CHECK(bad == nullptr);
  }
}

TEST_SUITE("lattice and collisions") {
  TEST_CASE("noise has no lattice") {
    pk_plane* a = noise_plane(512, 512, 6);
    pk_plane* s = nullptr;
    REQUIRE(pk_autocorr(a, &s) == PK_OK);
    pk_lattice* l = nullptr;
    REQUIRE(pk_detect_lattice(s, 511, 0.02, &l) == PK_OK);
    long p1 = -1, p2 = -1;
    double strength = -1;
    REQUIRE(pk_lattice_basis(l, &p1, &p2, &strength) == PK_OK);
    CHECK(p1 == 0);
    CHECK(p2 == 0);
    CHECK(strength == 0.0);
    char* js = nullptr;
    REQUIRE(pk_lattice_json(l, &js) == PK_OK);
    CHECK(take(js).find("\"basis\"") != std::string::npos);
    pk_lattice_free(l);
    pk_plane_free(a);
    pk_plane_free(s);
  }

  TEST_CASE("cross screen over three fingerprints") {
    Dir d;
    std::vector<pk_fingerprint*> fps;
    for (int i = 0; i < 3; ++i) {
      pk_plane* p = noise_plane(128, 128, 10 + static_cast<std::uint64_t>(i), 0.02);
      REQUIRE(pk_plane_save(p, (d / ("k" + std::to_string(i) + ".fpt")).c_str()) == PK_OK);
      pk_fingerprint* fp = nullptr;
      REQUIRE(pk_fingerprint_load((d / ("k" + std::to_string(i) + ".fpt")).c_str(), &fp) == PK_OK);
      fps.push_back(fp);
      pk_plane_free(p);
    }
    const char* ids[] = {"a", "b", "c"};
    const char* groups[] = {"S", "S", "A"};
    pk_screen_config cfg;
    pk_screen_config_default(&cfg);
    cfg.window = 127;
    pk_collision_matrix* m = nullptr;
    REQUIRE(pk_cross_model_screen(fps.data(), ids, groups, 3, &cfg, &m) == PK_OK);
    pk_verdict v;
    pk_pce_result r;
    REQUIRE(pk_collision_verdict(m, 0, 2, &v, &r) == PK_OK);
    CHECK(v == PK_DISTINCT);
    CHECK(pk_collision_verdict(m, 2, 2, &v, &r) == PK_ERR_INVALID_ARGUMENT);
    char* csv = nullptr;
    REQUIRE(pk_collision_scatter_csv(m, &csv) == PK_OK);
    const std::string text = take(csv);
    CHECK(text.rfind("pair_id,group_a,group_b,pce,verdict\na:b,S,S,", 0) == 0);
    pk_collision_matrix_free(m);
    CHECK(pk_cross_model_screen(fps.data(), ids, groups, 1, &cfg, &m) != PK_OK);
    for (auto* fp : fps) pk_fingerprint_free(fp);
  }
}

TEST_SUITE("local analysis") {
  TEST_CASE("shift map, json round trip, adaptation") {
    pk_plane* t = noise_plane(128, 128, 20);
    pk_shift_map* m = nullptr;
    REQUIRE(pk_block_shift_map(t, t, 64, 8, 0, &m) == PK_OK);
    size_t rows = 0, cols = 0;
    REQUIRE(pk_shift_map_grid(m, &rows, &cols) == PK_OK);
    CHECK(rows == 2);
    CHECK(cols == 2);
    long s1 = 9, s2 = 9;
    double conf = 0;
    REQUIRE(pk_shift_map_cell(m, 1, 1, &s1, &s2, &conf) == PK_OK);
    CHECK(s1 == 0);
    CHECK(s2 == 0);
    CHECK(conf > 60);
    char* js = nullptr;
    REQUIRE(pk_shift_map_json(m, &js) == PK_OK);
    const std::string text = take(js);
    pk_shift_map* back = nullptr;
    REQUIRE(pk_shift_map_from_json(text.c_str(), &back) == PK_OK);
    REQUIRE(pk_shift_map_json(back, &js) == PK_OK);
    CHECK(take(js) == text);
    CHECK(pk_shift_map_from_json("{not json", &back) != PK_OK);
    pk_shift_map_free(back);
    CHECK(pk_block_shift_map(t, t, 256, 8, 0, &m) == PK_ERR_INVALID_ARGUMENT);
    pk_shift_map_free(m);
    pk_plane_free(t);
  }

  TEST_CASE("bokeh map, mask and masked pce") {
    pk_plane* t = noise_plane(84, 84, 21);
    pk_block_map* bm = nullptr;
    REQUIRE(pk_block_corr_map(t, t, 21, &bm) == PK_OK);
    const double thr = 0.5;
    pk_bokeh_mask* mask = nullptr;
    REQUIRE(pk_make_bokeh_mask(bm, &thr, &mask) == PK_OK);
    double used = 0;
    size_t masked = 99;
    int warn = 1;
    REQUIRE(pk_bokeh_mask_info(mask, &used, &masked, &warn) == PK_OK);
    CHECK(used == 0.5);
    CHECK(masked == 0);
    CHECK(warn == 0);
    pk_pce_result a, b;
    REQUIRE(pk_pce(t, t, &a) == PK_OK);
    REQUIRE(pk_masked_pce(t, t, mask, &b) == PK_OK);
    CHECK(a.pce == b.pce);
    char* js = nullptr;
    REQUIRE(pk_bokeh_mask_json(mask, &js) == PK_OK);
    const std::string text = take(js);
    pk_bokeh_mask* back = nullptr;
    REQUIRE(pk_bokeh_mask_from_json(text.c_str(), &back) == PK_OK);
    pk_bokeh_mask_free(back);
    const double high = 2.0;
    pk_bokeh_mask* full = nullptr;
    REQUIRE(pk_make_bokeh_mask(bm, &high, &full) == PK_OK);
    REQUIRE(pk_bokeh_mask_info(full, &used, &masked, &warn) == PK_OK);
    CHECK(warn == 1);
    CHECK(pk_masked_pce(t, t, full, &b) == PK_ERR_INSUFFICIENT_SUPPORT);
    pk_bokeh_mask_free(full);
    pk_bokeh_mask_free(mask);
    pk_block_map_free(bm);
    pk_plane_free(t);
  }
}

TEST_SUITE("jpeg and scores") {
  TEST_CASE("mfp detection on bytes") {
    const std::vector<std::uint8_t> f{0xFF, 0xD8, 0xFF, 0xE4, 0x00, 0x08, 'x', 'M', 'F', 'P', '3', 'y', 0xFF, 0xD9};
    pk_mfp_tags t;
    REQUIRE(pk_detect_mfp(f.data(), f.size(), &t) == PK_OK);
    CHECK(t.mfp3 == 1);
    CHECK(t.is_mfp == 1);
    CHECK(t.has_zoom == 0);
    const std::vector<std::uint8_t> bad{0x00, 0x01};
    CHECK(pk_detect_mfp(bad.data(), bad.size(), &t) == PK_ERR_MISSING_SOI);
  }

  TEST_CASE("roc summary") {
    pk_roc_summary s;
    char *csv = nullptr, *svg = nullptr;
    REQUIRE(pk_roc_from_csv("score,label,group\n100,genuine,a\n80,genuine,a\n10,impostor,b\n", 60.0, &s, &csv,
                            &svg, nullptr) == PK_OK);
    CHECK(s.auc == 1.0);
    CHECK(s.tpr == 1.0);
    CHECK(s.fpr == 0.0);
    CHECK(take(csv).rfind("fpr,tpr,threshold\n", 0) == 0);
    CHECK(take(svg).find("<svg") != std::string::npos);
    CHECK(pk_roc_from_csv("1,genuine\n", 60.0, &s, nullptr, nullptr, nullptr) == PK_ERR_INVALID_ARGUMENT);
  }
}
