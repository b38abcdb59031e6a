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

// prnukit command-line driver. Links only the C API.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "prnukit/prnukit.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Failure {
  int exit_code;
  std::string code;
  std::string message;
};

[[noreturn]] void invalid(const std::string& msg) { throw Failure{kExitValidation, "invalid_argument", msg}; }

void check(pk_status s) {
  if (s != PK_OK) throw Failure{kExitRuntime, pk_status_name(s), pk_last_error()};
}

template <typename T>
using Owned = std::unique_ptr<T, void (*)(T*)>;

Owned<pk_image> own(pk_image* p) { return {p, pk_image_free}; }
Owned<pk_plane> own(pk_plane* p) { return {p, pk_plane_free}; }
Owned<pk_fingerprint> own(pk_fingerprint* p) { return {p, pk_fingerprint_free}; }
Owned<pk_lattice> own(pk_lattice* p) { return {p, pk_lattice_free}; }
Owned<pk_collision_matrix> own(pk_collision_matrix* p) { return {p, pk_collision_matrix_free}; }
Owned<pk_shift_map> own(pk_shift_map* p) { return {p, pk_shift_map_free}; }
Owned<pk_block_map> own(pk_block_map* p) { return {p, pk_block_map_free}; }
Owned<pk_bokeh_mask> own(pk_bokeh_mask* p) { return {p, pk_bokeh_mask_free}; }
Owned<pk_manifest> own(pk_manifest* p) { return {p, pk_manifest_free}; }
Owned<pk_synth> own(pk_synth* p) { return {p, pk_synth_free}; }

std::string take(char* s) {
  std::string out = s ? s : "";
  pk_string_free(s);
  return out;
}

std::string real(double v) {
  char* s = nullptr;
  check(pk_format_real(v, &s));
  return take(s);
}

ordered_json json_real(double v) {
  if (std::isfinite(v)) return v;
  return real(v);
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Failure{kExitRuntime, "io", "cannot read " + p.string()};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const fs::path& path, const std::string& bytes) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) {
      fs::remove(tmp, ec);
      throw Failure{kExitRuntime, "unwritable", "cannot write " + path.string()};
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Failure{kExitRuntime, "unwritable", "cannot rename into " + path.string()};
  }
}

fs::path output_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Failure{kExitRuntime, "unwritable", "cannot create " + out};
  return out;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// Runs fn(i) for i in [0, n), `threads` at a time; results land by index.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  std::vector<std::optional<Failure>> errors(n);
  for (std::size_t start = 0; start < n; start += threads) {
    const std::size_t end = std::min(n, start + threads);
    std::vector<std::thread> pool;
    for (std::size_t i = start; i < end; ++i)
      pool.emplace_back([&, i] {
        try {
          fn(i);
        } catch (const Failure& f) {
          errors[i] = f;
        }
      });
    for (auto& t : pool) t.join();
    for (std::size_t i = start; i < end; ++i)
      if (errors[i]) throw *errors[i];
  }
}

// ---- shared options ----------------------------------------------------------

struct Common {
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;
  std::string out;
  double tau = 60.0;
  bool zero_only = false;
  int levels = 4;
  double sigma0 = 3.0;
};

void add_common(CLI::App* app, Common& c, bool out_required = true) {
  app->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1u, 256u));
  auto* out = app->add_option("--out", c.out, "output path");
  if (out_required) out->required();
}

void add_verify_opts(CLI::App* app, Common& c) {
  app->add_option("--tau", c.tau, "PCE decision threshold (strict >)");
  app->add_flag("--zero-only", c.zero_only, "evaluate the PCE at zero shift only");
}

void add_denoise_opts(CLI::App* app, Common& c) {
  app->add_option("--levels", c.levels, "wavelet levels");
  app->add_option("--sigma0", c.sigma0, "denoiser noise sigma (8-bit units)");
}

pk_denoise_config denoise_of(const Common& c) {
  pk_denoise_config d;
  pk_denoise_config_default(&d);
  d.levels = c.levels;
  d.base_noise_sigma = c.sigma0;
  return d;
}

pk_verify_config verify_of(const Common& c) {
  pk_verify_config v;
  pk_verify_config_default(&v);
  v.tau = c.tau;
  v.search = c.zero_only ? PK_SEARCH_ZERO_ONLY : PK_SEARCH_FULL;
  return v;
}

void validate_common(const Common& c) {
  if (!std::isfinite(c.tau)) invalid("--tau must be finite");
  if (c.levels < 1 || c.levels > 8) invalid("--levels must be in [1, 8]");
  if (!(c.sigma0 > 0.0) || !std::isfinite(c.sigma0)) invalid("--sigma0 must be > 0");
}

ordered_json denoise_json(const Common& c) {
  return {{"wavelet", "db8"}, {"levels", c.levels}, {"base_noise_sigma", json_real(c.sigma0)},
          {"window_sizes", {3, 5, 7, 9}}};
}

ordered_json base_config(const std::string& command, const Common& c) {
  // threads is deliberately absent: outputs must not depend on it
  ordered_json j;
  j["command"] = command;
  j["luma"] = "bt601";
  j["version"] = pk_version();
  j["tau"] = json_real(c.tau);
  j["search"] = c.zero_only ? "zero_only" : "full";
  j["denoise"] = denoise_json(c);
  if (c.seed) j["seed"] = *c.seed;
  return j;
}

ordered_json pce_json(const pk_pce_result& r) {
  return {{"pce", json_real(r.pce)},
          {"peak", {r.peak_s1, r.peak_s2}},
          {"rho_max", json_real(r.rho_max)},
          {"excluded", r.excluded},
          {"pce_at_origin", json_real(r.pce_at_origin)},
          {"rho_origin", json_real(r.rho_origin)}};
}

std::string stem_of(const std::string& p) { return fs::path(p).stem().string(); }

Owned<pk_fingerprint> load_fp(const std::string& path) {
  pk_fingerprint* fp = nullptr;
  check(pk_fingerprint_load(path.c_str(), &fp));
  return own(fp);
}

Owned<pk_image> load_img(const std::string& path) {
  pk_image* img = nullptr;
  check(pk_image_load(path.c_str(), &img));
  return own(img);
}

struct Pair {
  Owned<pk_plane> w{nullptr, pk_plane_free};
  Owned<pk_plane> term{nullptr, pk_plane_free};
};

Pair residual_and_term(const pk_fingerprint* fp, const pk_image* img, const Common& c) {
  pk_plane* w = nullptr;
  pk_plane* term = nullptr;
  const pk_denoise_config d = denoise_of(c);
  check(pk_residual(img, &d, &w));
  Pair p;
  p.w = own(w);
  check(pk_fingerprint_term(fp, img, &term));
  p.term = own(term);
  return p;
}

void check_window(std::size_t window) {
  if (window < 3 || window % 2 == 0) invalid("--window must be odd and >= 3");
}

std::size_t resolve_window(std::size_t requested, bool explicit_window, std::size_t h, std::size_t w) {
  if (requested <= std::min(h, w)) return requested;
  if (explicit_window)
    throw Failure{kExitRuntime, "invalid_argument", "--window " + std::to_string(requested) + " exceeds the plane"};
  std::size_t fit = std::min(h, w);
  return fit % 2 ? fit : fit - 1;
}

// ---- subcommands ---------------------------------------------------------------

struct Command {
  std::function<void()> validate;
  std::function<void()> run;
};

Command cmd_fingerprint(CLI::App& app, Common& c) {
  auto* sub = app.add_subcommand("fingerprint", "estimate a fingerprint from the reference entries of a manifest");
  static std::string manifest;
  static double eps = 1.0, wiener = 0.0;
  static bool zero_mean = false, keep_saturated = false;
  sub->add_option("--manifest", manifest, "dataset manifest")->required();
  sub->add_option("--eps", eps, "denominator guard");
  sub->add_flag("--zero-mean", zero_mean, "subtract row and column means");
  sub->add_option("--wiener", wiener, "spectral Wiener attenuation strength (0 = off)");
  sub->add_flag("--keep-saturated", keep_saturated, "let saturated pixels contribute");
  add_denoise_opts(sub, c);
  add_common(sub, c);
  return {[&] {
            validate_common(c);
            if (!(eps > 0.0) || !std::isfinite(eps)) invalid("--eps must be > 0");
            if (!(wiener >= 0.0) || !std::isfinite(wiener)) invalid("--wiener must be >= 0");
          },
          [&] {
            pk_manifest* m = nullptr;
            check(pk_manifest_load(manifest.c_str(), &m));
            auto mh = own(m);
            pk_estimate_options o;
            pk_estimate_options_default(&o);
            o.denoise = denoise_of(c);
            o.eps = eps;
            o.skip_saturated = keep_saturated ? 0 : 1;
            o.threads = c.threads;
            pk_fingerprint* fp = nullptr;
            check(pk_fingerprint_from_manifest(mh.get(), &o, &fp));
            auto fh = own(fp);
            if (zero_mean) check(pk_fingerprint_zero_mean(fh.get()));
            if (wiener > 0.0) check(pk_fingerprint_wiener(fh.get(), wiener));
            check(pk_fingerprint_save(fh.get(), c.out.c_str()));
          }};
}

Command cmd_verify(CLI::App& app, Common& c) {
  auto* sub = app.add_subcommand("verify", "PCE of every test entry against a fingerprint");
  static std::string manifest, fingerprint;
  sub->add_option("--manifest", manifest, "dataset manifest (test entries)")->required();
  sub->add_option("--fingerprint", fingerprint, "fingerprint .fpt")->required();
  add_verify_opts(sub, c);
  add_denoise_opts(sub, c);
  add_common(sub, c);
  return {[&] { validate_common(c); },
          [&] {
            auto fp = load_fp(fingerprint);
            pk_manifest* m = nullptr;
            check(pk_manifest_load(manifest.c_str(), &m));
            auto mh = own(m);
            std::vector<std::size_t> tests;
            for (std::size_t i = 0; i < pk_manifest_size(mh.get()); ++i) {
              pk_role role;
              check(pk_manifest_entry(mh.get(), i, nullptr, &role, nullptr, nullptr));
              if (role == PK_ROLE_TEST) tests.push_back(i);
            }
            if (tests.empty()) throw Failure{kExitRuntime, "empty_input", "manifest has no test entries"};
            std::vector<pk_pce_result> results(tests.size());
            std::vector<pk_decision> decisions(tests.size());
            const pk_denoise_config d = denoise_of(c);
            const pk_verify_config v = verify_of(c);
            parallel_for(tests.size(), c.threads, [&](std::size_t k) {
              const char* path = nullptr;
              check(pk_manifest_entry(mh.get(), tests[k], &path, nullptr, nullptr, nullptr));
              auto img = load_img(path);
              check(pk_verify_image(fp.get(), img.get(), &d, &v, &results[k], &decisions[k]));
            });
            const std::string id = stem_of(fingerprint);
            std::string csv = "test_path,fingerprint_id,pce,peak_s1,peak_s2,rho_max,decision\n";
            std::size_t counts[2][2] = {{0, 0}, {0, 0}};  // [label][decision]
            for (std::size_t k = 0; k < tests.size(); ++k) {
              const char* src = nullptr;
              pk_label label;
              check(pk_manifest_entry_source(mh.get(), tests[k], &src));
              check(pk_manifest_entry(mh.get(), tests[k], nullptr, nullptr, &label, nullptr));
              const auto& r = results[k];
              csv += std::string(src) + "," + id + "," + real(r.pce) + "," + std::to_string(r.peak_s1) + "," +
                     std::to_string(r.peak_s2) + "," + real(r.rho_max) + "," + (decisions[k] == PK_H1 ? "H1" : "H0") +
                     "\n";
              ++counts[label][decisions[k]];
            }
            ordered_json rep;
            rep["config"] = base_config("verify", c);
            rep["config"]["manifest"] = manifest;
            rep["config"]["fingerprint"] = fingerprint;
            rep["tests"] = tests.size();
            rep["genuine"] = {{"h1", counts[PK_LABEL_GENUINE][PK_H1]}, {"h0", counts[PK_LABEL_GENUINE][PK_H0]}};
            rep["impostor"] = {{"h1", counts[PK_LABEL_IMPOSTOR][PK_H1]}, {"h0", counts[PK_LABEL_IMPOSTOR][PK_H0]}};
            write_atomic(c.out, csv);
            write_atomic(c.out + ".json", dump(rep));
          }};
}

Command cmd_autocorr(CLI::App& app, Common& c) {
  auto* sub = app.add_subcommand("autocorr", "fingerprint autocorrelation surface plus SVG of the centered window");
  static std::string fingerprint;
  static std::size_t window = 551;
  sub->add_option("--fingerprint", fingerprint, "fingerprint .fpt")->required();
  auto* wopt = sub->add_option("--window", window, "centered window edge (odd)");
  add_common(sub, c);
  return {[&, wopt] {
            (void)wopt;
            check_window(window);
          },
          [&, wopt] {
            auto fp = load_fp(fingerprint);
            pk_plane* plane = nullptr;
            check(pk_fingerprint_plane(fp.get(), &plane));
            auto ph = own(plane);
            pk_plane* surface = nullptr;
            check(pk_autocorr(ph.get(), &surface));
            auto sh = own(surface);
            std::size_t h = 0, w = 0;
            check(pk_plane_dims(sh.get(), &h, &w));
            const std::size_t win = resolve_window(window, wopt->count() > 0, h, w);
            char* svg = nullptr;
            check(pk_surface_svg(sh.get(), win, &svg));
            const std::string svg_text = take(svg);
            ordered_json rep;
            rep["config"] = base_config("autocorr", c);
            rep["config"]["fingerprint"] = fingerprint;
            rep["config"]["window"] = win;
            rep["surface"] = {{"height", h}, {"width", w}, {"origin", "index (0,0) holds the zero shift"}};
            const fs::path dir = output_dir(c.out);
            check(pk_plane_save(sh.get(), (dir / "autocorr.fpt").c_str()));
            write_atomic(dir / "autocorr.svg", svg_text);
            write_atomic(dir / "autocorr.json", dump(rep));
          }};
}

Command cmd_lattice(CLI::App& app, Common& c) {
  auto* sub = app.add_subcommand("lattice", "detect a periodic lattice in an autocorrelation surface");
  static std::string surface;
  static std::size_t window = 551;
  static double min_peak = 0.02;
  sub->add_option("surface", surface, "autocorrelation surface .fpt")->required();
  auto* wopt = sub->add_option("--window", window, "centered window edge (odd)");
  sub->add_option("--min-peak", min_peak, "candidate threshold on |rho|");
  add_common(sub, c);
  return {[&] {
            check_window(window);
            if (!(min_peak > 0.0 && min_peak < 1.0)) invalid("--min-peak must be in (0, 1)");
          },
          [&, wopt] {
            pk_plane* s = nullptr;
            check(pk_plane_load(surface.c_str(), &s));
            auto sh = own(s);
            std::size_t h = 0, w = 0;
            check(pk_plane_dims(sh.get(), &h, &w));
            const std::size_t win = resolve_window(window, wopt->count() > 0, h, w);
            pk_lattice* l = nullptr;
            check(pk_detect_lattice(sh.get(), win, min_peak, &l));
            auto lh = own(l);
            char* js = nullptr;
            check(pk_lattice_json(lh.get(), &js));
            ordered_json rep;
            rep["config"] = {{"command", "lattice"}, {"version", pk_version()}, {"surface", surface},
                             {"window", win}, {"min_peak", json_real(min_peak)}};
            rep["lattice"] = ordered_json::parse(take(js));
            write_atomic(c.out, dump(rep));
          }};
}

Command cmd_collide(CLI::App& app, Common& c) {
  auto* sub = app.add_subcommand("collide", "all-pairs collision screen over fingerprints");
  static std::vector<std::string> fingerprints, groups;
  static std::size_t window = 551;
  static double min_peak = 0.02;
  sub->add_option("--fingerprint", fingerprints, "fingerprint .fpt (repeat)")->required();
  sub->add_option("--group", groups, "group tag per fingerprint (repeat, same order)");
  sub->add_option("--window", window, "lattice window edge (odd)");
  sub->add_option("--min-peak", min_peak, "lattice candidate threshold");
  add_verify_opts(sub, c);
  add_common(sub, c);
  return {[&] {
            validate_common(c);
            check_window(window);
            if (!(min_peak > 0.0 && min_peak < 1.0)) invalid("--min-peak must be in (0, 1)");
            if (fingerprints.size() < 2) invalid("collide needs at least two --fingerprint");
            if (!groups.empty() && groups.size() != fingerprints.size())
              invalid("--group must be given once per --fingerprint");
          },
          [&] {
            std::vector<Owned<pk_fingerprint>> owned;
            std::vector<const pk_fingerprint*> fps;
            std::vector<std::string> ids, gs;
            for (std::size_t i = 0; i < fingerprints.size(); ++i) {
              owned.push_back(load_fp(fingerprints[i]));
              fps.push_back(owned.back().get());
              ids.push_back(stem_of(fingerprints[i]));
              gs.push_back(groups.empty() ? ids.back() : groups[i]);
            }
            std::vector<const char*> id_ptrs, group_ptrs;
            for (std::size_t i = 0; i < ids.size(); ++i) {
              id_ptrs.push_back(ids[i].c_str());
              group_ptrs.push_back(gs[i].c_str());
            }
            pk_screen_config sc;
            pk_screen_config_default(&sc);
            sc.verify = verify_of(c);
            sc.window = window;
            sc.min_peak = min_peak;
            sc.threads = c.threads;
            pk_collision_matrix* m = nullptr;
            check(pk_cross_model_screen(fps.data(), id_ptrs.data(), group_ptrs.data(), fps.size(), &sc, &m));
            auto mh = own(m);
            char* js = nullptr;
            check(pk_collision_matrix_json(mh.get(), &js));
            char* csv = nullptr;
            check(pk_collision_scatter_csv(mh.get(), &csv));
            ordered_json rep;
            rep["config"] = base_config("collide", c);
            rep["config"]["fingerprints"] = fingerprints;
            rep["config"]["window"] = window;
            rep["config"]["min_peak"] = json_real(min_peak);
            rep["matrix"] = ordered_json::parse(take(js));
            const std::string csv_text = take(csv);
            const fs::path dir = output_dir(c.out);
            write_atomic(dir / "scatter.csv", csv_text);
            write_atomic(dir / "collisions.json", dump(rep));
          }};
}

Command cmd_hdr_map(CLI::App& app, Common& c) {
  auto* sub = app.add_subcommand("hdr-map", "block-wise shift map between a test image and a fingerprint");
  static std::string fingerprint, image;
  static std::size_t block = 512, radius = 20, stride = 0;
  sub->add_option("image", image, "test image")->required();
  sub->add_option("--fingerprint", fingerprint, "fingerprint .fpt")->required();
  sub->add_option("--block", block, "block edge in pixels");
  sub->add_option("--search-radius", radius, "max |shift| per axis");
  sub->add_option("--stride", stride, "block stride (0 = block)");
  add_denoise_opts(sub, c);
  add_common(sub, c);
  return {[&] {
            validate_common(c);
            if (block == 0) invalid("--block must be > 0");
            if (radius > block / 4) invalid("--search-radius must be <= block / 4");
          },
          [&] {
            auto fp = load_fp(fingerprint);
            auto img = load_img(image);
            Pair p = residual_and_term(fp.get(), img.get(), c);
            pk_shift_map* m = nullptr;
            check(pk_block_shift_map(p.w.get(), p.term.get(), block, radius, stride, &m));
            auto mh = own(m);
            char* js = nullptr;
            check(pk_shift_map_json(mh.get(), &js));
            char* svg = nullptr;
            check(pk_shift_map_svg(mh.get(), &svg));
            ordered_json rep;
            rep["config"] = base_config("hdr-map", c);
            rep["config"]["fingerprint"] = fingerprint;
            rep["config"]["image"] = image;
            rep["config"]["block"] = block;
            rep["config"]["search_radius"] = radius;
            rep["config"]["stride"] = stride == 0 ? block : stride;
            rep["shift_map"] = ordered_json::parse(take(js));
            const std::string svg_text = take(svg);
            const fs::path dir = output_dir(c.out);
            write_atomic(dir / "shift_map.svg", svg_text);
            write_atomic(dir / "shift_map.json", dump(rep));
          }};
}

Command cmd_adapt(CLI::App& app, Common& c) {
  auto* sub = app.add_subcommand("adapt", "resample a fingerprint block-wise by a shift map");
  static std::string fingerprint, map;
  sub->add_option("--fingerprint", fingerprint, "fingerprint .fpt")->required();
  sub->add_option("--map", map, "shift map JSON from hdr-map")->required();
  add_common(sub, c);
  return {[] {},
          [&] {
            auto fp = load_fp(fingerprint);
            pk_shift_map* m = nullptr;
            check(pk_shift_map_from_json(read_text(map).c_str(), &m));
            auto mh = own(m);
            pk_fingerprint* out = nullptr;
            check(pk_adapt_fingerprint(fp.get(), mh.get(), &out));
            auto oh = own(out);
            check(pk_fingerprint_save(oh.get(), c.out.c_str()));
          }};
}

Command cmd_bokeh_map(CLI::App& app, Common& c) {
  auto* sub = app.add_subcommand("bokeh-map", "block-wise zero-shift correlation map");
  static std::string fingerprint, image;
  static std::size_t block = 21;
  sub->add_option("image", image, "test image")->required();
  sub->add_option("--fingerprint", fingerprint, "fingerprint .fpt")->required();
  sub->add_option("--block", block, "block edge in pixels");
  add_denoise_opts(sub, c);
  add_common(sub, c);
  return {[&] {
            validate_common(c);
            if (block == 0) invalid("--block must be > 0");
          },
          [&] {
            auto fp = load_fp(fingerprint);
            auto img = load_img(image);
            Pair p = residual_and_term(fp.get(), img.get(), c);
            pk_block_map* m = nullptr;
            check(pk_block_corr_map(p.w.get(), p.term.get(), block, &m));
            auto mh = own(m);
            char* js = nullptr;
            check(pk_block_map_json(mh.get(), &js));
            char* svg = nullptr;
            check(pk_block_map_svg(mh.get(), &svg));
            ordered_json rep;
            rep["config"] = base_config("bokeh-map", c);
            rep["config"]["fingerprint"] = fingerprint;
            rep["config"]["image"] = image;
            rep["config"]["block"] = block;
            rep["block_map"] = ordered_json::parse(take(js));
            const std::string svg_text = take(svg);
            const fs::path dir = output_dir(c.out);
            write_atomic(dir / "block_map.svg", svg_text);
            write_atomic(dir / "block_map.json", dump(rep));
          }};
}

Command cmd_bokeh_mask(CLI::App& app, Common& c) {
  auto* sub = app.add_subcommand("bokeh-mask", "threshold a block map into a bokeh mask");
  static std::string map;
  static double threshold = 0.0;
  static bool automatic = false;
  sub->add_option("map", map, "block map JSON from bokeh-map")->required();
  auto* t = sub->add_option("--threshold", threshold, "fixed threshold on block rho");
  auto* a = sub->add_flag("--auto", automatic, "Otsu threshold");
  t->excludes(a);
  a->excludes(t);
  add_common(sub, c);
  return {[&, t] {
            if (t->count() == 0 && !automatic) invalid("give --threshold or --auto");
            if (t->count() > 0 && !std::isfinite(threshold)) invalid("--threshold must be finite");
          },
          [&, t] {
            pk_block_map* m = nullptr;
            check(pk_block_map_from_json(read_text(map).c_str(), &m));
            auto mh = own(m);
            pk_bokeh_mask* mask = nullptr;
            check(pk_make_bokeh_mask(mh.get(), t->count() > 0 ? &threshold : nullptr, &mask));
            auto kh = own(mask);
            char* js = nullptr;
            check(pk_bokeh_mask_json(kh.get(), &js));
            ordered_json rep;
            rep["config"] = {{"command", "bokeh-mask"}, {"version", pk_version()}, {"map", map},
                             {"threshold", t->count() > 0 ? ordered_json(json_real(threshold)) : ordered_json("otsu")}};
            rep["bokeh_mask"] = ordered_json::parse(take(js));
            write_atomic(c.out, dump(rep));
          }};
}

Command cmd_masked_verify(CLI::App& app, Common& c) {
  auto* sub = app.add_subcommand("masked-verify", "PCE with bokeh-masked samples excluded");
  static std::string fingerprint, image, mask;
  sub->add_option("image", image, "test image")->required();
  sub->add_option("--fingerprint", fingerprint, "fingerprint .fpt")->required();
  sub->add_option("--mask", mask, "bokeh mask JSON")->required();
  add_verify_opts(sub, c);
  add_denoise_opts(sub, c);
  add_common(sub, c);
  return {[&] { validate_common(c); },
          [&] {
            auto fp = load_fp(fingerprint);
            auto img = load_img(image);
            pk_bokeh_mask* m = nullptr;
            check(pk_bokeh_mask_from_json(read_text(mask).c_str(), &m));
            auto mh = own(m);
            Pair p = residual_and_term(fp.get(), img.get(), c);
            pk_pce_result plain, masked;
            check(pk_pce(p.w.get(), p.term.get(), &plain));
            check(pk_masked_pce(p.w.get(), p.term.get(), mh.get(), &masked));
            const pk_verify_config v = verify_of(c);
            pk_decision dp, dm;
            check(pk_verify(&plain, &v, &dp));
            check(pk_verify(&masked, &v, &dm));
            ordered_json rep;
            rep["config"] = base_config("masked-verify", c);
            rep["config"]["fingerprint"] = fingerprint;
            rep["config"]["image"] = image;
            rep["config"]["mask"] = mask;
            rep["plain"] = pce_json(plain);
            rep["plain"]["decision"] = dp == PK_H1 ? "H1" : "H0";
            rep["masked"] = pce_json(masked);
            rep["masked"]["decision"] = dm == PK_H1 ? "H1" : "H0";
            write_atomic(c.out, dump(rep));
          }};
}

Command cmd_mfp_scan(CLI::App& app, Common& c) {
  auto* sub = app.add_subcommand("mfp-scan", "scan JPEG files for MHDR/LHDR/MFP3 and digital zoom");
  static std::vector<std::string> files;
  sub->add_option("files", files, "JPEG files")->required();
  add_common(sub, c);
  return {[] {},
          [&] {
            std::string csv = "path,mhdr,lhdr,mfp3,is_mfp,zoom_num,zoom_den\n";
            std::vector<pk_mfp_tags> tags(files.size());
            parallel_for(files.size(), c.threads, [&](std::size_t i) {
              const pk_status s = pk_detect_mfp_file(files[i].c_str(), &tags[i]);
              if (s != PK_OK) throw Failure{kExitRuntime, pk_status_name(s), files[i] + ": " + pk_last_error()};
            });
            for (std::size_t i = 0; i < files.size(); ++i) {
              const auto& t = tags[i];
              csv += files[i] + "," + std::to_string(t.mhdr) + "," + std::to_string(t.lhdr) + "," +
                     std::to_string(t.mfp3) + "," + std::to_string(t.is_mfp) + "," +
                     (t.has_zoom ? std::to_string(t.zoom_num) : "") + "," +
                     (t.has_zoom ? std::to_string(t.zoom_den) : "") + "\n";
            }
            write_atomic(c.out, csv);
          }};
}

Command cmd_synth_gen(CLI::App& app, Common& c) {
  auto* sub = app.add_subcommand("synth-gen", "generate a synthetic camera data set");
  static std::string spec_path;
  static std::size_t references = 20, tests = 10, impostors = 10;
  static std::uint64_t seed = 0;
  sub->add_option("spec", spec_path, "synth spec (key = value)")->required();
  sub->add_option("--references", references, "flat reference captures");
  sub->add_option("--tests", tests, "genuine textured test captures");
  sub->add_option("--impostors", impostors, "textured captures from other sensors");
  auto* sopt = sub->add_option("--seed", seed, "overrides the spec seed");
  add_common(sub, c);
  return {[&] {
            if (references == 0) invalid("--references must be >= 1");
          },
          [&, sopt] {
            pk_synth* s = nullptr;
            check(pk_synth_parse(read_text(spec_path).c_str(), &s));
            auto sh = own(s);
            if (sopt->count() > 0) {
              c.seed = seed;
              check(pk_synth_set_seed(sh.get(), seed));
            }
            char* text = nullptr;
            check(pk_synth_format(sh.get(), &text));
            const std::string resolved = take(text);
            pk_plane* k = nullptr;
            check(pk_synth_gen_prnu(sh.get(), &k));
            auto kh = own(k);

            struct Job {
              std::string name;
              pk_role role;
              pk_label label;
              std::size_t shot;
              std::uint64_t sensor_offset;  // 0 = this sensor
            };
            std::vector<Job> jobs;
            auto name = [](const char* prefix, std::size_t i) {
              char buf[32];
              std::snprintf(buf, sizeof buf, "%s_%03zu.pgm", prefix, i);
              return std::string(buf);
            };
            for (std::size_t i = 0; i < references; ++i)
              jobs.push_back({name("ref", i), PK_ROLE_REFERENCE, PK_LABEL_GENUINE, i, 0});
            for (std::size_t i = 0; i < tests; ++i)
              jobs.push_back({name("test", i), PK_ROLE_TEST, PK_LABEL_GENUINE, 10000 + i, 0});
            for (std::size_t i = 0; i < impostors; ++i)
              jobs.push_back({name("imp", i), PK_ROLE_TEST, PK_LABEL_IMPOSTOR, 10000 + i, 1 + i});

            const fs::path dir = output_dir(c.out);
            pk_plane* pattern_out = nullptr;
            parallel_for(jobs.size(), c.threads, [&](std::size_t j) {
              const Job& job = jobs[j];
              pk_synth* local = nullptr;
              check(pk_synth_parse(resolved.c_str(), &local));
              auto lh = own(local);
              Owned<pk_plane> kk{nullptr, pk_plane_free};
              const pk_plane* sensor = kh.get();
              std::uint64_t base_seed = 0;
              check(pk_synth_seed(lh.get(), &base_seed));
              if (job.role == PK_ROLE_TEST) {
                const std::uint64_t scene_seed = base_seed * 7919 + job.shot;
                check(pk_synth_set_scene(lh.get(), PK_SCENE_TEXTURE, 128.0, scene_seed));
              }
              if (job.sensor_offset) {
                check(pk_synth_set_seed(lh.get(), base_seed + 1000003ull * job.sensor_offset));
                pk_plane* other = nullptr;
                check(pk_synth_gen_prnu(lh.get(), &other));
                kk = own(other);
                sensor = kk.get();
              }
              pk_image* img = nullptr;
              pk_plane* pat = nullptr;
              check(pk_synth_capture(lh.get(), sensor, job.shot, &img, j == 0 ? &pat : nullptr));
              auto ih = own(img);
              if (j == 0) pattern_out = pat;
              check(pk_image_save(ih.get(), (dir / job.name).c_str()));
            });
            auto pattern_h = own(pattern_out);

            pk_manifest* m = nullptr;
            check(pk_manifest_new(&m));
            auto mh = own(m);
            for (const auto& job : jobs) check(pk_manifest_add(mh.get(), job.name.c_str(), job.role, job.label, ""));
            check(pk_plane_save(kh.get(), (dir / "truth_k.fpt").c_str()));
            if (pattern_h) check(pk_plane_save(pattern_h.get(), (dir / "truth_pattern.fpt").c_str()));
            write_atomic(dir / "spec.txt", resolved);
            check(pk_manifest_save(mh.get(), (dir / "manifest.tsv").c_str()));
          }};
}

Command cmd_roc(CLI::App& app, Common& c) {
  auto* sub = app.add_subcommand("roc", "ROC curve and rates from a score CSV (score,label,group)");
  static std::string scores;
  sub->add_option("scores", scores, "score CSV")->required();
  sub->add_option("--tau", c.tau, "threshold for the reported rates");
  add_common(sub, c);
  return {[&] {
            if (std::isnan(c.tau)) invalid("--tau must not be NaN");
          },
          [&] {
            pk_roc_summary sum;
            char *csv = nullptr, *svg = nullptr, *scatter = nullptr;
            check(pk_roc_from_csv(read_text(scores).c_str(), c.tau, &sum, &csv, &svg, &scatter));
            const std::string csv_text = take(csv), svg_text = take(svg), scatter_text = take(scatter);
            ordered_json rep;
            rep["config"] = {{"command", "roc"}, {"version", pk_version()}, {"scores", scores},
                             {"tau", json_real(c.tau)}, {"comparison", "score > tau"}};
            rep["auc"] = json_real(sum.auc);
            rep["tpr"] = json_real(sum.tpr);
            rep["fpr"] = json_real(sum.fpr);
            const fs::path dir = output_dir(c.out);
            write_atomic(dir / "roc.csv", csv_text);
            write_atomic(dir / "roc.svg", svg_text);
            write_atomic(dir / "scatter.svg", scatter_text);
            write_atomic(dir / "roc.json", dump(rep));
          }};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prnukit: sensor-fingerprint forensics toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pk_version()));
  Common common;
  std::vector<std::pair<CLI::App*, Command>> commands;
  using Factory = Command (*)(CLI::App&, Common&);
  const Factory factories[] = {cmd_fingerprint, cmd_verify,    cmd_autocorr,      cmd_lattice,   cmd_collide,
                               cmd_hdr_map,     cmd_adapt,     cmd_bokeh_map,     cmd_bokeh_mask, cmd_masked_verify,
                               cmd_mfp_scan,    cmd_synth_gen, cmd_roc};
  for (Factory f : factories) {
    Command cmd = f(app, common);
    commands.emplace_back(app.get_subcommands({}).back(), std::move(cmd));
  }
  for (auto* sub : app.get_subcommands({})) {
    auto* seed = sub->get_option_no_throw("--seed");
    if (!seed) sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { common.seed = s; }, "random seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ERR:invalid_argument: " << e.what() << "\n";
    return kExitValidation;
  }

  for (auto& [sub, cmd] : commands) {
    if (!sub->parsed()) continue;
    try {
      cmd.validate();
      cmd.run();
      return 0;
    } catch (const Failure& f) {
      std::cerr << "ERR:" << f.code << ": " << f.message << "\n";
      return f.exit_code;
    } catch (const std::exception& e) {
      std::cerr << "ERR:internal: " << e.what() << "\n";
      return kExitRuntime;
    }
  }
  return kExitValidation;
}
