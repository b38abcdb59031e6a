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

#include "prnukit/prnukit.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "prnukit/correlate.hpp"
#include "prnukit/error.hpp"
#include "prnukit/fingerprint.hpp"
#include "prnukit/format.hpp"
#include "prnukit/jpeg_meta.hpp"
#include "prnukit/lattice.hpp"
#include "prnukit/local_analysis.hpp"
#include "prnukit/roc.hpp"
#include "prnukit/synthcam.hpp"
#include "prnukit/tensor_io.hpp"
#include "report.hpp"

using namespace prnukit;

struct pk_image { Image v; };
struct pk_plane { Plane v; };
struct pk_fingerprint { Fingerprint v; };
struct pk_lattice { LatticeReport v; };
struct pk_collision_matrix { CollisionMatrix v; };
struct pk_shift_map { ShiftMap v; };
struct pk_block_map { BlockCorrMap v; };
struct pk_bokeh_mask { BokehMask v; };
struct pk_manifest {
  DatasetManifest v;
  std::filesystem::path origin;
  std::vector<std::string> resolved, tags;
};
struct pk_synth { SynthSpec v; };

namespace {

thread_local std::string g_last_error;

pk_status fail(pk_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <typename F>
pk_status guard(F&& f) noexcept {
  try {
    f();
    g_last_error.clear();
    return PK_OK;
  } catch (const Error& e) {
    return fail(static_cast<pk_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PK_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PK_ERR_INTERNAL, e.what());
  }
}

void need(const void* p, const char* what) {
  if (!p) throw Error(Errc::invalid_argument, std::string(what) + " is NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

std::string dump(const report::json& j) { return j.dump(2) + "\n"; }

DenoiseConfig denoise_of(const pk_denoise_config* c) {
  DenoiseConfig d;
  if (c) {
    d.levels = c->levels;
    d.base_noise_sigma = c->base_noise_sigma;
  }
  d.validate();
  return d;
}

VerifyConfig verify_of(const pk_verify_config* c) {
  VerifyConfig v;
  if (c) {
    v.tau = c->tau;
    v.search = c->search == PK_SEARCH_ZERO_ONLY ? SearchMode::zero_only : SearchMode::full;
  }
  v.validate();
  return v;
}

void export_pce(const PceResult& r, pk_pce_result* out) {
  out->pce = r.pce;
  out->peak_s1 = r.peak.s1;
  out->peak_s2 = r.peak.s2;
  out->rho_max = r.rho_max;
  out->excluded = r.excluded;
  out->height = r.height;
  out->width = r.width;
  out->pce_at_origin = r.pce_at_origin;
  out->rho_origin = r.rho_origin;
}

PceResult import_pce(const pk_pce_result* r) {
  PceResult p;
  p.pce = r->pce;
  p.peak = {r->peak_s1, r->peak_s2};
  p.rho_max = r->rho_max;
  p.excluded = r->excluded;
  p.height = r->height;
  p.width = r->width;
  p.pce_at_origin = r->pce_at_origin;
  p.rho_origin = r->rho_origin;
  return p;
}

template <typename T, typename V>
T* wrap(V&& v) {
  return new T{std::forward<V>(v)};
}

report::json parse_json(const char* text) {
  need(text, "json");
  try {
    return report::json::parse(text);
  } catch (const report::json::exception& e) {
    throw Error(Errc::malformed_header, std::string("json: ") + e.what());
  }
}

}  // namespace

extern "C" {

const char* pk_last_error(void) { return g_last_error.c_str(); }

const char* pk_status_name(pk_status s) {
  if (s == PK_OK) return "ok";
  if (s == PK_ERR_INTERNAL) return "internal";
  return errc_name(static_cast<Errc>(s));
}

const char* pk_version(void) { return "0.1.0"; }

void pk_string_free(char* s) { std::free(s); }

void pk_denoise_config_default(pk_denoise_config* c) {
  if (!c) return;
  const DenoiseConfig d;
  c->levels = d.levels;
  c->base_noise_sigma = d.base_noise_sigma;
}

void pk_verify_config_default(pk_verify_config* c) {
  if (!c) return;
  c->tau = VerifyConfig{}.tau;
  c->search = PK_SEARCH_FULL;
}

void pk_estimate_options_default(pk_estimate_options* o) {
  if (!o) return;
  pk_denoise_config_default(&o->denoise);
  o->eps = kDefaultEps;
  o->skip_saturated = 1;
  o->threads = 1;
}

void pk_screen_config_default(pk_screen_config* c) {
  if (!c) return;
  pk_verify_config_default(&c->verify);
  c->window = kDefaultWindow;
  c->min_peak = kDefaultMinPeak;
  c->threads = 1;
}

// ---- images and planes

pk_status pk_image_load(const char* path, pk_image** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = wrap<pk_image>(load_image(path));
  });
}

pk_status pk_image_save(const pk_image* img, const char* path) {
  return guard([&] {
    need(img, "image");
    need(path, "path");
    save_image(img->v, path);
  });
}

void pk_image_free(pk_image* img) { delete img; }

pk_status pk_image_dims(const pk_image* img, size_t* height, size_t* width, int* channels, int* depth) {
  return guard([&] {
    need(img, "image");
    if (height) *height = img->v.height;
    if (width) *width = img->v.width;
    if (channels) *channels = static_cast<int>(img->v.channels);
    if (depth) *depth = img->v.depth;
  });
}

pk_status pk_plane_load(const char* path, pk_plane** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = wrap<pk_plane>(load_plane(path));
  });
}

pk_status pk_plane_save(const pk_plane* p, const char* path) {
  return guard([&] {
    need(p, "plane");
    need(path, "path");
    save_plane(p->v, path);
  });
}

void pk_plane_free(pk_plane* p) { delete p; }

pk_status pk_plane_dims(const pk_plane* p, size_t* height, size_t* width) {
  return guard([&] {
    need(p, "plane");
    if (height) *height = p->v.height;
    if (width) *width = p->v.width;
  });
}

const double* pk_plane_data(const pk_plane* p) { return p ? p->v.values.data() : nullptr; }

pk_status pk_plane_from_data(const double* data, size_t height, size_t width, pk_plane** out) {
  return guard([&] {
    need(data, "data");
    need(out, "out");
    if (height == 0 || width == 0) throw Error(Errc::invalid_argument, "plane dims must be positive");
    Plane p(height, width);
    std::memcpy(p.values.data(), data, height * width * sizeof(double));
    validate_finite(p, "plane data");
    *out = wrap<pk_plane>(std::move(p));
  });
}

pk_status pk_residual(const pk_image* img, const pk_denoise_config* cfg, pk_plane** out) {
  return guard([&] {
    need(img, "image");
    need(out, "out");
    *out = wrap<pk_plane>(residual(img->v, denoise_of(cfg)).plane);
  });
}

// ---- fingerprints

pk_status pk_fingerprint_from_manifest(const pk_manifest* m, const pk_estimate_options* opts,
                                       pk_fingerprint** out) {
  return guard([&] {
    need(m, "manifest");
    need(out, "out");
    EstimateOptions o;
    if (opts) {
      o.denoise = denoise_of(&opts->denoise);
      o.eps = opts->eps;
      o.skip_saturated = opts->skip_saturated != 0;
      o.threads = opts->threads;
    }
    std::vector<std::size_t> refs;
    for (std::size_t i = 0; i < m->v.entries.size(); ++i)
      if (m->v.entries[i].role == Role::reference) refs.push_back(i);
    if (refs.empty()) throw Error(Errc::empty_input, "manifest has no reference entries");
    Fingerprint fp = estimate_fingerprint(
        refs.size(), [&](std::size_t i) {
          Image img = load_image(m->resolved[refs[i]]);
          img.source_tag = m->v.entries[refs[i]].path;
          return img;
        },
        o);
    *out = wrap<pk_fingerprint>(std::move(fp));
  });
}

pk_status pk_fingerprint_load(const char* path, pk_fingerprint** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = wrap<pk_fingerprint>(load_fingerprint(path));
  });
}

pk_status pk_fingerprint_save(const pk_fingerprint* fp, const char* path) {
  return guard([&] {
    need(fp, "fingerprint");
    need(path, "path");
    save_fingerprint(fp->v, path);
  });
}

void pk_fingerprint_free(pk_fingerprint* fp) { delete fp; }

pk_status pk_fingerprint_plane(const pk_fingerprint* fp, pk_plane** out) {
  return guard([&] {
    need(fp, "fingerprint");
    need(out, "out");
    *out = wrap<pk_plane>(fp->v.plane);
  });
}

pk_status pk_fingerprint_zero_mean(pk_fingerprint* fp) {
  return guard([&] {
    need(fp, "fingerprint");
    fp->v = zero_mean(std::move(fp->v));
  });
}

pk_status pk_fingerprint_wiener(pk_fingerprint* fp, double strength) {
  return guard([&] {
    need(fp, "fingerprint");
    fp->v = wiener_fft(std::move(fp->v), strength);
  });
}

pk_status pk_fingerprint_header(const pk_fingerprint* fp, char** out) {
  return guard([&] {
    need(fp, "fingerprint");
    need(out, "out");
    put(out, fingerprint_header(fp->v));
  });
}

pk_status pk_fingerprint_term(const pk_fingerprint* fp, const pk_image* img, pk_plane** out) {
  return guard([&] {
    need(fp, "fingerprint");
    need(img, "image");
    need(out, "out");
    *out = wrap<pk_plane>(fingerprint_term(fp->v, img->v));
  });
}

// ---- correlation

pk_status pk_pce(const pk_plane* w, const pk_plane* term, pk_pce_result* out) {
  return guard([&] {
    need(w, "residual");
    need(term, "term");
    need(out, "out");
    export_pce(pce(w->v, term->v), out);
  });
}

pk_status pk_verify(const pk_pce_result* r, const pk_verify_config* cfg, pk_decision* out) {
  return guard([&] {
    need(r, "result");
    need(out, "out");
    *out = verify(import_pce(r), verify_of(cfg)) == Decision::h1 ? PK_H1 : PK_H0;
  });
}

pk_status pk_verify_image(const pk_fingerprint* fp, const pk_image* img, const pk_denoise_config* dcfg,
                          const pk_verify_config* vcfg, pk_pce_result* result, pk_decision* decision) {
  return guard([&] {
    need(fp, "fingerprint");
    need(img, "image");
    need(result, "result");
    const VerifyConfig v = verify_of(vcfg);
    const PceResult r = pce(residual(img->v, denoise_of(dcfg)), fingerprint_term(fp->v, img->v));
    export_pce(r, result);
    if (decision) *decision = verify(r, v) == Decision::h1 ? PK_H1 : PK_H0;
  });
}

pk_status pk_autocorr(const pk_plane* p, pk_plane** out) {
  return guard([&] {
    need(p, "plane");
    need(out, "out");
    *out = wrap<pk_plane>(autocorr(p->v).values);
  });
}

pk_status pk_surface_svg(const pk_plane* surface, size_t window, char** out) {
  return guard([&] {
    need(surface, "surface");
    need(out, "out");
    const Plane& s = surface->v;
    if (window == 0 || window % 2 == 0 || window > std::min(s.height, s.width))
      throw Error(Errc::invalid_argument, "window must be odd and fit the surface");
    const CorrSurface cs{s};
    const long half = static_cast<long>(window / 2);
    Plane win(window, window);
    double vmax = 0.0;
    for (long a = -half; a <= half; ++a)
      for (long b = -half; b <= half; ++b) {
        const double v = (a == 0 && b == 0) ? 0.0 : cs.at(a, b);  // origin is 1 and would flatten the ramp
        win(static_cast<std::size_t>(a + half), static_cast<std::size_t>(b + half)) = v;
        vmax = std::max(vmax, std::abs(v));
      }
    put(out, report::heatmap_svg(win, vmax));
  });
}

// ---- periodic artifacts

pk_status pk_detect_lattice(const pk_plane* surface, size_t window, double min_peak, pk_lattice** out) {
  return guard([&] {
    need(surface, "surface");
    need(out, "out");
    *out = wrap<pk_lattice>(detect_lattice(CorrSurface{surface->v}, window, min_peak));
  });
}

void pk_lattice_free(pk_lattice* l) { delete l; }

pk_status pk_lattice_basis(const pk_lattice* l, long* p1, long* p2, double* strength) {
  return guard([&] {
    need(l, "lattice");
    if (p1) *p1 = l->v.basis.s1;
    if (p2) *p2 = l->v.basis.s2;
    if (strength) *strength = l->v.strength;
  });
}

pk_status pk_lattice_json(const pk_lattice* l, char** out) {
  return guard([&] {
    need(l, "lattice");
    need(out, "out");
    put(out, dump(report::to_json(l->v)));
  });
}

pk_status pk_cross_model_screen(const pk_fingerprint* const* fps, const char* const* ids,
                                const char* const* groups, size_t count, const pk_screen_config* cfg,
                                pk_collision_matrix** out) {
  return guard([&] {
    need(fps, "fingerprints");
    need(out, "out");
    std::vector<Fingerprint> list;
    std::vector<std::string> id_list, group_list;
    for (size_t i = 0; i < count; ++i) {
      need(fps[i], "fingerprint");
      list.push_back(fps[i]->v);
      id_list.push_back(ids && ids[i] ? ids[i] : std::to_string(i));
      group_list.push_back(groups && groups[i] ? groups[i] : "");
    }
    ScreenConfig sc;
    if (cfg) {
      sc.verify = verify_of(&cfg->verify);
      sc.window = cfg->window;
      sc.min_peak = cfg->min_peak;
      sc.threads = cfg->threads;
    }
    *out = wrap<pk_collision_matrix>(cross_model_screen(list, id_list, group_list, sc));
  });
}

void pk_collision_matrix_free(pk_collision_matrix* m) { delete m; }

pk_status pk_collision_verdict(const pk_collision_matrix* m, size_t i, size_t j, pk_verdict* verdict,
                               pk_pce_result* result) {
  return guard([&] {
    need(m, "matrix");
    const CollisionReport& r = m->v.pair(i, j);
    if (verdict) *verdict = static_cast<pk_verdict>(r.verdict);
    if (result) export_pce(r.pce_ab, result);
  });
}

pk_status pk_collision_matrix_json(const pk_collision_matrix* m, char** out) {
  return guard([&] {
    need(m, "matrix");
    need(out, "out");
    put(out, dump(report::to_json(m->v)));
  });
}

pk_status pk_collision_scatter_csv(const pk_collision_matrix* m, char** out) {
  return guard([&] {
    need(m, "matrix");
    need(out, "out");
    put(out, report::scatter_csv(m->v));
  });
}

const char* pk_verdict_name(pk_verdict v) { return verdict_name(static_cast<Verdict>(v)); }

// ---- local analysis

pk_status pk_block_shift_map(const pk_plane* w, const pk_plane* term, size_t block, size_t search_radius,
                             size_t stride, pk_shift_map** out) {
  return guard([&] {
    need(w, "residual");
    need(term, "term");
    need(out, "out");
    *out = wrap<pk_shift_map>(block_shift_map(w->v, term->v, block, search_radius, stride));
  });
}

void pk_shift_map_free(pk_shift_map* m) { delete m; }

pk_status pk_shift_map_cell(const pk_shift_map* m, size_t r, size_t c, long* s1, long* s2,
                            double* confidence) {
  return guard([&] {
    need(m, "map");
    if (r >= m->v.rows || c >= m->v.cols) throw Error(Errc::invalid_argument, "cell index out of range");
    const ShiftCell& cell = m->v.at(r, c);
    if (s1) *s1 = cell.shift.s1;
    if (s2) *s2 = cell.shift.s2;
    if (confidence) *confidence = cell.confidence;
  });
}

pk_status pk_shift_map_grid(const pk_shift_map* m, size_t* rows, size_t* cols) {
  return guard([&] {
    need(m, "map");
    if (rows) *rows = m->v.rows;
    if (cols) *cols = m->v.cols;
  });
}

pk_status pk_shift_map_json(const pk_shift_map* m, char** out) {
  return guard([&] {
    need(m, "map");
    need(out, "out");
    put(out, dump(report::to_json(m->v)));
  });
}

pk_status pk_shift_map_from_json(const char* json, pk_shift_map** out) {
  return guard([&] {
    need(out, "out");
    auto j = parse_json(json);
    if (j.contains("shift_map")) j = j["shift_map"];
    *out = wrap<pk_shift_map>(report::shift_map_from_json(j));
  });
}

pk_status pk_shift_map_svg(const pk_shift_map* m, char** out) {
  return guard([&] {
    need(m, "map");
    need(out, "out");
    put(out, report::shift_map_svg(m->v));
  });
}

pk_status pk_adapt_fingerprint(const pk_fingerprint* fp, const pk_shift_map* m, pk_fingerprint** out) {
  return guard([&] {
    need(fp, "fingerprint");
    need(m, "map");
    need(out, "out");
    *out = wrap<pk_fingerprint>(adapt_fingerprint(fp->v, m->v));
  });
}

pk_status pk_block_corr_map(const pk_plane* w, const pk_plane* term, size_t block, pk_block_map** out) {
  return guard([&] {
    need(w, "residual");
    need(term, "term");
    need(out, "out");
    *out = wrap<pk_block_map>(block_corr_map(w->v, term->v, block));
  });
}

void pk_block_map_free(pk_block_map* m) { delete m; }

pk_status pk_block_map_json(const pk_block_map* m, char** out) {
  return guard([&] {
    need(m, "map");
    need(out, "out");
    put(out, dump(report::to_json(m->v)));
  });
}

pk_status pk_block_map_from_json(const char* json, pk_block_map** out) {
  return guard([&] {
    need(out, "out");
    auto j = parse_json(json);
    if (j.contains("block_map")) j = j["block_map"];
    *out = wrap<pk_block_map>(report::block_map_from_json(j));
  });
}

pk_status pk_block_map_svg(const pk_block_map* m, char** out) {
  return guard([&] {
    need(m, "map");
    need(out, "out");
    put(out, report::heatmap_svg(m->v.grid, 1.0, 8.0));
  });
}

pk_status pk_make_bokeh_mask(const pk_block_map* m, const double* threshold, pk_bokeh_mask** out) {
  return guard([&] {
    need(m, "map");
    need(out, "out");
    *out = wrap<pk_bokeh_mask>(bokeh_mask(m->v, threshold ? std::optional<double>(*threshold) : std::nullopt));
  });
}

void pk_bokeh_mask_free(pk_bokeh_mask* m) { delete m; }

pk_status pk_bokeh_mask_json(const pk_bokeh_mask* m, char** out) {
  return guard([&] {
    need(m, "mask");
    need(out, "out");
    put(out, dump(report::to_json(m->v)));
  });
}

pk_status pk_bokeh_mask_from_json(const char* json, pk_bokeh_mask** out) {
  return guard([&] {
    need(out, "out");
    auto j = parse_json(json);
    if (j.contains("bokeh_mask")) j = j["bokeh_mask"];
    *out = wrap<pk_bokeh_mask>(report::bokeh_mask_from_json(j));
  });
}

pk_status pk_bokeh_mask_info(const pk_bokeh_mask* m, double* threshold, size_t* masked_pixels,
                             int* full_frame_warning) {
  return guard([&] {
    need(m, "mask");
    if (threshold) *threshold = m->v.threshold_used;
    if (masked_pixels) *masked_pixels = m->v.masked_pixels();
    if (full_frame_warning) *full_frame_warning = m->v.full_frame_warning ? 1 : 0;
  });
}

pk_status pk_masked_pce(const pk_plane* w, const pk_plane* term, const pk_bokeh_mask* m, pk_pce_result* out) {
  return guard([&] {
    need(w, "residual");
    need(term, "term");
    need(m, "mask");
    need(out, "out");
    export_pce(masked_pce(w->v, term->v, m->v), out);
  });
}

// ---- JPEG metadata

namespace {

void export_tags(const MfpTags& t, pk_mfp_tags* out) {
  out->mhdr = t.mhdr;
  out->lhdr = t.lhdr;
  out->mfp3 = t.mfp3;
  out->is_mfp = t.is_mfp();
  out->has_zoom = t.zoom_ratio.has_value();
  out->zoom_num = t.zoom_ratio ? t.zoom_ratio->num : 0;
  out->zoom_den = t.zoom_ratio ? t.zoom_ratio->den : 0;
}

}  // namespace

pk_status pk_detect_mfp(const uint8_t* bytes, size_t size, pk_mfp_tags* out) {
  return guard([&] {
    need(out, "out");
    if (size > 0) need(bytes, "bytes");
    export_tags(detect_mfp({bytes, size}), out);
  });
}

pk_status pk_detect_mfp_file(const char* path, pk_mfp_tags* out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    const auto bytes = read_file(path);
    export_tags(detect_mfp(bytes), out);
  });
}

// ---- manifests

namespace {

void refresh(pk_manifest& m) {
  m.resolved.clear();
  m.tags.clear();
  for (const auto& e : m.v.entries) {
    m.resolved.push_back(m.origin.empty() ? e.path : resolve_entry(m.origin, e).string());
    m.tags.push_back(tags_string(e.tags));
  }
}

}  // namespace

pk_status pk_manifest_new(pk_manifest** out) {
  return guard([&] {
    need(out, "out");
    *out = new pk_manifest{};
  });
}

pk_status pk_manifest_load(const char* path, pk_manifest** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    auto* m = new pk_manifest{load_manifest(path), path, {}, {}};
    refresh(*m);
    *out = m;
  });
}

pk_status pk_manifest_save(const pk_manifest* m, const char* path) {
  return guard([&] {
    need(m, "manifest");
    need(path, "path");
    save_manifest(m->v, path);
  });
}

void pk_manifest_free(pk_manifest* m) { delete m; }

pk_status pk_manifest_add(pk_manifest* m, const char* path, pk_role role, pk_label label, const char* tags) {
  return guard([&] {
    need(m, "manifest");
    need(path, "path");
    std::string line = std::string(path) + "\t" + (role == PK_ROLE_TEST ? "test" : "reference") + "\t" +
                       (label == PK_LABEL_IMPOSTOR ? "impostor" : "genuine") + "\t" + (tags ? tags : "");
    // reuse the file grammar so tag vocabulary checks stay in one place
    const DatasetManifest one = parse_manifest(line + "\n");
    m->v.add(one.entries.front());
    refresh(*m);
  });
}

size_t pk_manifest_size(const pk_manifest* m) { return m ? m->v.entries.size() : 0; }

pk_status pk_manifest_entry(const pk_manifest* m, size_t i, const char** path, pk_role* role, pk_label* label,
                            const char** tags) {
  return guard([&] {
    need(m, "manifest");
    if (i >= m->v.entries.size()) throw Error(Errc::invalid_argument, "manifest index out of range");
    const auto& e = m->v.entries[i];
    if (path) *path = m->resolved[i].c_str();
    if (role) *role = e.role == Role::test ? PK_ROLE_TEST : PK_ROLE_REFERENCE;
    if (label) *label = e.label == Label::impostor ? PK_LABEL_IMPOSTOR : PK_LABEL_GENUINE;
    if (tags) *tags = m->tags[i].c_str();
  });
}

pk_status pk_manifest_entry_source(const pk_manifest* m, size_t i, const char** path) {
  return guard([&] {
    need(m, "manifest");
    need(path, "path");
    if (i >= m->v.entries.size()) throw Error(Errc::invalid_argument, "manifest index out of range");
    *path = m->v.entries[i].path.c_str();
  });
}

// ---- synthetic camera

pk_status pk_synth_parse(const char* text, pk_synth** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = wrap<pk_synth>(parse_synth_spec(text));
  });
}

void pk_synth_free(pk_synth* s) { delete s; }

pk_status pk_synth_format(const pk_synth* s, char** out) {
  return guard([&] {
    need(s, "spec");
    need(out, "out");
    put(out, format_synth_spec(s->v));
  });
}

pk_status pk_synth_set_seed(pk_synth* s, uint64_t seed) {
  return guard([&] {
    need(s, "spec");
    s->v.seed = seed;
  });
}

pk_status pk_synth_seed(const pk_synth* s, uint64_t* seed) {
  return guard([&] {
    need(s, "spec");
    need(seed, "seed");
    *seed = s->v.seed;
  });
}

pk_status pk_synth_set_pattern_enabled(pk_synth* s, int enabled) {
  return guard([&] {
    need(s, "spec");
    if (enabled && !s->v.pattern) s->v.pattern = PatternSpec{};
    if (!enabled) s->v.pattern.reset();
  });
}

pk_status pk_synth_set_scene(pk_synth* s, pk_scene_kind kind, double intensity, uint64_t scene_seed) {
  return guard([&] {
    need(s, "spec");
    Scene sc;
    switch (kind) {
      case PK_SCENE_FLAT: sc.kind = SceneKind::flat; break;
      case PK_SCENE_GRADIENT: sc.kind = SceneKind::gradient; break;
      case PK_SCENE_TEXTURE: sc.kind = SceneKind::texture; break;
      default: throw Error(Errc::vocabulary, "unknown scene kind");
    }
    sc.intensity = intensity;
    sc.seed = scene_seed;
    SynthSpec next = s->v;
    next.scene = sc;
    next.validate();
    s->v = next;
  });
}

pk_status pk_synth_dims(const pk_synth* s, size_t* height, size_t* width) {
  return guard([&] {
    need(s, "spec");
    if (height) *height = s->v.height;
    if (width) *width = s->v.width;
  });
}

pk_status pk_synth_gen_prnu(const pk_synth* s, pk_plane** out) {
  return guard([&] {
    need(s, "spec");
    need(out, "out");
    *out = wrap<pk_plane>(gen_prnu(s->v));
  });
}

pk_status pk_synth_capture(const pk_synth* s, const pk_plane* k, size_t shot, pk_image** img, pk_plane** pattern) {
  return guard([&] {
    need(s, "spec");
    need(k, "k");
    need(img, "image");
    auto [image, truth] = capture(s->v, k->v, shot);
    *img = wrap<pk_image>(std::move(image));
    if (pattern) *pattern = truth.pattern_plane ? wrap<pk_plane>(std::move(*truth.pattern_plane)) : nullptr;
  });
}

// ---- scores

pk_status pk_roc_from_csv(const char* csv, double tau, pk_roc_summary* summary, char** roc_csv, char** roc_svg_out,
                          char** scatter_svg_out) {
  return guard([&] {
    need(csv, "csv");
    const ScoreSet scores = parse_scores_csv(csv);
    const auto curve = roc(scores);
    const Rates r = rates_at(scores, tau);
    if (summary) {
      summary->auc = auc(curve);
      summary->tpr = r.tpr;
      summary->fpr = r.fpr;
    }
    put(roc_csv, format_roc_csv(curve));
    put(roc_svg_out, roc_svg(curve));
    put(scatter_svg_out, scatter_svg(scores, tau));
  });
}

pk_status pk_format_real(double v, char** out) {
  return guard([&] {
    need(out, "out");
    put(out, format_real(v));
  });
}

}  // extern "C"
