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

#ifndef PRNUKIT_PRNUKIT_H_
#define PRNUKIT_PRNUKIT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(PK_BUILDING_LIBRARY)
#define PK_API __attribute__((visibility("default")))
#else
#define PK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values are stable and match the ERR:<code>: prefix printed
 * by the command-line tool. */
typedef enum pk_status {
  PK_OK = 0,
  PK_ERR_IO = 1,
  PK_ERR_MALFORMED_HEADER = 2,
  PK_ERR_TRUNCATED = 3,
  PK_ERR_UNSUPPORTED_FORMAT = 4,
  PK_ERR_INVALID_ARGUMENT = 5,
  PK_ERR_DIMENSION_MISMATCH = 6,
  PK_ERR_DEGENERATE_INPUT = 7,
  PK_ERR_VOCABULARY = 8,
  PK_ERR_DUPLICATE = 9,
  PK_ERR_MISSING_SOI = 10,
  PK_ERR_SEGMENT_OVERRUN = 11,
  PK_ERR_RESERVED_MARKER = 12,
  PK_ERR_MALFORMED_SEGMENT = 13,
  PK_ERR_MALFORMED_EXIF = 14,
  PK_ERR_INSUFFICIENT_SUPPORT = 15,
  PK_ERR_EMPTY_INPUT = 16,
  PK_ERR_UNWRITABLE = 17,
  PK_ERR_INTERNAL = 99
} pk_status;

/* Message of the last failure on the calling thread; never NULL. */
PK_API const char* pk_last_error(void);
PK_API const char* pk_status_name(pk_status s);
PK_API const char* pk_version(void);

/* Strings returned through char** are owned by the caller. */
PK_API void pk_string_free(char* s);

typedef struct pk_image pk_image;
typedef struct pk_plane pk_plane;
typedef struct pk_fingerprint pk_fingerprint;
typedef struct pk_lattice pk_lattice;
typedef struct pk_collision_matrix pk_collision_matrix;
typedef struct pk_shift_map pk_shift_map;
typedef struct pk_block_map pk_block_map;
typedef struct pk_bokeh_mask pk_bokeh_mask;
typedef struct pk_manifest pk_manifest;
typedef struct pk_synth pk_synth;

/* ---- configs and results ------------------------------------------------ */

typedef struct pk_denoise_config {
  int levels;              /* 4 */
  double base_noise_sigma; /* 3.0 */
} pk_denoise_config;

typedef enum pk_search_mode { PK_SEARCH_FULL = 0, PK_SEARCH_ZERO_ONLY = 1 } pk_search_mode;

typedef struct pk_verify_config {
  double tau; /* 60 */
  pk_search_mode search;
} pk_verify_config;

typedef struct pk_estimate_options {
  pk_denoise_config denoise;
  double eps;         /* 1.0 */
  int skip_saturated; /* 1 */
  unsigned threads;   /* 1 */
} pk_estimate_options;

typedef struct pk_pce_result {
  double pce;
  long peak_s1, peak_s2;
  double rho_max;
  size_t excluded;
  size_t height, width;
  double pce_at_origin;
  double rho_origin;
} pk_pce_result;

typedef enum pk_decision { PK_H0 = 0, PK_H1 = 1 } pk_decision;

typedef struct pk_screen_config {
  pk_verify_config verify;
  size_t window;   /* 551 */
  double min_peak; /* 0.02 */
  unsigned threads;
} pk_screen_config;

typedef enum pk_verdict {
  PK_COLLISION_SUSPECTED = 0,
  PK_DISTINCT = 1,
  PK_INCONCLUSIVE = 2
} pk_verdict;

typedef struct pk_mfp_tags {
  int mhdr, lhdr, mfp3, is_mfp;
  int has_zoom;
  uint32_t zoom_num, zoom_den;
} pk_mfp_tags;

typedef struct pk_roc_summary {
  double auc;
  double tpr; /* at the requested tau */
  double fpr;
} pk_roc_summary;

PK_API void pk_denoise_config_default(pk_denoise_config* c);
PK_API void pk_verify_config_default(pk_verify_config* c);
PK_API void pk_estimate_options_default(pk_estimate_options* o);
PK_API void pk_screen_config_default(pk_screen_config* c);

/* ---- images and planes -------------------------------------------------- */

PK_API pk_status pk_image_load(const char* path, pk_image** out);
PK_API pk_status pk_image_save(const pk_image* img, const char* path);
PK_API void pk_image_free(pk_image* img);
PK_API pk_status pk_image_dims(const pk_image* img, size_t* height, size_t* width, int* channels,
                               int* depth);

PK_API pk_status pk_plane_load(const char* path, pk_plane** out);
PK_API pk_status pk_plane_save(const pk_plane* p, const char* path);
PK_API void pk_plane_free(pk_plane* p);
PK_API pk_status pk_plane_dims(const pk_plane* p, size_t* height, size_t* width);
/* Row-major view valid until the plane is freed. */
PK_API const double* pk_plane_data(const pk_plane* p);
PK_API pk_status pk_plane_from_data(const double* data, size_t height, size_t width, pk_plane** out);

PK_API pk_status pk_residual(const pk_image* img, const pk_denoise_config* cfg, pk_plane** out);

/* ---- fingerprints ------------------------------------------------------- */

/* Reference entries of the manifest, in manifest order. */
PK_API pk_status pk_fingerprint_from_manifest(const pk_manifest* m, const pk_estimate_options* opts,
                                              pk_fingerprint** out);
PK_API pk_status pk_fingerprint_load(const char* path, pk_fingerprint** out);
PK_API pk_status pk_fingerprint_save(const pk_fingerprint* fp, const char* path);
PK_API void pk_fingerprint_free(pk_fingerprint* fp);
PK_API pk_status pk_fingerprint_plane(const pk_fingerprint* fp, pk_plane** out);
PK_API pk_status pk_fingerprint_zero_mean(pk_fingerprint* fp);
PK_API pk_status pk_fingerprint_wiener(pk_fingerprint* fp, double strength);
/* key=value sidecar text (dims, flags, eps, denoise, provenance). */
PK_API pk_status pk_fingerprint_header(const pk_fingerprint* fp, char** out);
PK_API pk_status pk_fingerprint_term(const pk_fingerprint* fp, const pk_image* img, pk_plane** out);

/* ---- correlation -------------------------------------------------------- */

PK_API pk_status pk_pce(const pk_plane* w, const pk_plane* term, pk_pce_result* out);
PK_API pk_status pk_verify(const pk_pce_result* r, const pk_verify_config* cfg, pk_decision* out);
/* Residual of img against fp's term; one call per test image. */
PK_API pk_status pk_verify_image(const pk_fingerprint* fp, const pk_image* img,
                                 const pk_denoise_config* dcfg, const pk_verify_config* vcfg,
                                 pk_pce_result* result, pk_decision* decision);
/* Circular autocorrelation; index (0,0) holds the zero shift. */
PK_API pk_status pk_autocorr(const pk_plane* p, pk_plane** out);
/* Heat map of the origin-centered window (window x window cells). */
PK_API pk_status pk_surface_svg(const pk_plane* surface, size_t window, char** out);

/* ---- periodic artifacts ------------------------------------------------- */

PK_API pk_status pk_detect_lattice(const pk_plane* surface, size_t window, double min_peak,
                                   pk_lattice** out);
PK_API void pk_lattice_free(pk_lattice* l);
PK_API pk_status pk_lattice_basis(const pk_lattice* l, long* p1, long* p2, double* strength);
PK_API pk_status pk_lattice_json(const pk_lattice* l, char** out);

PK_API pk_status pk_cross_model_screen(const pk_fingerprint* const* fps, const char* const* ids,
                                       const char* const* groups, size_t count,
                                       const pk_screen_config* cfg, pk_collision_matrix** out);
PK_API void pk_collision_matrix_free(pk_collision_matrix* m);
PK_API pk_status pk_collision_verdict(const pk_collision_matrix* m, size_t i, size_t j,
                                      pk_verdict* verdict, pk_pce_result* pce);
PK_API pk_status pk_collision_matrix_json(const pk_collision_matrix* m, char** out);
PK_API pk_status pk_collision_scatter_csv(const pk_collision_matrix* m, char** out);
PK_API const char* pk_verdict_name(pk_verdict v);

/* ---- local analysis ----------------------------------------------------- */

PK_API pk_status pk_block_shift_map(const pk_plane* w, const pk_plane* term, size_t block,
                                    size_t search_radius, size_t stride, pk_shift_map** out);
PK_API void pk_shift_map_free(pk_shift_map* m);
PK_API pk_status pk_shift_map_cell(const pk_shift_map* m, size_t r, size_t c, long* s1, long* s2,
                                   double* confidence);
PK_API pk_status pk_shift_map_grid(const pk_shift_map* m, size_t* rows, size_t* cols);
PK_API pk_status pk_shift_map_json(const pk_shift_map* m, char** out);
PK_API pk_status pk_shift_map_from_json(const char* json, pk_shift_map** out);
PK_API pk_status pk_shift_map_svg(const pk_shift_map* m, char** out);
PK_API pk_status pk_adapt_fingerprint(const pk_fingerprint* fp, const pk_shift_map* m,
                                      pk_fingerprint** out);

PK_API pk_status pk_block_corr_map(const pk_plane* w, const pk_plane* term, size_t block,
                                   pk_block_map** out);
PK_API void pk_block_map_free(pk_block_map* m);
PK_API pk_status pk_block_map_json(const pk_block_map* m, char** out);
PK_API pk_status pk_block_map_from_json(const char* json, pk_block_map** out);
PK_API pk_status pk_block_map_svg(const pk_block_map* m, char** out);

/* threshold NULL selects Otsu. */
PK_API pk_status pk_make_bokeh_mask(const pk_block_map* m, const double* threshold, pk_bokeh_mask** out);
PK_API void pk_bokeh_mask_free(pk_bokeh_mask* m);
PK_API pk_status pk_bokeh_mask_json(const pk_bokeh_mask* m, char** out);
PK_API pk_status pk_bokeh_mask_from_json(const char* json, pk_bokeh_mask** out);
PK_API pk_status pk_bokeh_mask_info(const pk_bokeh_mask* m, double* threshold, size_t* masked_pixels,
                                    int* full_frame_warning);
PK_API pk_status pk_masked_pce(const pk_plane* w, const pk_plane* term, const pk_bokeh_mask* m,
                               pk_pce_result* out);

/* ---- JPEG metadata ------------------------------------------------------ */

PK_API pk_status pk_detect_mfp(const uint8_t* bytes, size_t size, pk_mfp_tags* out);
PK_API pk_status pk_detect_mfp_file(const char* path, pk_mfp_tags* out);

/* ---- manifests ---------------------------------------------------------- */

typedef enum pk_role { PK_ROLE_REFERENCE = 0, PK_ROLE_TEST = 1 } pk_role;
typedef enum pk_label { PK_LABEL_GENUINE = 0, PK_LABEL_IMPOSTOR = 1 } pk_label;

PK_API pk_status pk_manifest_new(pk_manifest** out);
PK_API pk_status pk_manifest_load(const char* path, pk_manifest** out);
PK_API pk_status pk_manifest_save(const pk_manifest* m, const char* path);
PK_API void pk_manifest_free(pk_manifest* m);
/* tags: comma list drawn from mfp, zoom, bokeh, raw (may be empty). */
PK_API pk_status pk_manifest_add(pk_manifest* m, const char* path, pk_role role, pk_label label,
                                 const char* tags);
PK_API size_t pk_manifest_size(const pk_manifest* m);
/* path is resolved against the manifest location; *path stays valid until
 * the manifest is freed. */
PK_API pk_status pk_manifest_entry(const pk_manifest* m, size_t i, const char** path, pk_role* role,
                                   pk_label* label, const char** tags);

/* Entry path exactly as written in the manifest file. */
PK_API pk_status pk_manifest_entry_source(const pk_manifest* m, size_t i, const char** path);

/* ---- synthetic camera --------------------------------------------------- */

typedef enum pk_scene_kind { PK_SCENE_FLAT = 0, PK_SCENE_GRADIENT = 1, PK_SCENE_TEXTURE = 2 } pk_scene_kind;

PK_API pk_status pk_synth_parse(const char* text, pk_synth** out);
PK_API void pk_synth_free(pk_synth* s);
/* Canonical key=value text of the resolved spec. */
PK_API pk_status pk_synth_format(const pk_synth* s, char** out);
PK_API pk_status pk_synth_set_seed(pk_synth* s, uint64_t seed);
PK_API pk_status pk_synth_seed(const pk_synth* s, uint64_t* seed);
PK_API pk_status pk_synth_set_pattern_enabled(pk_synth* s, int enabled);
PK_API pk_status pk_synth_set_scene(pk_synth* s, pk_scene_kind kind, double intensity, uint64_t scene_seed);
PK_API pk_status pk_synth_dims(const pk_synth* s, size_t* height, size_t* width);
PK_API pk_status pk_synth_gen_prnu(const pk_synth* s, pk_plane** out);
/* pattern may be NULL; it is set to NULL when the spec has no pattern. */
PK_API pk_status pk_synth_capture(const pk_synth* s, const pk_plane* k, size_t shot, pk_image** img,
                                  pk_plane** pattern);

/* ---- scores ------------------------------------------------------------- */

/* CSV `score,label,group` in; ROC CSV (fpr,tpr,threshold) plus curve and
 * scatter SVGs out. Any of the char** outputs may be NULL. */
PK_API pk_status pk_roc_from_csv(const char* csv, double tau, pk_roc_summary* summary,
                                 char** roc_csv, char** roc_svg, char** scatter_svg);

/* 17 significant digits, the format used in every CSV field. */
PK_API pk_status pk_format_real(double v, char** out);

#ifdef __cplusplus
}
#endif

#endif /* PRNUKIT_PRNUKIT_H_ */
