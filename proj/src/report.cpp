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

#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "prnukit/error.hpp"
#include "prnukit/format.hpp"

namespace prnukit::report {
namespace {

// JSON cannot hold non-finite numbers; they become strings.
json real(double v) {
  if (std::isfinite(v)) return v;
  return format_real(v);
}

const char* polarity_name(Polarity p) { return p == Polarity::positive ? "positive" : "negative"; }

std::string ramp(double t) {
  // t in [-1, 1]: blue (-1) -> white (0) -> red (+1)
  t = std::clamp(t, -1.0, 1.0);
  int r = 255, g = 255, b = 255;
  if (t < 0) {
    r = g = static_cast<int>(std::lround(255 * (1 + t)));
  } else {
    g = b = static_cast<int>(std::lround(255 * (1 - t)));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

json to_json(const Shift& s) { return json::array({s.s1, s.s2}); }

json to_json(const PceResult& r) {
  return {{"pce", real(r.pce)},
          {"peak", to_json(r.peak)},
          {"rho_max", real(r.rho_max)},
          {"excluded", r.excluded},
          {"height", r.height},
          {"width", r.width},
          {"pce_at_origin", real(r.pce_at_origin)},
          {"rho_origin", real(r.rho_origin)}};
}

json to_json(const VerifyConfig& c) {
  return {{"tau", real(c.tau)}, {"search", c.search == SearchMode::full ? "full" : "zero_only"}};
}

json to_json(const DenoiseConfig& c) {
  return {{"wavelet", "db8"},
          {"levels", c.levels},
          {"base_noise_sigma", real(c.base_noise_sigma)},
          {"window_sizes", c.window_sizes}};
}

json to_json(const LatticeReport& r) {
  json peaks = json::array();
  for (const auto& p : r.peaks)
    peaks.push_back({{"shift", to_json(p.shift)}, {"value", real(p.value)}, {"polarity", polarity_name(p.polarity)}});
  return {{"basis", to_json(r.basis)},
          {"empty", r.empty()},
          {"peaks", std::move(peaks)},
          {"strength", real(r.strength)},
          {"window", r.window}};
}

json to_json(const CollisionReport& r) {
  return {{"id_a", r.id_a},
          {"id_b", r.id_b},
          {"pce_ab", to_json(r.pce_ab)},
          {"lattice_a", to_json(r.lattice_a)},
          {"lattice_b", to_json(r.lattice_b)},
          {"basis_match", r.basis_match},
          {"verdict", verdict_name(r.verdict)}};
}

json to_json(const CollisionMatrix& m) {
  json pairs = json::array();
  for (const auto& p : m.pairs) pairs.push_back(to_json(p));
  return {{"ids", m.ids}, {"groups", m.groups}, {"pairs", std::move(pairs)}};
}

json to_json(const ShiftMap& m) {
  json cells = json::array();
  for (const auto& c : m.cells)
    cells.push_back({{"row", c.row}, {"col", c.col}, {"shift", to_json(c.shift)}, {"confidence", real(c.confidence)}});
  return {{"height", m.height},         {"width", m.width}, {"block", m.block},
          {"stride", m.stride},         {"search_radius", m.search_radius},
          {"rows", m.rows},             {"cols", m.cols},   {"cells", std::move(cells)}};
}

json to_json(const BlockCorrMap& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.grid.height; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.grid.width; ++c) row.push_back(real(m.grid(r, c)));
    rows.push_back(std::move(row));
  }
  return {{"height", m.height}, {"width", m.width}, {"block", m.block}, {"grid", std::move(rows)}};
}

json to_json(const BokehMask& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    std::string line;
    for (std::size_t c = 0; c < m.cols; ++c) line += m.block_mask[r * m.cols + c] ? '1' : '0';
    rows.push_back(std::move(line));
  }
  return {{"rows", m.rows},
          {"cols", m.cols},
          {"block", m.block},
          {"height", m.pixel_mask.height},
          {"width", m.pixel_mask.width},
          {"threshold_used", real(m.threshold_used)},
          {"full_frame_warning", m.full_frame_warning},
          {"masked_pixels", m.masked_pixels()},
          {"block_mask", std::move(rows)}};
}

json to_json(const MfpTags& t) {
  json j = {{"mhdr", t.mhdr}, {"lhdr", t.lhdr}, {"mfp3", t.mfp3}, {"is_mfp", t.is_mfp()}};
  j["zoom_ratio"] = t.zoom_ratio ? json::array({t.zoom_ratio->num, t.zoom_ratio->den}) : json(nullptr);
  return j;
}

namespace {

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(Errc::malformed_header, std::string(what) + ": " + e.what());
  }
}

double real_of(const json& v) {
  if (v.is_string()) return parse_double(v.get<std::string>(), "json number");
  return v.get<double>();
}

}  // namespace

ShiftMap shift_map_from_json(const json& j) {
  return guarded("shift map json", [&] {
    ShiftMap m = make_shift_grid(j.at("height").get<std::size_t>(), j.at("width").get<std::size_t>(),
                                 j.at("block").get<std::size_t>(), j.at("stride").get<std::size_t>(),
                                 j.at("search_radius").get<std::size_t>());
    const auto& cells = j.at("cells");
    if (cells.size() != m.cells.size()) throw Error(Errc::malformed_header, "shift map json: cell count");
    for (std::size_t i = 0; i < m.cells.size(); ++i) {
      const auto& c = cells[i];
      if (c.at("row").get<std::size_t>() != m.cells[i].row || c.at("col").get<std::size_t>() != m.cells[i].col)
        throw Error(Errc::malformed_header, "shift map json: cell grid");
      m.cells[i].shift = {c.at("shift").at(0).get<long>(), c.at("shift").at(1).get<long>()};
      m.cells[i].confidence = real_of(c.at("confidence"));
    }
    return m;
  });
}

BlockCorrMap block_map_from_json(const json& j) {
  return guarded("block map json", [&] {
    BlockCorrMap m;
    m.height = j.at("height").get<std::size_t>();
    m.width = j.at("width").get<std::size_t>();
    m.block = j.at("block").get<std::size_t>();
    if (m.block == 0) throw Error(Errc::malformed_header, "block map json: zero block");
    const std::size_t rows = (m.height + m.block - 1) / m.block, cols = (m.width + m.block - 1) / m.block;
    const auto& g = j.at("grid");
    if (g.size() != rows) throw Error(Errc::malformed_header, "block map json: row count");
    m.grid = Plane(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (g[r].size() != cols) throw Error(Errc::malformed_header, "block map json: column count");
      for (std::size_t c = 0; c < cols; ++c) m.grid(r, c) = real_of(g[r][c]);
    }
    return m;
  });
}

BokehMask bokeh_mask_from_json(const json& j) {
  return guarded("bokeh mask json", [&] {
    BokehMask m;
    m.rows = j.at("rows").get<std::size_t>();
    m.cols = j.at("cols").get<std::size_t>();
    m.block = j.at("block").get<std::size_t>();
    m.threshold_used = real_of(j.at("threshold_used"));
    m.full_frame_warning = j.at("full_frame_warning").get<bool>();
    const std::size_t h = j.at("height").get<std::size_t>(), w = j.at("width").get<std::size_t>();
    if (m.block == 0 || (h + m.block - 1) / m.block != m.rows || (w + m.block - 1) / m.block != m.cols)
      throw Error(Errc::malformed_header, "bokeh mask json: inconsistent geometry");
    const auto& rows = j.at("block_mask");
    if (rows.size() != m.rows) throw Error(Errc::malformed_header, "bokeh mask json: row count");
    for (const auto& row : rows) {
      const auto line = row.get<std::string>();
      if (line.size() != m.cols) throw Error(Errc::malformed_header, "bokeh mask json: column count");
      for (char ch : line) {
        if (ch != '0' && ch != '1') throw Error(Errc::malformed_header, "bokeh mask json: bad cell");
        m.block_mask.push_back(ch == '1');
      }
    }
    m.pixel_mask = Plane(h, w);
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t c = 0; c < w; ++c) m.pixel_mask(r, c) = m.block_mask[(r / m.block) * m.cols + c / m.block];
    return m;
  });
}

std::string scatter_csv(const CollisionMatrix& m) {
  std::string out = "pair_id,group_a,group_b,pce,verdict\n";
  std::size_t k = 0;
  for (std::size_t i = 0; i < m.ids.size(); ++i)
    for (std::size_t j = i + 1; j < m.ids.size(); ++j, ++k) {
      const auto& p = m.pairs[k];
      out += m.ids[i] + ":" + m.ids[j] + "," + m.groups[i] + "," + m.groups[j] + "," +
             format_real(p.pce_ab.pce) + "," + verdict_name(p.verdict) + "\n";
    }
  return out;
}

std::string heatmap_svg(const Plane& values, double vmax, double cell_px) {
  if (!(vmax > 0)) vmax = 1.0;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << values.width * cell_px << "\" height=\""
    << values.height * cell_px << "\" shape-rendering=\"crispEdges\">\n";
  for (std::size_t r = 0; r < values.height; ++r)
    for (std::size_t c = 0; c < values.width; ++c)
      s << "<rect x=\"" << c * cell_px << "\" y=\"" << r * cell_px << "\" width=\"" << cell_px
        << "\" height=\"" << cell_px << "\" fill=\"" << ramp(values(r, c) / vmax) << "\"/>\n";
  s << "</svg>\n";
  return s.str();
}

std::string shift_map_svg(const ShiftMap& m) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << m.width << "\" height=\"" << m.height << "\">\n";
  const double r = static_cast<double>(std::max<std::size_t>(1, m.search_radius));
  for (const auto& c : m.cells) {
    const std::size_t bh = std::min(m.block, m.height - c.row), bw = std::min(m.block, m.width - c.col);
    const double mag = std::hypot(c.shift.s1, c.shift.s2) / (r * std::sqrt(2.0));
    s << "<rect x=\"" << c.col << "\" y=\"" << c.row << "\" width=\"" << bw << "\" height=\"" << bh
      << "\" fill=\"" << ramp(mag) << "\" stroke=\"#444\"/>\n";
    const double cx = c.col + bw / 2.0, cy = c.row + bh / 2.0;
    const double scale = std::min(bh, bw) / (2.0 * r);
    s << "<line x1=\"" << cx << "\" y1=\"" << cy << "\" x2=\"" << cx + c.shift.s2 * scale << "\" y2=\""
      << cy + c.shift.s1 * scale << "\" stroke=\"#000\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << c.col + 4 << "\" y=\"" << c.row + 14 << "\" font-size=\"12\">(" << c.shift.s1
      << "," << c.shift.s2 << ")</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace prnukit::report
