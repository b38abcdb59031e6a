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

#include "prnukit/roc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "prnukit/error.hpp"
#include "prnukit/format.hpp"

namespace prnukit {
namespace {

struct Counts {
  std::size_t genuine = 0, impostor = 0;
};

Counts class_counts(const ScoreSet& s) {
  Counts c;
  for (const auto& e : s.entries) {
    if (!std::isfinite(e.score)) throw Error(Errc::invalid_argument, "roc: non-finite score");
    (e.label == ScoreLabel::genuine ? c.genuine : c.impostor)++;
  }
  if (c.genuine == 0 || c.impostor == 0)
    throw Error(Errc::invalid_argument, "roc: needs both genuine and impostor scores");
  return c;
}

const char* kGroupColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                              "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

void ScoreSet::add(double score, ScoreLabel label, std::string group) {
  entries.push_back({score, label, std::move(group)});
}

const char* score_label_name(ScoreLabel l) noexcept {
  return l == ScoreLabel::genuine ? "genuine" : "impostor";
}

Rates rates_at(const ScoreSet& scores, double tau) {
  const Counts c = class_counts(scores);
  std::size_t tp = 0, fp = 0;
  for (const auto& e : scores.entries)
    if (e.score > tau) (e.label == ScoreLabel::genuine ? tp : fp)++;
  return {static_cast<double>(tp) / static_cast<double>(c.genuine),
          static_cast<double>(fp) / static_cast<double>(c.impostor)};
}

std::vector<RocPoint> roc(const ScoreSet& scores) {
  const Counts c = class_counts(scores);
  std::vector<const ScoreEntry*> sorted;
  for (const auto& e : scores.entries) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoreEntry* a, const ScoreEntry* b) { return a->score > b->score; });

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<RocPoint> curve{{0.0, 0.0, inf}};
  std::size_t tp = 0, fp = 0, i = 0;
  while (i < sorted.size()) {
    const double t = sorted[i]->score;
    // at threshold t only scores above t count, so emit before consuming ties
    curve.push_back({static_cast<double>(fp) / c.impostor, static_cast<double>(tp) / c.genuine, t});
    while (i < sorted.size() && sorted[i]->score == t) {
      (sorted[i]->label == ScoreLabel::genuine ? tp : fp)++;
      ++i;
    }
  }
  curve.push_back({1.0, 1.0, -inf});
  return curve;
}

double auc(const std::vector<RocPoint>& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) * 0.5;
  return area;
}

ScoreSet parse_scores_csv(const std::string& text) {
  ScoreSet out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("score,", 0) == 0) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c1 == std::string::npos)
      throw Error(Errc::malformed_header, "scores csv line " + std::to_string(lineno) + ": expected score,label[,group]");
    const std::string label = line.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1);
    ScoreEntry e;
    e.score = parse_double(line.substr(0, c1), "score");
    if (!std::isfinite(e.score))
      throw Error(Errc::invalid_argument, "scores csv line " + std::to_string(lineno) + ": non-finite score");
    if (label == "genuine") e.label = ScoreLabel::genuine;
    else if (label == "impostor") e.label = ScoreLabel::impostor;
    else throw Error(Errc::vocabulary, "scores csv: unknown label '" + label + "'");
    if (c2 != std::string::npos) e.group = line.substr(c2 + 1);
    out.entries.push_back(std::move(e));
  }
  return out;
}

std::string format_roc_csv(const std::vector<RocPoint>& curve) {
  std::string out = "fpr,tpr,threshold\n";
  for (const auto& p : curve)
    out += format_real(p.fpr) + "," + format_real(p.tpr) + "," + format_real(p.threshold) + "\n";
  return out;
}

std::string roc_svg(const std::vector<RocPoint>& curve) {
  constexpr double kSize = 400, kPad = 40;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize + 2 * kPad << "\" height=\""
    << kSize + 2 * kPad << "\">\n";
  s << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kSize << "\" height=\"" << kSize
    << "\" fill=\"none\" stroke=\"#000\"/>\n";
  s << "<line x1=\"" << kPad << "\" y1=\"" << kPad + kSize << "\" x2=\"" << kPad + kSize << "\" y2=\""
    << kPad << "\" stroke=\"#bbb\" stroke-dasharray=\"4\"/>\n";
  s << "<path fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" d=\"";
  for (std::size_t i = 0; i < curve.size(); ++i)
    s << (i ? " L" : "M") << kPad + curve[i].fpr * kSize << "," << kPad + (1.0 - curve[i].tpr) * kSize;
  s << "\"/>\n";
  s << "<text x=\"" << kPad + kSize / 2 << "\" y=\"" << kSize + 1.8 * kPad
    << "\" text-anchor=\"middle\">FPR</text>\n";
  s << "<text x=\"12\" y=\"" << kPad + kSize / 2 << "\">TPR</text>\n";
  s << "</svg>\n";
  return s.str();
}

std::string scatter_svg(const ScoreSet& scores, double tau) {
  constexpr double kW = 600, kH = 300, kPad = 40;
  std::map<std::string, std::size_t> group_index;
  for (const auto& e : scores.entries) group_index.emplace(e.group, group_index.size());
  double lo = std::log10(1.0 + std::max(0.0, tau)), hi = lo;
  for (const auto& e : scores.entries) {
    const double v = std::copysign(std::log10(1.0 + std::abs(e.score)), e.score);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi - lo < 1e-12) hi = lo + 1.0;
  const auto y_of = [&](double score) {
    const double v = std::copysign(std::log10(1.0 + std::abs(score)), score);
    return kPad + (hi - v) / (hi - lo) * kH;
  };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW + 2 * kPad << "\" height=\""
    << kH + 2 * kPad << "\">\n";
  s << "<line x1=\"" << kPad << "\" y1=\"" << y_of(tau) << "\" x2=\"" << kPad + kW << "\" y2=\""
    << y_of(tau) << "\" stroke=\"#000\" stroke-dasharray=\"4\"/>\n";
  const double step = scores.entries.size() > 1 ? kW / static_cast<double>(scores.entries.size() - 1) : 0.0;
  for (std::size_t i = 0; i < scores.entries.size(); ++i) {
    const auto& e = scores.entries[i];
    const char* color = kGroupColors[group_index[e.group] % std::size(kGroupColors)];
    s << "<circle cx=\"" << kPad + step * static_cast<double>(i) << "\" cy=\"" << y_of(e.score)
      << "\" r=\"3\" fill=\"" << (e.label == ScoreLabel::genuine ? color : "none") << "\" stroke=\""
      << color << "\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace prnukit
