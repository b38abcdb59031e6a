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

#include <string>
#include <vector>

namespace prnukit {

enum class ScoreLabel { genuine, impostor };

struct ScoreEntry {
  double score = 0.0;
  ScoreLabel label = ScoreLabel::impostor;
  std::string group;
};

struct ScoreSet {
  std::vector<ScoreEntry> entries;

  void add(double score, ScoreLabel label, std::string group = {});
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

struct Rates {
  double tpr = 0.0;
  double fpr = 0.0;
};

/// Threshold sweep over +inf, every distinct score (descending), -inf.
/// A score counts as positive when strictly greater than the threshold.
std::vector<RocPoint> roc(const ScoreSet& scores);
Rates rates_at(const ScoreSet& scores, double tau);
double auc(const std::vector<RocPoint>& curve);

ScoreSet parse_scores_csv(const std::string& text);
std::string format_roc_csv(const std::vector<RocPoint>& curve);
std::string roc_svg(const std::vector<RocPoint>& curve);
std::string scatter_svg(const ScoreSet& scores, double tau);

const char* score_label_name(ScoreLabel l) noexcept;

}  // namespace prnukit
