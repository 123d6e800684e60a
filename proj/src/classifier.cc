/* Copyright 2026 The OpenTopic Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "opentopic/classifier.h"

#include <algorithm>
#include <numeric>

#include "opentopic/errors.h"

namespace opentopic {

std::string_view to_string(DecisionMode mode) {
  return mode == DecisionMode::kSingle ? "single" : "multi";
}

DecisionMode parse_decision_mode(std::string_view s) {
  if (s == "single") return DecisionMode::kSingle;
  if (s == "multi") return DecisionMode::kMulti;
  throw ValidationError("mode must be 'single' or 'multi', got '" + std::string(s) + "'");
}

Decision decide_single(const LabelScores& scores) {
  if (scores.empty()) throw ValidationError("cannot decide over an empty label set");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i].second > scores[best].second) best = i;
  }
  Decision d;
  d.mode = DecisionMode::kSingle;
  d.chosen = {scores[best].first};
  d.scores = scores;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i != best && scores[i].second == scores[best].second) d.tie = true;
  }
  return d;
}

Decision decide_multi(const LabelScores& scores, double threshold,
                      bool fallback_top1) {
  if (scores.empty()) throw ValidationError("cannot decide over an empty label set");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ValidationError("threshold must lie in (0, 1)");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a].second > scores[b].second;
  });
  Decision d;
  d.mode = DecisionMode::kMulti;
  d.scores = scores;
  for (std::size_t i : order) {
    if (scores[i].second > threshold) d.chosen.push_back(scores[i].first);
  }
  if (d.chosen.empty() && fallback_top1) {
    d.chosen = decide_single(scores).chosen;
  }
  return d;
}

}  // namespace opentopic
