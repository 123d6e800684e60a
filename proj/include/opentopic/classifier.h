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

#ifndef OPENTOPIC_CLASSIFIER_H_
#define OPENTOPIC_CLASSIFIER_H_

#include <string>
#include <string_view>
#include <vector>

#include "opentopic/scoring.h"

namespace opentopic {

enum class DecisionMode { kSingle, kMulti };

std::string_view to_string(DecisionMode mode);
// Throws ValidationError for anything but "single" / "multi".
DecisionMode parse_decision_mode(std::string_view s);

struct Decision {
  DecisionMode mode = DecisionMode::kSingle;
  std::vector<std::string> chosen;
  LabelScores scores;
  // Single mode only: another label shared the maximum score.
  bool tie = false;
};

// Highest score wins; ties go to the earliest label in caller order.
// Throws ValidationError on an empty label set.
Decision decide_single(const LabelScores& scores);

// Every label scoring strictly above `threshold`, highest first (stable for
// equal scores). May be empty unless `fallback_top1` is set, in which case
// an empty result is replaced by the single-mode winner.
Decision decide_multi(const LabelScores& scores, double threshold = 0.5,
                      bool fallback_top1 = false);

}  // namespace opentopic

#endif  // OPENTOPIC_CLASSIFIER_H_
