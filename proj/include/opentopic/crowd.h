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

// Crowd annotation analysis over five votes per document. Also screens
// individual worker submissions.

#ifndef OPENTOPIC_CROWD_H_
#define OPENTOPIC_CROWD_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "opentopic/scoring.h"

namespace opentopic {

inline constexpr std::size_t kVotesPerDocument = 5;
// A document counts as correctly classified by humans when at least this
// many workers chose the gold label.
inline constexpr std::size_t kMajorityVotes = 3;

struct AnnotationRecord {
  std::string text;
  std::string gold;
  std::vector<std::string> votes;
  bool anchor = false;
};

std::vector<AnnotationRecord> load_annotations(const std::string& path);

struct CrowdReport {
  std::size_t documents = 0;
  std::size_t correct = 0;
  double human_accuracy = 0.0;
  std::size_t unanimous = 0;
  std::size_t unanimous_correct = 0;
  double unanimous_accuracy = 0.0;
  // Size of the largest agreeing group per document, aligned with input.
  std::vector<std::size_t> agreement;
  // agreement_histogram[k] = documents whose largest agreeing group is k.
  std::array<std::size_t, kVotesPerDocument + 1> agreement_histogram{};
};

// Throws ValidationError if any record does not have exactly five votes.
CrowdReport aggregate_annotations(std::span<const AnnotationRecord> records);

// Largest number of identical votes; the record must have five votes.
std::size_t agreement_level(const AnnotationRecord& record);

// Indices of documents where at least `min_agreement` workers agree.
std::vector<std::size_t> agreement_subset(std::span<const AnnotationRecord> records,
                                          std::size_t min_agreement);

struct ModelOnCrowd {
  std::size_t documents = 0;
  double accuracy = 0.0;
  std::size_t unanimous = 0;
  double unanimous_accuracy = 0.0;
};

// Single-label accuracy of a scorer on the crowd documents, overall and on
// the unanimous subset.
ModelOnCrowd evaluate_on_crowd(std::span<const AnnotationRecord> records,
                               std::span<const std::string> taxonomy,
                               const Scorer& scorer);

struct WorkerAnswer {
  std::string gold;
  std::string choice;
  bool anchor = false;
};

inline constexpr double kMinWorkerAccuracy = 0.30;

struct SubmissionVerdict {
  bool accepted = true;
  std::string reason;
  double accuracy = 0.0;
  std::size_t anchors = 0;
  std::size_t anchors_wrong = 0;
};

// Rejects iff accuracy over all answers is below 30% or every anchor was
// answered wrongly. Throws ValidationError with fewer than two anchors.
SubmissionVerdict validate_submission(std::span<const WorkerAnswer> answers);

// The answers of the worker in vote slot `worker` (0-based).
SubmissionVerdict validate_submission(std::span<const AnnotationRecord> assignment,
                                      std::size_t worker);

}  // namespace opentopic

#endif  // OPENTOPIC_CROWD_H_
