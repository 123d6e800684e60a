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

#include "opentopic/crowd.h"

#include <algorithm>
#include <fstream>
#include <map>

#include "json.hpp"
#include "opentopic/classifier.h"
#include "opentopic/errors.h"

namespace opentopic {
namespace {

using json = nlohmann::json;

void require_five(const AnnotationRecord& r, std::size_t index) {
  if (r.votes.size() != kVotesPerDocument) {
    throw ValidationError("annotation " + std::to_string(index) + " has " +
                          std::to_string(r.votes.size()) + " votes, expected 5");
  }
}

std::size_t gold_votes(const AnnotationRecord& r) {
  return static_cast<std::size_t>(std::count(r.votes.begin(), r.votes.end(), r.gold));
}

double ratio(std::size_t num, std::size_t den) {
  return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

}  // namespace

std::vector<AnnotationRecord> load_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<AnnotationRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(path, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object() || !obj.contains("text") || !obj["text"].is_string() ||
        !obj.contains("gold") || !obj["gold"].is_string() || !obj.contains("votes") ||
        !obj["votes"].is_array()) {
      throw ParseError(path, line_no,
                       "expected {\"text\": str, \"gold\": str, \"votes\": [str]}");
    }
    AnnotationRecord r;
    r.text = obj["text"].get<std::string>();
    r.gold = obj["gold"].get<std::string>();
    for (const json& v : obj["votes"]) {
      if (!v.is_string()) throw ParseError(path, line_no, "votes must be strings");
      r.votes.push_back(v.get<std::string>());
    }
    if (r.votes.size() != kVotesPerDocument) {
      throw ParseError(path, line_no,
                       "expected exactly 5 votes, got " + std::to_string(r.votes.size()));
    }
    if (obj.contains("anchor")) {
      if (!obj["anchor"].is_boolean()) throw ParseError(path, line_no, "anchor must be a boolean");
      r.anchor = obj["anchor"].get<bool>();
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::size_t agreement_level(const AnnotationRecord& record) {
  require_five(record, 0);
  std::map<std::string_view, std::size_t> counts;
  std::size_t best = 0;
  for (const std::string& v : record.votes) best = std::max(best, ++counts[v]);
  return best;
}

CrowdReport aggregate_annotations(std::span<const AnnotationRecord> records) {
  for (std::size_t i = 0; i < records.size(); ++i) require_five(records[i], i);

  CrowdReport report;
  report.documents = records.size();
  for (const AnnotationRecord& r : records) {
    const std::size_t level = agreement_level(r);
    report.agreement.push_back(level);
    ++report.agreement_histogram[level];
    const std::size_t for_gold = gold_votes(r);
    if (for_gold >= kMajorityVotes) ++report.correct;
    if (level == kVotesPerDocument) {
      ++report.unanimous;
      if (for_gold == kVotesPerDocument) ++report.unanimous_correct;
    }
  }
  report.human_accuracy = ratio(report.correct, report.documents);
  report.unanimous_accuracy = ratio(report.unanimous_correct, report.unanimous);
  return report;
}

std::vector<std::size_t> agreement_subset(std::span<const AnnotationRecord> records,
                                          std::size_t min_agreement) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    require_five(records[i], i);
    if (agreement_level(records[i]) >= min_agreement) out.push_back(i);
  }
  return out;
}

ModelOnCrowd evaluate_on_crowd(std::span<const AnnotationRecord> records,
                               std::span<const std::string> taxonomy,
                               const Scorer& scorer) {
  ModelOnCrowd out;
  std::size_t correct = 0, unanimous_correct = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const AnnotationRecord& r = records[i];
    require_five(r, i);
    const bool hit = decide_single(scorer.score(r.text, taxonomy)).chosen.front() == r.gold;
    ++out.documents;
    correct += hit;
    if (agreement_level(r) == kVotesPerDocument) {
      ++out.unanimous;
      unanimous_correct += hit;
    }
  }
  out.accuracy = ratio(correct, out.documents);
  out.unanimous_accuracy = ratio(unanimous_correct, out.unanimous);
  return out;
}

SubmissionVerdict validate_submission(std::span<const WorkerAnswer> answers) {
  SubmissionVerdict v;
  std::size_t correct = 0;
  for (const WorkerAnswer& a : answers) {
    const bool right = a.choice == a.gold;
    correct += right;
    if (a.anchor) {
      ++v.anchors;
      v.anchors_wrong += !right;
    }
  }
  if (v.anchors < 2) {
    throw ValidationError("assignment needs at least two anchor examples, has " +
                          std::to_string(v.anchors));
  }
  v.accuracy = ratio(correct, answers.size());
  // Integer form of accuracy < 0.30, exact at the boundary.
  if (correct * 100 < 30 * answers.size()) {
    v.accepted = false;
    v.reason = "accuracy " + std::to_string(correct) + "/" +
               std::to_string(answers.size()) + " is below 30%";
  } else if (v.anchors_wrong == v.anchors) {
    v.accepted = false;
    v.reason = "all anchor examples answered wrongly";
  }
  return v;
}

SubmissionVerdict validate_submission(std::span<const AnnotationRecord> assignment,
                                      std::size_t worker) {
  if (worker >= kVotesPerDocument) throw ValidationError("worker slot must be 0..4");
  std::vector<WorkerAnswer> answers;
  answers.reserve(assignment.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    require_five(assignment[i], i);
    answers.push_back({assignment[i].gold, assignment[i].votes[worker], assignment[i].anchor});
  }
  return validate_submission(answers);
}

}  // namespace opentopic
