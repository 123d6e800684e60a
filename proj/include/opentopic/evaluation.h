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

// Benchmark evaluation with accuracy and support-weighted F1. Also reports
// how far training categories overlap a test taxonomy.

#ifndef OPENTOPIC_EVALUATION_H_
#define OPENTOPIC_EVALUATION_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "opentopic/corpus.h"
#include "opentopic/dataset_builder.h"
#include "opentopic/scoring.h"

namespace opentopic {

struct EvalExample {
  std::string text;
  std::vector<std::string> gold;
};

struct EvalDataset {
  std::string name;
  std::vector<std::string> taxonomy;
  bool multi_label = false;
  std::vector<EvalExample> examples;

  // Throws ValidationError unless every gold label is in the taxonomy and
  // single-label examples carry exactly one label.
  void validate() const;
};

// `<dir>/<stem>.header.json` for `<dir>/<stem>.jsonl`.
std::string default_header_path(const std::string& dataset_path);

EvalDataset load_eval_dataset(const std::string& dataset_path,
                              const std::string& header_path);

struct ClassMetrics {
  std::string label;
  std::size_t support = 0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsReport {
  // "accuracy" for single-label datasets, "weighted_f1" for multi-label.
  std::string metric;
  double value = 0.0;
  // Single-label: fraction correct. Multi-label: exact set match.
  double accuracy = 0.0;
  double weighted_f1 = 0.0;
  std::size_t examples = 0;
  std::vector<ClassMetrics> per_class;
};

// Predictions are aligned with dataset.examples.
MetricsReport compute_metrics(const EvalDataset& dataset,
                              std::span<const std::vector<std::string>> predictions);

struct EvalOptions {
  double threshold = 0.5;
};

// Scores every example in parallel and decides with decide_single or
// decide_multi. A scorer failure aborts the whole run.
MetricsReport evaluate(const EvalDataset& dataset, const Scorer& scorer,
                       const EvalOptions& options = {});

struct OverlapReport {
  DedupResult dedup;
  // Taxonomy labels that removed at least one root.
  std::vector<std::string> overlapping_labels;
  std::size_t overlapping_examples = 0;
  std::size_t total_examples = 0;
  double overlapping_percent = 0.0;
  BuildStats before;
  BuildStats after;
  BuildResult rebuilt;
};

// Rebuilds the training pairs without roots that overlap the dataset's
// taxonomy. Counts test examples whose gold label matched a removed root.
OverlapReport overlap_experiment(const EvalDataset& dataset, const Corpus& corpus,
                                 const BuildConfig& config);

}  // namespace opentopic

#endif  // OPENTOPIC_EVALUATION_H_
