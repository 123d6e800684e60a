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

#include "opentopic/evaluation.h"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "opentopic/classifier.h"
#include "opentopic/errors.h"

namespace opentopic {
namespace {

using json = nlohmann::json;

std::vector<std::string> string_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const json& item : j) {
    if (!item.is_string()) throw ValidationError(where + ": expected an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

void EvalDataset::validate() const {
  std::set<std::string> labels(taxonomy.begin(), taxonomy.end());
  if (labels.size() != taxonomy.size()) {
    throw ValidationError(name + ": duplicate label in taxonomy");
  }
  if (taxonomy.empty()) throw ValidationError(name + ": empty taxonomy");
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& gold = examples[i].gold;
    if (!multi_label && gold.size() != 1) {
      throw ValidationError(name + ": example " + std::to_string(i) +
                            " must have exactly one gold label");
    }
    for (const std::string& g : gold) {
      if (!labels.count(g)) {
        throw ValidationError(name + ": example " + std::to_string(i) +
                              " has gold label '" + g + "' outside the taxonomy");
      }
    }
  }
}

std::string default_header_path(const std::string& dataset_path) {
  std::filesystem::path p(dataset_path);
  p.replace_extension(".header.json");
  return p.string();
}

EvalDataset load_eval_dataset(const std::string& dataset_path,
                              const std::string& header_path) {
  EvalDataset ds;
  {
    std::ifstream in(header_path);
    if (!in) throw IoError("cannot open " + header_path);
    json header;
    try {
      header = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ValidationError(header_path + ": invalid JSON: " + e.what());
    }
    if (!header.is_object() || !header.contains("labels")) {
      throw ValidationError(header_path + ": expected {\"name\", \"labels\", \"multi_label\"}");
    }
    ds.name = header.value("name", std::filesystem::path(dataset_path).stem().string());
    ds.taxonomy = string_array(header["labels"], header_path + ": labels");
    if (header.contains("multi_label")) {
      if (!header["multi_label"].is_boolean()) {
        throw ValidationError(header_path + ": multi_label must be a boolean");
      }
      ds.multi_label = header["multi_label"].get<bool>();
    }
  }

  std::ifstream in(dataset_path);
  if (!in) throw IoError("cannot open " + dataset_path);
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
      throw ParseError(dataset_path, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object() || !obj.contains("text") || !obj["text"].is_string() ||
        !obj.contains("gold")) {
      throw ParseError(dataset_path, line_no, "expected {\"text\": str, \"gold\": [str]}");
    }
    EvalExample ex;
    ex.text = obj["text"].get<std::string>();
    try {
      ex.gold = string_array(obj["gold"], "gold");
    } catch (const ValidationError& e) {
      throw ParseError(dataset_path, line_no, e.what());
    }
    if (!ds.multi_label && ex.gold.size() != 1) {
      throw ParseError(dataset_path, line_no, "single-label example needs exactly one gold label");
    }
    for (const std::string& g : ex.gold) {
      if (std::find(ds.taxonomy.begin(), ds.taxonomy.end(), g) == ds.taxonomy.end()) {
        throw ParseError(dataset_path, line_no, "gold label '" + g + "' is not in the taxonomy");
      }
    }
    ds.examples.push_back(std::move(ex));
  }
  ds.validate();
  return ds;
}

MetricsReport compute_metrics(const EvalDataset& dataset,
                              std::span<const std::vector<std::string>> predictions) {
  if (predictions.size() != dataset.examples.size()) {
    throw ValidationError("prediction count does not match example count");
  }
  MetricsReport report;
  report.examples = dataset.examples.size();
  std::unordered_map<std::string, std::size_t> slot;
  for (const std::string& label : dataset.taxonomy) {
    slot.emplace(label, report.per_class.size());
    report.per_class.push_back({label});
  }

  std::size_t exact = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    std::set<std::string> gold(dataset.examples[i].gold.begin(),
                               dataset.examples[i].gold.end());
    std::set<std::string> pred(predictions[i].begin(), predictions[i].end());
    if (gold == pred) ++exact;
    for (const std::string& g : gold) {
      ClassMetrics& m = report.per_class[slot.at(g)];
      ++m.support;
      if (pred.count(g)) {
        ++m.true_positives;
      } else {
        ++m.false_negatives;
      }
    }
    for (const std::string& p : pred) {
      auto it = slot.find(p);
      if (it == slot.end()) {
        throw ValidationError("prediction '" + p + "' is outside the taxonomy");
      }
      if (!gold.count(p)) ++report.per_class[it->second].false_positives;
    }
  }

  std::size_t total_support = 0;
  double weighted = 0.0;
  for (ClassMetrics& m : report.per_class) {
    const double tp = static_cast<double>(m.true_positives);
    const std::size_t predicted = m.true_positives + m.false_positives;
    m.precision = predicted ? tp / static_cast<double>(predicted) : 0.0;
    m.recall = m.support ? tp / static_cast<double>(m.support) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    total_support += m.support;
    weighted += static_cast<double>(m.support) * m.f1;
  }
  report.weighted_f1 = total_support ? weighted / static_cast<double>(total_support) : 0.0;
  report.accuracy = report.examples
                        ? static_cast<double>(exact) / static_cast<double>(report.examples)
                        : 0.0;
  if (dataset.multi_label) {
    report.metric = "weighted_f1";
    report.value = report.weighted_f1;
  } else {
    report.metric = "accuracy";
    report.value = report.accuracy;
  }
  return report;
}

MetricsReport evaluate(const EvalDataset& dataset, const Scorer& scorer,
                       const EvalOptions& options) {
  const auto n = static_cast<std::ptrdiff_t>(dataset.examples.size());
  std::vector<std::vector<std::string>> predictions(dataset.examples.size());
  std::exception_ptr failure;
  std::mutex failure_mu;

#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      {
        std::lock_guard lock(failure_mu);
        if (failure) continue;
      }
      const LabelScores scores = scorer.score(dataset.examples[i].text, dataset.taxonomy);
      predictions[i] = dataset.multi_label ? decide_multi(scores, options.threshold).chosen
                                           : decide_single(scores).chosen;
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return compute_metrics(dataset, predictions);
}

OverlapReport overlap_experiment(const EvalDataset& dataset, const Corpus& corpus,
                                 const BuildConfig& config) {
  OverlapReport report;
  const DistanceTable table = compute_distances(corpus.graph, config);
  report.before = build_training_pairs(corpus.graph, corpus.articles, table, config).stats;

  const CategoryGraph filtered =
      exclude_overlapping_roots(corpus.graph, dataset.taxonomy, &report.dedup);
  // Dropping roots only removes per-root rows, so the table stays valid;
  // build_training_pairs ignores roots outside the filtered set.
  report.rebuilt = build_training_pairs(filtered, corpus.articles, table, config);
  report.after = report.rebuilt.stats;

  std::set<std::string> overlapping;
  for (const DedupMatch& m : report.dedup.report) {
    overlapping.insert(m.labels.begin(), m.labels.end());
  }
  for (const std::string& label : dataset.taxonomy) {
    if (overlapping.count(label)) report.overlapping_labels.push_back(label);
  }
  report.total_examples = dataset.examples.size();
  for (const EvalExample& ex : dataset.examples) {
    if (std::any_of(ex.gold.begin(), ex.gold.end(),
                    [&](const std::string& g) { return overlapping.count(g) > 0; })) {
      ++report.overlapping_examples;
    }
  }
  report.overlapping_percent =
      report.total_examples ? 100.0 * static_cast<double>(report.overlapping_examples) /
                                  static_cast<double>(report.total_examples)
                            : 0.0;
  return report;
}

}  // namespace opentopic
