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

// Training-pair construction from the category graph.
//
// For each root c, a depth-bounded traversal finds every category t within
// max_depth edges, where depth(t) is the minimum edge count from c. Each
// member article x of t gets d(x, c) = 1 + depth(t), minimized over t. An
// article is paired positively with every root at its minimum distance and
// negatively with roots sampled from the rest.

#ifndef OPENTOPIC_DATASET_BUILDER_H_
#define OPENTOPIC_DATASET_BUILDER_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opentopic/corpus.h"

namespace opentopic {

struct BuildConfig {
  std::uint32_t max_depth = 2;
  std::uint32_t negatives_per_article = 1;
  std::uint64_t rng_seed = 17;
  // Code points; nullopt keeps full texts.
  std::optional<std::size_t> premise_char_cap = 2000;
};

struct DistanceEntry {
  ArticleId article;
  CategoryId root;
  std::uint32_t distance;

  bool operator==(const DistanceEntry&) const = default;
};

// Sparse (article, root) -> distance. Missing entries mean unreachable.
class DistanceTable {
 public:
  DistanceTable() = default;
  // Entries may arrive in any order; duplicates keep the minimum.
  explicit DistanceTable(std::vector<DistanceEntry> entries);

  std::optional<std::uint32_t> distance(ArticleId article, CategoryId root) const;

  // Entries of one article, sorted by root.
  std::span<const DistanceEntry> for_article(ArticleId article) const;

  // Sorted by (article, root).
  std::span<const DistanceEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  bool operator==(const DistanceTable&) const = default;

 private:
  std::vector<DistanceEntry> entries_;
};

// Roots are processed in parallel (OpenMP), one breadth-first sweep each.
DistanceTable compute_distances(const CategoryGraph& graph,
                                const BuildConfig& config);

// Single-threaded reference: recursive depth-first search that revisits a
// node whenever it is reached at a smaller depth.
DistanceTable compute_distances_serial(const CategoryGraph& graph,
                                       const BuildConfig& config);

struct TrainingPair {
  ArticleId article;
  CategoryId root;
  std::string article_key;
  std::string premise;
  std::string hypothesis;
  int polarity = 0;  // +1 or -1

  bool operator==(const TrainingPair&) const = default;
};

struct BuildStats {
  std::size_t articles_paired = 0;
  std::size_t positive_pairs = 0;
  std::size_t negative_pairs = 0;
  // Articles whose argmin set has more than one root.
  std::size_t argmin_ties = 0;
  // Articles at minimum distance from every root; they get no negatives.
  std::size_t articles_all_roots = 0;

  bool operator==(const BuildStats&) const = default;
};

struct BuildResult {
  // Sorted by (article key, hypothesis, polarity).
  std::vector<TrainingPair> pairs;
  BuildStats stats;
};

// The roots at minimum distance for `article`; empty when unreachable.
std::vector<CategoryId> argmin_roots(const DistanceTable& table, ArticleId article);

BuildResult build_training_pairs(const CategoryGraph& graph,
                                 const ArticleStore& articles,
                                 const DistanceTable& table,
                                 const BuildConfig& config);

// One JSON object per line: article_id, premise, hypothesis, label.
void write_pairs_jsonl(std::span<const TrainingPair> pairs, std::ostream& out);

struct DedupMatch {
  std::string root;
  // Test labels whose normalized token multiset is a subset or superset of
  // the root's.
  std::vector<std::string> labels;
};

struct DedupResult {
  std::vector<std::string> kept;
  std::vector<std::string> removed;
  std::vector<DedupMatch> report;
};

// Removes roots whose text::label_tokens overlap those of a test label.
// Labels or roots that normalize to nothing never match. Input order is
// preserved.
DedupResult deduplicate_categories(std::span<const std::string> root_names,
                                   std::span<const std::string> test_labels);

// Applies deduplicate_categories to a graph's roots by display name.
CategoryGraph exclude_overlapping_roots(const CategoryGraph& graph,
                                        std::span<const std::string> test_labels,
                                        DedupResult* result = nullptr);

}  // namespace opentopic

#endif  // OPENTOPIC_DATASET_BUILDER_H_
