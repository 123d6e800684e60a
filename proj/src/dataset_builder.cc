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

#include "opentopic/dataset_builder.h"

#include <algorithm>
#include <limits>
#include <ostream>

#include <omp.h>

#include "json.hpp"
#include "opentopic/text.h"

namespace opentopic {
namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

std::uint32_t article_bound(const CategoryGraph& graph) {
  std::uint32_t bound = 0;
  for (std::uint32_t i = 0; i < graph.category_count(); ++i) {
    for (ArticleId a : graph.members(CategoryId{i})) {
      bound = std::max(bound, index_of(a) + 1);
    }
  }
  return bound;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Small portable generator; std::uniform_int_distribution differs across
// standard libraries and would break byte-identical outputs.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound), by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % bound;
  }

 private:
  std::uint64_t state_;
};

// Breadth-first sweep from one root. Scratch buffers are owned by the
// calling thread and restored to their initial state on return.
void sweep_root(const CategoryGraph& graph, CategoryId root,
                std::uint32_t max_depth, std::vector<std::uint32_t>& depth,
                std::vector<std::uint32_t>& article_stamp, std::uint32_t stamp,
                std::vector<DistanceEntry>& out) {
  std::vector<CategoryId> frontier{root};
  std::vector<CategoryId> visited{root};
  depth[index_of(root)] = 0;
  for (std::uint32_t level = 0; !frontier.empty(); ++level) {
    // Nodes are reached in nondecreasing depth, so the first time an article
    // shows up is at its minimum distance.
    for (CategoryId c : frontier) {
      for (ArticleId a : graph.members(c)) {
        if (article_stamp[index_of(a)] == stamp) continue;
        article_stamp[index_of(a)] = stamp;
        out.push_back({a, root, level + 1});
      }
    }
    if (level == max_depth) break;
    std::vector<CategoryId> next;
    for (CategoryId c : frontier) {
      for (CategoryId child : graph.children(c)) {
        if (depth[index_of(child)] != kUnreached) continue;
        depth[index_of(child)] = level + 1;
        next.push_back(child);
        visited.push_back(child);
      }
    }
    frontier = std::move(next);
  }
  for (CategoryId c : visited) depth[index_of(c)] = kUnreached;
}

void dfs_min_depth(const CategoryGraph& graph, CategoryId node,
                   std::uint32_t d, std::uint32_t max_depth,
                   std::vector<std::uint32_t>& best) {
  if (d >= best[index_of(node)]) return;
  best[index_of(node)] = d;
  if (d == max_depth) return;
  for (CategoryId child : graph.children(node)) {
    dfs_min_depth(graph, child, d + 1, max_depth, best);
  }
}

}  // namespace

DistanceTable::DistanceTable(std::vector<DistanceEntry> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const DistanceEntry& x, const DistanceEntry& y) {
              if (x.article != y.article) return x.article < y.article;
              if (x.root != y.root) return x.root < y.root;
              return x.distance < y.distance;
            });
  entries_.erase(std::unique(entries_.begin(), entries_.end(),
                             [](const DistanceEntry& x, const DistanceEntry& y) {
                               return x.article == y.article && x.root == y.root;
                             }),
                 entries_.end());
}

std::span<const DistanceEntry> DistanceTable::for_article(ArticleId article) const {
  auto lo = std::lower_bound(
      entries_.begin(), entries_.end(), article,
      [](const DistanceEntry& e, ArticleId a) { return e.article < a; });
  auto hi = std::upper_bound(
      lo, entries_.end(), article,
      [](ArticleId a, const DistanceEntry& e) { return a < e.article; });
  return {lo, hi};
}

std::optional<std::uint32_t> DistanceTable::distance(ArticleId article,
                                                     CategoryId root) const {
  for (const DistanceEntry& e : for_article(article)) {
    if (e.root == root) return e.distance;
  }
  return std::nullopt;
}

DistanceTable compute_distances(const CategoryGraph& graph,
                                const BuildConfig& config) {
  const auto roots = graph.roots();
  const std::uint32_t n_articles = article_bound(graph);
  std::vector<std::vector<DistanceEntry>> per_root(roots.size());

#pragma omp parallel
  {
    std::vector<std::uint32_t> depth(graph.category_count(), kUnreached);
    std::vector<std::uint32_t> stamp(n_articles, kUnreached);
#pragma omp for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(roots.size()); ++i) {
      sweep_root(graph, roots[i], config.max_depth, depth, stamp,
                 static_cast<std::uint32_t>(i), per_root[i]);
    }
  }

  std::size_t total = 0;
  for (const auto& v : per_root) total += v.size();
  std::vector<DistanceEntry> merged;
  merged.reserve(total);
  for (auto& v : per_root) merged.insert(merged.end(), v.begin(), v.end());
  return DistanceTable(std::move(merged));
}

DistanceTable compute_distances_serial(const CategoryGraph& graph,
                                       const BuildConfig& config) {
  std::vector<DistanceEntry> entries;
  std::vector<std::uint32_t> best(graph.category_count());
  for (CategoryId root : graph.roots()) {
    std::fill(best.begin(), best.end(), kUnreached);
    dfs_min_depth(graph, root, 0, config.max_depth, best);
    for (std::uint32_t t = 0; t < best.size(); ++t) {
      if (best[t] == kUnreached) continue;
      for (ArticleId a : graph.members(CategoryId{t})) {
        entries.push_back({a, root, best[t] + 1});
      }
    }
  }
  return DistanceTable(std::move(entries));
}

std::vector<CategoryId> argmin_roots(const DistanceTable& table, ArticleId article) {
  std::vector<CategoryId> best;
  std::uint32_t best_d = kUnreached;
  for (const DistanceEntry& e : table.for_article(article)) {
    if (e.distance < best_d) {
      best_d = e.distance;
      best.clear();
    }
    if (e.distance == best_d) best.push_back(e.root);
  }
  return best;
}

BuildResult build_training_pairs(const CategoryGraph& graph,
                                 const ArticleStore& articles,
                                 const DistanceTable& table,
                                 const BuildConfig& config) {
  const auto roots = graph.roots();
  const auto n = static_cast<std::ptrdiff_t>(articles.size());
  std::vector<std::vector<TrainingPair>> per_article(articles.size());
  std::vector<BuildStats> per_article_stats(articles.size());
  std::vector<char> is_root(graph.category_count(), 0);
  for (CategoryId r : roots) is_root[index_of(r)] = 1;

#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const ArticleId id{static_cast<std::uint32_t>(i)};
    // Only roots of this graph count; a table computed before roots were
    // filtered out may mention more.
    std::vector<CategoryId> positives;
    std::uint32_t best = kUnreached;
    for (const DistanceEntry& e : table.for_article(id)) {
      if (index_of(e.root) >= is_root.size() || !is_root[index_of(e.root)]) continue;
      if (e.distance < best) {
        best = e.distance;
        positives.clear();
      }
      if (e.distance == best) positives.push_back(e.root);
    }
    if (positives.empty()) continue;

    const Article& article = articles.at(id);
    const std::string premise =
        config.premise_char_cap
            ? text::truncate_at_whitespace(article.text, *config.premise_char_cap)
            : article.text;
    auto make_pair = [&](CategoryId root, int polarity) {
      return TrainingPair{id, root, article.key, premise, graph.name(root), polarity};
    };

    BuildStats& stats = per_article_stats[i];
    std::vector<TrainingPair>& out = per_article[i];
    stats.articles_paired = 1;
    stats.argmin_ties = positives.size() > 1 ? 1 : 0;
    for (CategoryId c : positives) out.push_back(make_pair(c, +1));
    stats.positive_pairs = positives.size();

    std::vector<CategoryId> candidates;
    for (CategoryId c : roots) {
      if (std::find(positives.begin(), positives.end(), c) == positives.end()) {
        candidates.push_back(c);
      }
    }
    if (candidates.empty()) {
      stats.articles_all_roots = 1;
    } else {
      SplitMix rng(splitmix64(config.rng_seed) ^ fnv1a(article.key));
      const std::size_t k =
          std::min<std::size_t>(config.negatives_per_article, candidates.size());
      // Partial Fisher-Yates: the first k slots become a uniform sample
      // without replacement.
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t pick = j + rng.below(candidates.size() - j);
        std::swap(candidates[j], candidates[pick]);
        out.push_back(make_pair(candidates[j], -1));
      }
      stats.negative_pairs = k;
    }
    std::sort(out.begin(), out.end(), [](const TrainingPair& x, const TrainingPair& y) {
      if (x.hypothesis != y.hypothesis) return x.hypothesis < y.hypothesis;
      if (x.polarity != y.polarity) return x.polarity < y.polarity;
      return x.root < y.root;
    });
  }

  // Article ids follow key order, so concatenation is already canonical.
  BuildResult result;
  for (std::size_t i = 0; i < per_article.size(); ++i) {
    const BuildStats& s = per_article_stats[i];
    result.stats.articles_paired += s.articles_paired;
    result.stats.positive_pairs += s.positive_pairs;
    result.stats.negative_pairs += s.negative_pairs;
    result.stats.argmin_ties += s.argmin_ties;
    result.stats.articles_all_roots += s.articles_all_roots;
    for (TrainingPair& p : per_article[i]) result.pairs.push_back(std::move(p));
  }
  return result;
}

void write_pairs_jsonl(std::span<const TrainingPair> pairs, std::ostream& out) {
  for (const TrainingPair& p : pairs) {
    nlohmann::ordered_json obj;
    obj["article_id"] = p.article_key;
    obj["premise"] = p.premise;
    obj["hypothesis"] = p.hypothesis;
    obj["label"] = p.polarity;
    out << obj.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace)
        << '\n';
  }
}

DedupResult deduplicate_categories(std::span<const std::string> root_names,
                                   std::span<const std::string> test_labels) {
  std::vector<std::vector<std::string>> label_sets;
  label_sets.reserve(test_labels.size());
  for (const std::string& l : test_labels) label_sets.push_back(text::label_tokens(l));

  DedupResult result;
  for (const std::string& root : root_names) {
    const std::vector<std::string> root_set = text::label_tokens(root);
    DedupMatch match{root, {}};
    if (!root_set.empty()) {
      for (std::size_t i = 0; i < test_labels.size(); ++i) {
        const auto& ls = label_sets[i];
        if (ls.empty()) continue;
        if (text::multiset_includes(root_set, ls) ||
            text::multiset_includes(ls, root_set)) {
          match.labels.push_back(test_labels[i]);
        }
      }
    }
    if (match.labels.empty()) {
      result.kept.push_back(root);
    } else {
      result.removed.push_back(root);
      result.report.push_back(std::move(match));
    }
  }
  return result;
}

CategoryGraph exclude_overlapping_roots(const CategoryGraph& graph,
                                        std::span<const std::string> test_labels,
                                        DedupResult* result) {
  std::vector<std::string> names;
  for (CategoryId r : graph.roots()) names.push_back(graph.name(r));
  DedupResult dedup = deduplicate_categories(names, test_labels);
  std::vector<std::string> removed = dedup.removed;
  std::sort(removed.begin(), removed.end());
  CategoryGraph filtered = graph.retain_roots([&](CategoryId c) {
    return !std::binary_search(removed.begin(), removed.end(), graph.name(c));
  });
  if (result) *result = std::move(dedup);
  return filtered;
}

}  // namespace opentopic
