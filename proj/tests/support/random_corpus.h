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

// Random category graphs and a brute-force distance oracle for tests.
//
// The oracle works on the raw string records, not on CategoryGraph, and
// enumerates every walk of length <= max_depth from each root without any
// pruning, so it shares no traversal code with the implementation.

#ifndef OPENTOPIC_TESTS_SUPPORT_RANDOM_CORPUS_H_
#define OPENTOPIC_TESTS_SUPPORT_RANDOM_CORPUS_H_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "opentopic/corpus.h"
#include "opentopic/dataset_builder.h"

namespace opentopic::testing {

struct RawCorpus {
  std::vector<std::pair<std::string, std::string>> roots;  // key, name
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::pair<std::string, std::string>> members;
  std::vector<std::string> articles;
};

inline std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline RawCorpus random_raw_corpus(std::mt19937_64& rng, std::size_t max_categories = 50,
                                   std::size_t max_articles = 30) {
  RawCorpus raw;
  const std::size_t n_cat = uniform(rng, 1, max_categories);
  std::vector<std::string> cats;
  for (std::size_t i = 0; i < n_cat; ++i) {
    cats.push_back("c" + std::string(i < 10 ? "0" : "") + std::to_string(i));
  }
  std::vector<std::string> shuffled = cats;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const std::size_t n_roots = uniform(rng, 1, std::min<std::size_t>(n_cat, 6));
  for (std::size_t i = 0; i < n_roots; ++i) {
    raw.roots.emplace_back(shuffled[i], "Root " + shuffled[i]);
  }
  std::set<std::string> universe;
  for (const auto& [k, _] : raw.roots) universe.insert(k);
  const std::size_t n_edges = uniform(rng, 0, 2 * n_cat);
  for (std::size_t i = 0; i < n_edges; ++i) {
    const auto& p = cats[uniform(rng, 0, n_cat - 1)];
    const auto& c = cats[uniform(rng, 0, n_cat - 1)];
    raw.edges.emplace_back(p, c);
    universe.insert(p);
    universe.insert(c);
  }
  const std::vector<std::string> registered(universe.begin(), universe.end());
  const std::size_t n_art = uniform(rng, 1, max_articles);
  for (std::size_t i = 0; i < n_art; ++i) {
    const std::string key = "a" + std::string(i < 10 ? "0" : "") + std::to_string(i);
    raw.articles.push_back(key);
    const std::size_t k = uniform(rng, 0, 3);
    for (std::size_t j = 0; j < k; ++j) {
      raw.members.emplace_back(registered[uniform(rng, 0, registered.size() - 1)], key);
    }
  }
  return raw;
}

inline Corpus to_corpus(const RawCorpus& raw) {
  CorpusBuilder b;
  for (const auto& [k, n] : raw.roots) b.add_root(k, n);
  for (const auto& [p, c] : raw.edges) b.add_edge(p, c);
  for (const auto& [c, a] : raw.members) b.add_membership(c, a);
  for (const auto& a : raw.articles) b.add_article(a, a, "text of article " + a);
  return b.build();
}

// (article key, root key) -> distance
using KeyedDistances = std::map<std::pair<std::string, std::string>, std::uint32_t>;

inline void enumerate_walks(const std::multimap<std::string, std::string>& adj,
                            const std::string& node, std::uint32_t length,
                            std::uint32_t max_depth,
                            std::map<std::string, std::uint32_t>& shortest) {
  auto it = shortest.find(node);
  if (it == shortest.end() || length < it->second) shortest[node] = length;
  if (length == max_depth) return;
  auto [lo, hi] = adj.equal_range(node);
  for (auto e = lo; e != hi; ++e) enumerate_walks(adj, e->second, length + 1, max_depth, shortest);
}

inline KeyedDistances oracle_distances(const RawCorpus& raw, std::uint32_t max_depth) {
  std::multimap<std::string, std::string> adj;
  std::set<std::pair<std::string, std::string>> seen_edges;
  for (const auto& e : raw.edges) {
    if (seen_edges.insert(e).second) adj.insert(e);
  }
  KeyedDistances out;
  for (const auto& [root, _] : raw.roots) {
    std::map<std::string, std::uint32_t> shortest;
    enumerate_walks(adj, root, 0, max_depth, shortest);
    for (const auto& [cat, article] : raw.members) {
      auto it = shortest.find(cat);
      if (it == shortest.end()) continue;
      const std::uint32_t d = it->second + 1;
      auto [slot, inserted] = out.emplace(std::make_pair(article, root), d);
      if (!inserted) slot->second = std::min(slot->second, d);
    }
  }
  return out;
}

// article key -> roots at minimum distance
inline std::map<std::string, std::set<std::string>> oracle_argmin(const KeyedDistances& d) {
  std::map<std::string, std::uint32_t> best;
  for (const auto& [key, dist] : d) {
    auto [it, inserted] = best.emplace(key.first, dist);
    if (!inserted) it->second = std::min(it->second, dist);
  }
  std::map<std::string, std::set<std::string>> out;
  for (const auto& [key, dist] : d) {
    if (dist == best[key.first]) out[key.first].insert(key.second);
  }
  return out;
}

inline KeyedDistances keyed(const Corpus& corpus, const DistanceTable& table) {
  KeyedDistances out;
  for (const DistanceEntry& e : table.entries()) {
    out[{corpus.articles.at(e.article).key, corpus.graph.key(e.root)}] = e.distance;
  }
  return out;
}

}  // namespace opentopic::testing

#endif  // OPENTOPIC_TESTS_SUPPORT_RANDOM_CORPUS_H_
