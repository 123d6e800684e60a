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

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "doctest.h"
#include "opentopic/dataset_builder.h"
#include "opentopic/errors.h"
#include "support/random_corpus.h"

using namespace opentopic;
using opentopic::testing::keyed;
using opentopic::testing::oracle_argmin;
using opentopic::testing::oracle_distances;
using opentopic::testing::random_raw_corpus;
using opentopic::testing::to_corpus;

namespace {

const std::string kTiny = std::string(OPENTOPIC_FIXTURES) + "/tiny/";

Corpus tiny() {
  return load_corpus({kTiny + "edges.tsv", kTiny + "members.tsv",
                      kTiny + "articles.jsonl", kTiny + "roots.tsv"});
}

std::string jsonl(const BuildResult& r) {
  std::ostringstream out;
  write_pairs_jsonl(r.pairs, out);
  return out.str();
}

BuildResult build(const Corpus& c, const BuildConfig& config) {
  return build_training_pairs(c.graph, c.articles, compute_distances(c.graph, config),
                              config);
}

}  // namespace

TEST_CASE("fixture distances and pairs match the hand derivation") {
  Corpus c = tiny();
  BuildConfig config;
  DistanceTable table = compute_distances(c.graph, config);

  auto d = [&](const char* article, const char* root) {
    return table.distance(*c.articles.find(article), *c.graph.find(root));
  };
  CHECK(d("x1", "science") == 3u);
  CHECK(d("x1", "sports") == 1u);
  CHECK(d("x2", "science") == 2u);
  CHECK(d("x2", "sports") == 3u);
  CHECK(d("x3", "science") == 2u);
  CHECK_FALSE(d("x3", "sports").has_value());
  CHECK(d("x4", "science") == 2u);
  CHECK(d("x4", "sports") == 2u);

  std::ifstream in(kTiny + "expected_stats.json");
  const auto expected = nlohmann::json::parse(in);
  BuildResult r = build_training_pairs(c.graph, c.articles, table, config);
  CHECK(r.stats.articles_paired == expected["articles_paired"]);
  CHECK(r.stats.positive_pairs == expected["positive_pairs"]);
  CHECK(r.stats.negative_pairs == expected["negative_pairs"]);
  CHECK(r.stats.argmin_ties == expected["argmin_ties"]);
  CHECK(r.stats.articles_all_roots == expected["articles_all_roots"]);

  REQUIRE(r.pairs.size() == expected["pairs"].size());
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    CHECK(r.pairs[i].article_key == expected["pairs"][i][0]);
    CHECK(r.pairs[i].hypothesis == expected["pairs"][i][1]);
    CHECK(r.pairs[i].polarity == expected["pairs"][i][2]);
  }
}

TEST_CASE("depth bound zero only reaches direct members of a root") {
  Corpus c = tiny();
  BuildConfig config;
  config.max_depth = 0;
  DistanceTable table = compute_distances(c.graph, config);
  REQUIRE(table.size() == 1);
  CHECK(table.entries()[0].distance == 1);
  CHECK(c.articles.at(table.entries()[0].article).key == "x1");
}

TEST_CASE("cycles terminate and keep minimum depth") {
  CorpusBuilder b;
  b.add_root("a", "A");
  b.add_edge("a", "b");
  b.add_edge("b", "c");
  b.add_edge("c", "a");
  b.add_edge("c", "c");
  b.add_edge("a", "c");
  b.add_membership("c", "x");
  b.add_article("x", "", "text");
  Corpus c = b.build();
  BuildConfig config;
  config.max_depth = 3;
  DistanceTable table = compute_distances(c.graph, config);
  CHECK(table.distance(*c.articles.find("x"), *c.graph.find("a")) == 2u);
  CHECK(compute_distances_serial(c.graph, config) == table);
}

TEST_CASE("a shallow path found late in DFS still wins") {
  // DFS from r visits r->a->b->t first (depth 3) and r->t (depth 1) later;
  // with max_depth 2, t's children are reachable only through the short path.
  CorpusBuilder b;
  b.add_root("r", "R");
  b.add_edge("r", "a");
  b.add_edge("a", "b");
  b.add_edge("b", "t");
  b.add_edge("r", "t");
  b.add_edge("t", "u");
  b.add_membership("u", "x");
  b.add_article("x", "", "text");
  Corpus c = b.build();
  BuildConfig config;
  config.max_depth = 2;
  DistanceTable serial = compute_distances_serial(c.graph, config);
  CHECK(serial.distance(*c.articles.find("x"), *c.graph.find("r")) == 3u);
  CHECK(compute_distances(c.graph, config) == serial);
}

TEST_CASE("random graphs match the walk-enumeration oracle") {
  std::mt19937_64 rng(20260101);
  for (int trial = 0; trial < 60; ++trial) {
    const auto raw = random_raw_corpus(rng);
    const Corpus c = to_corpus(raw);
    BuildConfig config;
    config.max_depth = static_cast<std::uint32_t>(trial % 4);
    CAPTURE(trial);
    const DistanceTable table = compute_distances(c.graph, config);
    const auto expected = oracle_distances(raw, config.max_depth);
    CHECK(keyed(c, table) == expected);
    CHECK(compute_distances_serial(c.graph, config) == table);

    const auto argmin = oracle_argmin(expected);
    for (const Article& a : c.articles.all()) {
      std::set<std::string> got;
      for (CategoryId r : argmin_roots(table, *c.articles.find(a.key))) {
        got.insert(c.graph.key(r));
      }
      auto it = argmin.find(a.key);
      CHECK(got == (it == argmin.end() ? std::set<std::string>{} : it->second));
    }
  }
}

TEST_CASE("pair invariants on random corpora") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const Corpus c = to_corpus(random_raw_corpus(rng));
    BuildConfig config;
    config.max_depth = static_cast<std::uint32_t>(trial % 4);
    config.negatives_per_article = 1 + trial % 3;
    const DistanceTable table = compute_distances(c.graph, config);
    for (const DistanceEntry& e : table.entries()) {
      CHECK(e.distance >= 1);
      CHECK(e.distance <= config.max_depth + 1);
    }
    const BuildResult r = build_training_pairs(c.graph, c.articles, table, config);
    std::map<std::string, std::set<std::string>> pos, neg;
    for (const TrainingPair& p : r.pairs) {
      (p.polarity > 0 ? pos : neg)[p.article_key].insert(p.hypothesis);
    }
    for (const auto& [article, hyps] : neg) {
      for (const auto& h : hyps) CHECK(pos[article].count(h) == 0);
      CHECK(hyps.size() <= config.negatives_per_article);
    }
    CHECK(jsonl(r) == jsonl(build_training_pairs(c.graph, c.articles, table, config)));
  }
}

TEST_CASE("negatives are exactly min(k, |S - P|) and cover S - P when k is large") {
  CorpusBuilder b;
  for (int i = 0; i < 5; ++i) b.add_root("r" + std::to_string(i), "Root " + std::to_string(i));
  b.add_membership("r0", "x");
  b.add_article("x", "", "text");
  Corpus c = b.build();
  BuildConfig config;
  config.negatives_per_article = 2;
  BuildResult r = build(c, config);
  CHECK(r.stats.positive_pairs == 1);
  CHECK(r.stats.negative_pairs == 2);
  config.negatives_per_article = 10;
  r = build(c, config);
  CHECK(r.stats.negative_pairs == 4);
}

TEST_CASE("seed changes the negative sample but not the positives") {
  CorpusBuilder b;
  for (int i = 0; i < 8; ++i) b.add_root("r" + std::to_string(i), "Root " + std::to_string(i));
  for (int i = 0; i < 20; ++i) {
    b.add_membership("r0", "x" + std::to_string(i));
    b.add_article("x" + std::to_string(i), "", "text");
  }
  Corpus c = b.build();
  BuildConfig config;
  const BuildResult one = build(c, config);
  config.rng_seed = 18;
  const BuildResult two = build(c, config);
  CHECK(jsonl(one) != jsonl(two));
  auto positives = [](const BuildResult& r) {
    std::vector<TrainingPair> out;
    for (const auto& p : r.pairs) if (p.polarity > 0) out.push_back(p);
    return out;
  };
  CHECK(positives(one) == positives(two));
}

TEST_CASE("unreachable articles and empty roots produce nothing") {
  CorpusBuilder b;
  b.add_root("r", "R");
  b.add_article("x", "", "text");
  Corpus c = b.build();
  BuildResult r = build(c, BuildConfig{});
  CHECK(r.pairs.empty());
  CHECK(r.stats.articles_paired == 0);

  CorpusBuilder none;
  none.add_article("x", "", "text");
  Corpus empty = none.build();
  CHECK(build(empty, BuildConfig{}).pairs.empty());
}

TEST_CASE("premise truncation") {
  CorpusBuilder b;
  b.add_root("r", "R");
  b.add_membership("r", "x");
  b.add_article("x", "", "alpha beta gamma delta");
  Corpus c = b.build();
  BuildConfig config;
  config.premise_char_cap = 12;
  CHECK(build(c, config).pairs.at(0).premise == "alpha beta");
  config.premise_char_cap = std::nullopt;
  CHECK(build(c, config).pairs.at(0).premise == "alpha beta gamma delta");
}

TEST_CASE("jsonl output uses the pair schema") {
  Corpus c = tiny();
  std::istringstream lines(jsonl(build(c, BuildConfig{})));
  std::string line;
  std::getline(lines, line);
  const auto j = nlohmann::json::parse(line);
  CHECK(j["article_id"] == "x1");
  CHECK(j["hypothesis"] == "Science");
  CHECK(j["label"] == -1);
  CHECK(j["premise"].get<std::string>().rfind("A thought", 0) == 0);
}

TEST_CASE("filtered roots are excluded from pairs even if the table has them") {
  Corpus c = tiny();
  BuildConfig config;
  DistanceTable full = compute_distances(c.graph, config);
  const std::vector<std::string> prefixes{"Sports"};
  CategoryGraph g = c.graph.filter_roots(prefixes);
  BuildResult r = build_training_pairs(g, c.articles, full, config);
  for (const auto& p : r.pairs) CHECK(p.hypothesis == "Science");
  // x1 is closer to Sports, but Science is the only remaining root.
  CHECK(r.stats.articles_paired == 4);
}

TEST_CASE("dedup fixture") {
  std::ifstream in(std::string(OPENTOPIC_FIXTURES) + "/dedup_pairs.tsv");
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string label, root, expected;
    std::getline(fields, label, '\t');
    std::getline(fields, root, '\t');
    std::getline(fields, expected, '\t');
    const std::vector<std::string> roots{root}, labels{label};
    DedupResult r = deduplicate_categories(roots, labels);
    CAPTURE(line);
    CHECK(r.removed.size() == static_cast<std::size_t>(std::stoi(expected)));
    ++rows;
  }
  CHECK(rows == 20);
}

TEST_CASE("dedup keeps input order and reports matches") {
  const std::vector<std::string> roots{"Music", "Chemistry", "Sports", "Stamps"};
  const std::vector<std::string> labels{"Entertainment & Music", "Sports"};
  DedupResult r = deduplicate_categories(roots, labels);
  CHECK(r.kept == std::vector<std::string>{"Chemistry", "Stamps"});
  CHECK(r.removed == std::vector<std::string>{"Music", "Sports"});
  REQUIRE(r.report.size() == 2);
  CHECK(r.report[0].root == "Music");
  CHECK(r.report[0].labels == std::vector<std::string>{"Entertainment & Music"});

  CHECK(deduplicate_categories(roots, {}).kept == roots);
}

TEST_CASE("exclude_overlapping_roots filters by display name") {
  Corpus c = tiny();
  const std::vector<std::string> labels{"Sport"};
  DedupResult result;
  CategoryGraph g = exclude_overlapping_roots(c.graph, labels, &result);
  REQUIRE(g.roots().size() == 1);
  CHECK(g.name(g.roots()[0]) == "Science");
  CHECK(result.removed == std::vector<std::string>{"Sports"});
}
