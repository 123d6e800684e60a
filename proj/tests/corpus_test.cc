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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "opentopic/corpus.h"
#include "opentopic/errors.h"
#include "support/random_corpus.h"

using namespace opentopic;
namespace fs = std::filesystem;

namespace {

const std::string kTiny = std::string(OPENTOPIC_FIXTURES) + "/tiny/";

CorpusPaths tiny_paths() {
  return {kTiny + "edges.tsv", kTiny + "members.tsv", kTiny + "articles.jsonl",
          kTiny + "roots.tsv"};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("opentopic_corpus_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = (path / name).string();
    std::ofstream(p) << content;
    return p;
  }
};

}  // namespace

TEST_CASE("fixture corpus loads with the hand-counted shape") {
  Corpus c = load_corpus(tiny_paths());
  CHECK(c.graph.roots().size() == 2);
  CHECK(c.graph.category_count() == 6);
  CHECK(c.graph.edge_count() == 5);
  CHECK(c.articles.size() == 4);
  CHECK(c.graph.membership_count() == 6);

  const CategoryId science = *c.graph.find("science");
  CHECK(c.graph.name(science) == "Science");
  CHECK(c.graph.children(science).size() == 2);
  // Non-root categories are named by their id.
  CHECK(c.graph.name(*c.graph.find("quantum")) == "quantum");
  CHECK(c.articles.at(*c.articles.find("x3")).title == "Newtonian mechanics");
}

TEST_CASE("empty edges file with one root and one member") {
  TempDir dir;
  CorpusPaths p{dir.file("e.tsv", ""), dir.file("m.tsv", "r\ta1\n"),
                dir.file("a.jsonl", R"({"id": "a1", "title": "t", "text": "body"})" "\n"),
                dir.file("r.tsv", "r\tRoot\n")};
  Corpus c = load_corpus(p);
  CHECK(c.graph.edge_count() == 0);
  CHECK(c.graph.roots().size() == 1);
  CHECK(c.graph.members(c.graph.roots()[0]).size() == 1);
}

TEST_CASE("unknown article id in strict mode names the id") {
  TempDir dir;
  CorpusPaths p{dir.file("e.tsv", ""), dir.file("m.tsv", "r\tghost\n"),
                dir.file("a.jsonl", R"({"id": "a1", "text": "body"})" "\n"),
                dir.file("r.tsv", "r\tRoot\n")};
  CHECK_THROWS_WITH_AS(load_corpus(p), doctest::Contains("ghost"), ValidationError);

  SUBCASE("lenient mode drops it with a counted warning") {
    LoadReport report;
    Corpus c = load_corpus(p, LoadOptions{true}, &report);
    CHECK(report.dropped_memberships == 1);
    CHECK(report.warnings.size() == 1);
    CHECK(c.graph.membership_count() == 0);
  }
}

TEST_CASE("membership of an unregistered category is dangling") {
  TempDir dir;
  CorpusPaths p{dir.file("e.tsv", ""), dir.file("m.tsv", "nowhere\ta1\n"),
                dir.file("a.jsonl", R"({"id": "a1", "text": "body"})" "\n"),
                dir.file("r.tsv", "r\tRoot\n")};
  CHECK_THROWS_WITH_AS(load_corpus(p), doctest::Contains("nowhere"), ValidationError);
}

TEST_CASE("malformed lines report file and line number") {
  TempDir dir;
  const auto articles = dir.file("a.jsonl", R"({"id": "a1", "text": "body"})" "\n");
  const auto roots = dir.file("r.tsv", "r\tRoot\n");
  const auto members = dir.file("m.tsv", "");

  SUBCASE("tsv without a tab") {
    CorpusPaths p{dir.file("e.tsv", "r\tc\nbroken line\n"), members, articles, roots};
    try {
      load_corpus(p);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.file() == p.edges);
    }
  }
  SUBCASE("invalid json") {
    CorpusPaths p{dir.file("e.tsv", ""), members, dir.file("bad.jsonl", "{\"id\": 1,\n"),
                  roots};
    CHECK_THROWS_AS(load_corpus(p), ParseError);
  }
  SUBCASE("duplicate article id") {
    CorpusPaths p{dir.file("e.tsv", ""), members,
                  dir.file("dup.jsonl", R"({"id": "a1", "text": "x"})" "\n"
                                        R"({"id": "a1", "text": "y"})" "\n"),
                  roots};
    try {
      load_corpus(p);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("missing file is an I/O error") {
    CorpusPaths p{(dir.path / "missing.tsv").string(), members, articles, roots};
    CHECK_THROWS_AS(load_corpus(p), IoError);
  }
}

TEST_CASE("empty article text") {
  TempDir dir;
  CorpusPaths p{dir.file("e.tsv", ""), dir.file("m.tsv", "r\ta1\n"),
                dir.file("a.jsonl", R"({"id": "a1", "text": "  \n "})" "\n"),
                dir.file("r.tsv", "r\tRoot\n")};
  CHECK_THROWS_AS(load_corpus(p), ValidationError);
  LoadReport report;
  Corpus c = load_corpus(p, LoadOptions{true}, &report);
  CHECK(report.dropped_articles == 1);
  CHECK(report.dropped_memberships == 1);
  CHECK(c.articles.empty());
}

TEST_CASE("numeric article ids are accepted") {
  TempDir dir;
  CorpusPaths p{dir.file("e.tsv", ""), dir.file("m.tsv", "r\t42\n"),
                dir.file("a.jsonl", R"({"id": 42, "text": "body"})" "\n"),
                dir.file("r.tsv", "r\tRoot\n")};
  CHECK(load_corpus(p).articles.find("42").has_value());
}

TEST_CASE("cycles are accepted at load time") {
  CorpusBuilder b;
  b.add_root("a", "A");
  b.add_edge("a", "b");
  b.add_edge("b", "a");
  b.add_edge("b", "b");
  Corpus c = b.build();
  CHECK(c.graph.edge_count() == 3);
}

TEST_CASE("loading is deterministic and independent of line order") {
  Corpus first = load_corpus(tiny_paths());
  Corpus second = load_corpus(tiny_paths());
  CHECK(first == second);

  TempDir dir;
  CorpusPaths shuffled{
      dir.file("e.tsv", "football\tvenues\nscience\tvenues\nsports\tfootball\n"
                        "physics\tquantum\nscience\tphysics\n"),
      dir.file("m.tsv", "physics\tx4\nfootball\tx4\nphysics\tx3\nvenues\tx2\n"
                        "sports\tx1\nquantum\tx1\n"),
      kTiny + "articles.jsonl", kTiny + "roots.tsv"};
  CHECK(load_corpus(shuffled) == first);
}

TEST_CASE("text round trip reproduces random corpora") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    Corpus c = testing::to_corpus(testing::random_raw_corpus(rng));
    TempDir dir;
    std::ostringstream e, m, r, a;
    write_edges(c.graph, e);
    write_members(c, m);
    write_roots(c.graph, r);
    write_articles(c.articles, a);
    CorpusPaths p{dir.file("e.tsv", e.str()), dir.file("m.tsv", m.str()),
                  dir.file("a.jsonl", a.str()), dir.file("r.tsv", r.str())};
    CHECK(load_corpus(p) == c);
  }
}

TEST_CASE("binary cache round trip and version check") {
  TempDir dir;
  Corpus c = load_corpus(tiny_paths());
  const auto path = (dir.path / "corpus.bin").string();
  save_corpus(c, path);
  CHECK(read_corpus(path) == c);

  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  bytes[8] = 99;  // version field follows the 8-byte magic
  const auto bad = dir.file("bad.bin", bytes);
  CHECK_THROWS_WITH_AS(read_corpus(bad), doctest::Contains("version"), ValidationError);
  const auto truncated = dir.file("trunc.bin", bytes.substr(0, 20));
  CHECK_THROWS_AS(read_corpus(truncated), ValidationError);
  CHECK_THROWS_AS(read_corpus((dir.path / "none.bin").string()), IoError);
}

TEST_CASE("filter_roots") {
  CorpusBuilder b;
  b.add_root("l", "List of lists");
  b.add_root("s", "Science");
  b.add_edge("s", "x");
  Corpus c = b.build();

  const std::vector<std::string> prefixes{"List of"};
  CategoryGraph filtered = c.graph.filter_roots(prefixes);
  REQUIRE(filtered.roots().size() == 1);
  CHECK(filtered.name(filtered.roots()[0]) == "Science");
  CHECK(filtered.edge_count() == c.graph.edge_count());
  CHECK(filtered.category_count() == c.graph.category_count());

  CHECK(c.graph.filter_roots({}) == c.graph);
  CHECK(filtered.filter_roots(prefixes) == filtered);

  // Case-sensitive.
  const std::vector<std::string> lower{"list of"};
  CHECK(c.graph.filter_roots(lower).roots().size() == 2);

  const std::vector<std::string> everything{"List of", "Science"};
  CHECK(c.graph.filter_roots(everything).roots().empty());
}
