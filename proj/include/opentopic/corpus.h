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

// In-memory category graph and article store.
//
// String ids live only at the I/O boundary; everything inside uses dense
// integer ids assigned in sorted key order, so the ids depend only on the
// content and not on input line order. Both containers are immutable
// once built and may be shared across threads.

#ifndef OPENTOPIC_CORPUS_H_
#define OPENTOPIC_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace opentopic {

enum class CategoryId : std::uint32_t {};
enum class ArticleId : std::uint32_t {};

constexpr std::uint32_t index_of(CategoryId id) {
  return static_cast<std::uint32_t>(id);
}
constexpr std::uint32_t index_of(ArticleId id) {
  return static_cast<std::uint32_t>(id);
}

struct Article {
  std::string key;
  std::string title;
  std::string text;

  bool operator==(const Article&) const = default;
};

class ArticleStore {
 public:
  std::size_t size() const { return articles_.size(); }
  bool empty() const { return articles_.empty(); }

  const Article& at(ArticleId id) const { return articles_.at(index_of(id)); }
  std::optional<ArticleId> find(std::string_view key) const;

  std::span<const Article> all() const { return articles_; }

  bool operator==(const ArticleStore& other) const {
    return articles_ == other.articles_;
  }

 private:
  friend class CorpusBuilder;
  friend struct CorpusCodec;

  std::vector<Article> articles_;
  std::unordered_map<std::string, ArticleId> index_;
};

class CategoryGraph {
 public:
  std::size_t category_count() const { return keys_.size(); }
  std::size_t edge_count() const { return children_.size(); }
  std::size_t membership_count() const { return members_.size(); }

  // Top-level set, in roots-file order.
  std::span<const CategoryId> roots() const { return roots_; }

  const std::string& key(CategoryId id) const { return keys_.at(index_of(id)); }
  const std::string& name(CategoryId id) const {
    return names_.at(index_of(id));
  }
  std::optional<CategoryId> find(std::string_view key) const;

  // Sorted, duplicate free.
  std::span<const CategoryId> children(CategoryId id) const;
  std::span<const ArticleId> members(CategoryId id) const;

  // Removes the roots whose display name starts with any of the prefixes
  // (case-sensitive). Everything else is kept as is.
  CategoryGraph filter_roots(std::span<const std::string> exclusion_prefixes) const;

  // Keeps only roots for which `keep` is true.
  template <typename Pred>
  CategoryGraph retain_roots(Pred keep) const {
    CategoryGraph out = *this;
    std::erase_if(out.roots_, [&](CategoryId c) { return !keep(c); });
    return out;
  }

  bool operator==(const CategoryGraph& other) const {
    return keys_ == other.keys_ && names_ == other.names_ &&
           roots_ == other.roots_ && child_offsets_ == other.child_offsets_ &&
           children_ == other.children_ &&
           member_offsets_ == other.member_offsets_ &&
           members_ == other.members_;
  }

 private:
  friend class CorpusBuilder;
  friend struct CorpusCodec;

  std::vector<std::string> keys_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, CategoryId> index_;
  std::vector<CategoryId> roots_;
  // CSR adjacency, parent -> children.
  std::vector<std::uint32_t> child_offsets_{0};
  std::vector<CategoryId> children_;
  // CSR memberships, category -> articles.
  std::vector<std::uint32_t> member_offsets_{0};
  std::vector<ArticleId> members_;
};

struct Corpus {
  CategoryGraph graph;
  ArticleStore articles;

  bool operator==(const Corpus&) const = default;
};

struct LoadReport {
  std::size_t dropped_memberships = 0;
  std::size_t dropped_articles = 0;
  std::vector<std::string> warnings;
};

struct LoadOptions {
  // Drop dangling references and empty articles instead of failing.
  bool lenient = false;
};

// Accumulates string-keyed records and produces a validated Corpus.
// Categories are registered by roots and edges; members must reference
// a registered category and an existing article.
class CorpusBuilder {
 public:
  explicit CorpusBuilder(LoadOptions options = {}) : options_(options) {}

  void add_article(std::string key, std::string title, std::string text);
  void add_root(std::string key, std::string display_name);
  void add_edge(std::string parent, std::string child);
  void add_membership(std::string category, std::string article);

  // Throws ValidationError on duplicate ids or conflicting root names. Strict
  // mode also rejects dangling references and empty article texts.
  Corpus build(LoadReport* report = nullptr) const;

 private:
  LoadOptions options_;
  std::vector<Article> articles_;
  std::vector<std::pair<std::string, std::string>> roots_;
  std::vector<std::pair<std::string, std::string>> edges_;
  std::vector<std::pair<std::string, std::string>> memberships_;
};

struct CorpusPaths {
  std::string edges;
  std::string members;
  std::string articles;
  std::string roots;
};

// Parses the four TSV/JSONL inputs. The articles file is parsed on a second
// thread while the TSV files are read.
Corpus load_corpus(const CorpusPaths& paths, LoadOptions options = {},
                   LoadReport* report = nullptr);

// Writes the text formats back out; load_corpus on the result reproduces
// an equal corpus.
void write_edges(const CategoryGraph& graph, std::ostream& out);
void write_members(const Corpus& corpus, std::ostream& out);
void write_roots(const CategoryGraph& graph, std::ostream& out);
void write_articles(const ArticleStore& articles, std::ostream& out);

// Versioned binary cache.
inline constexpr std::uint32_t kCorpusFormatVersion = 1;
void save_corpus(const Corpus& corpus, const std::string& path);
Corpus read_corpus(const std::string& path);

}  // namespace opentopic

#endif  // OPENTOPIC_CORPUS_H_
