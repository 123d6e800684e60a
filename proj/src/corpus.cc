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

#include "opentopic/corpus.h"

#include <algorithm>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <set>
#include <unordered_set>

#include "binary_io.h"
#include "json.hpp"
#include "opentopic/errors.h"
#include "opentopic/text.h"

namespace opentopic {

using json = nlohmann::json;

namespace {

constexpr std::string_view kCorpusMagic = "OTCORPUS";

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

// Splits `parent<TAB>child` style lines. Both fields must be non-empty.
std::pair<std::string, std::string> split_pair(std::string_view line,
                                               const std::string& path,
                                               std::size_t line_no) {
  const auto tab = line.find('\t');
  if (tab == std::string_view::npos) {
    throw ParseError(path, line_no, "expected two tab-separated fields");
  }
  std::string_view first = line.substr(0, tab);
  std::string_view second = line.substr(tab + 1);
  if (second.find('\t') != std::string_view::npos) {
    throw ParseError(path, line_no, "expected two tab-separated fields");
  }
  if (first.empty() || second.empty()) {
    throw ParseError(path, line_no, "empty field");
  }
  return {std::string(first), std::string(second)};
}

template <typename Fn>
void for_each_line(const std::string& path, Fn&& fn) {
  std::ifstream in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = strip_cr(line);
    if (view.empty()) continue;
    fn(view, line_no);
  }
  if (in.bad()) throw IoError("read error on " + path);
}

std::vector<std::pair<std::string, std::string>> read_pairs(
    const std::string& path) {
  std::vector<std::pair<std::string, std::string>> out;
  for_each_line(path, [&](std::string_view line, std::size_t line_no) {
    out.push_back(split_pair(line, path, line_no));
  });
  return out;
}

std::string id_to_string(const json& id) {
  if (id.is_string()) return id.get<std::string>();
  if (id.is_number_integer()) return std::to_string(id.get<long long>());
  throw std::invalid_argument("id must be a string or an integer");
}

std::vector<Article> read_articles(const std::string& path) {
  std::vector<Article> out;
  std::unordered_set<std::string> seen;
  for_each_line(path, [&](std::string_view line, std::size_t line_no) {
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(path, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object() || !obj.contains("id") || !obj.contains("text") ||
        !obj["text"].is_string()) {
      throw ParseError(path, line_no, "expected object with \"id\" and \"text\"");
    }
    Article a;
    try {
      a.key = id_to_string(obj["id"]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(path, line_no, e.what());
    }
    if (a.key.empty()) throw ParseError(path, line_no, "empty article id");
    if (obj.contains("title")) {
      if (!obj["title"].is_string()) {
        throw ParseError(path, line_no, "\"title\" must be a string");
      }
      a.title = obj["title"].get<std::string>();
    }
    a.text = obj["text"].get<std::string>();
    if (!seen.insert(a.key).second) {
      throw ParseError(path, line_no, "duplicate article id '" + a.key + "'");
    }
    out.push_back(std::move(a));
  });
  return out;
}

template <typename Id>
std::uint32_t checked_u32(std::size_t n) {
  if (n > UINT32_MAX) throw ValidationError("corpus too large for 32-bit ids");
  return static_cast<std::uint32_t>(n);
}

}  // namespace

std::optional<ArticleId> ArticleStore::find(std::string_view key) const {
  auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<CategoryId> CategoryGraph::find(std::string_view key) const {
  auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const CategoryId> CategoryGraph::children(CategoryId id) const {
  const auto i = index_of(id);
  return std::span<const CategoryId>(children_).subspan(
      child_offsets_.at(i), child_offsets_.at(i + 1) - child_offsets_[i]);
}

std::span<const ArticleId> CategoryGraph::members(CategoryId id) const {
  const auto i = index_of(id);
  return std::span<const ArticleId>(members_).subspan(
      member_offsets_.at(i), member_offsets_.at(i + 1) - member_offsets_[i]);
}

CategoryGraph CategoryGraph::filter_roots(
    std::span<const std::string> exclusion_prefixes) const {
  return retain_roots([&](CategoryId c) {
    const std::string& n = name(c);
    return std::none_of(
        exclusion_prefixes.begin(), exclusion_prefixes.end(),
        [&](const std::string& p) { return !p.empty() && n.starts_with(p); });
  });
}

void CorpusBuilder::add_article(std::string key, std::string title,
                                std::string text) {
  articles_.push_back({std::move(key), std::move(title), std::move(text)});
}

void CorpusBuilder::add_root(std::string key, std::string display_name) {
  roots_.emplace_back(std::move(key), std::move(display_name));
}

void CorpusBuilder::add_edge(std::string parent, std::string child) {
  edges_.emplace_back(std::move(parent), std::move(child));
}

void CorpusBuilder::add_membership(std::string category, std::string article) {
  memberships_.emplace_back(std::move(category), std::move(article));
}

Corpus CorpusBuilder::build(LoadReport* report) const {
  LoadReport local;
  LoadReport& rep = report ? *report : local;
  Corpus corpus;

  // Articles, sorted by key; empty texts are invalid.
  std::vector<Article> articles;
  articles.reserve(articles_.size());
  for (const Article& a : articles_) {
    Article copy{a.key, a.title, text::normalize_whitespace(a.text)};
    if (copy.text.empty()) {
      if (!options_.lenient) {
        throw ValidationError("article '" + a.key + "' has empty text");
      }
      ++rep.dropped_articles;
      rep.warnings.push_back("dropped empty article '" + a.key + "'");
      continue;
    }
    articles.push_back(std::move(copy));
  }
  std::sort(articles.begin(), articles.end(),
            [](const Article& x, const Article& y) { return x.key < y.key; });
  for (std::size_t i = 1; i < articles.size(); ++i) {
    if (articles[i].key == articles[i - 1].key) {
      throw ValidationError("duplicate article id '" + articles[i].key + "'");
    }
  }
  ArticleStore& store = corpus.articles;
  checked_u32<ArticleId>(articles.size());
  store.articles_ = std::move(articles);
  for (std::size_t i = 0; i < store.articles_.size(); ++i) {
    store.index_.emplace(store.articles_[i].key,
                         ArticleId{static_cast<std::uint32_t>(i)});
  }

  // Category universe: roots plus every edge endpoint.
  std::map<std::string, std::string> names;
  for (const auto& [key, display] : roots_) {
    auto [it, inserted] = names.emplace(key, display);
    if (!inserted && it->second != display) {
      throw ValidationError("root '" + key + "' listed with two names");
    }
  }
  for (const auto& [parent, child] : edges_) {
    names.emplace(parent, parent);
    names.emplace(child, child);
  }

  CategoryGraph& g = corpus.graph;
  checked_u32<CategoryId>(names.size());
  for (auto& [key, display] : names) {
    g.index_.emplace(key, CategoryId{static_cast<std::uint32_t>(g.keys_.size())});
    g.keys_.push_back(key);
    g.names_.push_back(display);
  }
  const std::size_t n = g.keys_.size();

  std::unordered_set<std::uint32_t> root_seen;
  for (const auto& [key, display] : roots_) {
    CategoryId id = g.index_.at(key);
    if (root_seen.insert(index_of(id)).second) g.roots_.push_back(id);
  }

  std::vector<std::vector<CategoryId>> adjacency(n);
  for (const auto& [parent, child] : edges_) {
    adjacency[index_of(g.index_.at(parent))].push_back(g.index_.at(child));
  }
  for (auto& list : adjacency) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    g.children_.insert(g.children_.end(), list.begin(), list.end());
    g.child_offsets_.push_back(static_cast<std::uint32_t>(g.children_.size()));
  }

  std::vector<std::vector<ArticleId>> membership(n);
  for (const auto& [category, article] : memberships_) {
    auto c = g.find(category);
    auto a = store.find(article);
    if (!c || !a) {
      std::string what = !c ? "unknown category id '" + category + "'"
                            : "unknown article id '" + article + "'";
      if (!options_.lenient) {
        throw ValidationError("membership " + category + " -> " + article +
                              ": " + what);
      }
      ++rep.dropped_memberships;
      rep.warnings.push_back("dropped membership " + category + " -> " +
                             article + ": " + what);
      continue;
    }
    membership[index_of(*c)].push_back(*a);
  }
  for (auto& list : membership) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    g.members_.insert(g.members_.end(), list.begin(), list.end());
    g.member_offsets_.push_back(static_cast<std::uint32_t>(g.members_.size()));
  }
  return corpus;
}

Corpus load_corpus(const CorpusPaths& paths, LoadOptions options,
                   LoadReport* report) {
  auto articles_future =
      std::async(std::launch::async, [&] { return read_articles(paths.articles); });

  CorpusBuilder builder(options);
  std::vector<std::pair<std::string, std::string>> roots, edges, members;
  try {
    roots = read_pairs(paths.roots);
    edges = read_pairs(paths.edges);
    members = read_pairs(paths.members);
  } catch (...) {
    // Join the reader before propagating.
    articles_future.wait();
    throw;
  }
  for (auto& [key, name] : roots) builder.add_root(std::move(key), std::move(name));
  for (auto& [p, c] : edges) builder.add_edge(std::move(p), std::move(c));
  for (auto& [c, a] : members) builder.add_membership(std::move(c), std::move(a));
  for (Article& a : articles_future.get()) {
    builder.add_article(std::move(a.key), std::move(a.title), std::move(a.text));
  }
  return builder.build(report);
}

void write_edges(const CategoryGraph& graph, std::ostream& out) {
  for (std::uint32_t i = 0; i < graph.category_count(); ++i) {
    CategoryId parent{i};
    for (CategoryId child : graph.children(parent)) {
      out << graph.key(parent) << '\t' << graph.key(child) << '\n';
    }
  }
}

void write_members(const Corpus& corpus, std::ostream& out) {
  const CategoryGraph& g = corpus.graph;
  for (std::uint32_t i = 0; i < g.category_count(); ++i) {
    CategoryId c{i};
    for (ArticleId a : g.members(c)) {
      out << g.key(c) << '\t' << corpus.articles.at(a).key << '\n';
    }
  }
}

void write_roots(const CategoryGraph& graph, std::ostream& out) {
  for (CategoryId r : graph.roots()) {
    out << graph.key(r) << '\t' << graph.name(r) << '\n';
  }
}

void write_articles(const ArticleStore& articles, std::ostream& out) {
  for (const Article& a : articles.all()) {
    json obj = {{"id", a.key}, {"title", a.title}, {"text", a.text}};
    out << obj.dump() << '\n';
  }
}

struct CorpusCodec {
  static void save(const Corpus& corpus, std::ostream& out) {
    using namespace binary;
    out.write(kCorpusMagic.data(), kCorpusMagic.size());
    put_u32(out, kCorpusFormatVersion);

    const auto& articles = corpus.articles.articles_;
    put_u64(out, articles.size());
    for (const Article& a : articles) {
      put_string(out, a.key);
      put_string(out, a.title);
      put_string(out, a.text);
    }

    const CategoryGraph& g = corpus.graph;
    put_u64(out, g.keys_.size());
    for (std::size_t i = 0; i < g.keys_.size(); ++i) {
      put_string(out, g.keys_[i]);
      put_string(out, g.names_[i]);
    }
    put_u64(out, g.roots_.size());
    for (CategoryId r : g.roots_) put_u32(out, index_of(r));
    put_u64(out, g.children_.size());
    for (std::uint32_t off : g.child_offsets_) put_u32(out, off);
    for (CategoryId c : g.children_) put_u32(out, index_of(c));
    put_u64(out, g.members_.size());
    for (std::uint32_t off : g.member_offsets_) put_u32(out, off);
    for (ArticleId a : g.members_) put_u32(out, index_of(a));
  }

  static Corpus load(std::istream& in, const std::string& path) {
    binary::Reader r(in, path);
    r.expect_magic(kCorpusMagic);
    const std::uint32_t version = r.u32();
    if (version != kCorpusFormatVersion) {
      r.fail("unsupported corpus format version " + std::to_string(version));
    }
    Corpus corpus;
    ArticleStore& store = corpus.articles;
    const std::uint64_t article_count = r.u64();
    if (article_count > UINT32_MAX) r.fail("article count out of range");
    store.articles_.reserve(article_count);
    for (std::uint64_t i = 0; i < article_count; ++i) {
      Article a;
      a.key = r.string();
      a.title = r.string();
      a.text = r.string();
      if (!store.index_.emplace(a.key, ArticleId{static_cast<std::uint32_t>(i)}).second) {
        r.fail("duplicate article id");
      }
      store.articles_.push_back(std::move(a));
    }

    CategoryGraph& g = corpus.graph;
    const std::uint64_t n = r.u64();
    if (n > UINT32_MAX) r.fail("category count out of range");
    for (std::uint64_t i = 0; i < n; ++i) {
      std::string key = r.string();
      std::string name = r.string();
      if (!g.index_.emplace(key, CategoryId{static_cast<std::uint32_t>(i)}).second) {
        r.fail("duplicate category id");
      }
      g.keys_.push_back(std::move(key));
      g.names_.push_back(std::move(name));
    }
    auto read_category = [&] {
      std::uint32_t v = r.u32();
      if (v >= n) r.fail("category index out of range");
      return CategoryId{v};
    };
    const std::uint64_t root_count = r.u64();
    if (root_count > n) r.fail("root count out of range");
    for (std::uint64_t i = 0; i < root_count; ++i) g.roots_.push_back(read_category());

    auto read_offsets = [&](std::vector<std::uint32_t>& offsets, std::uint64_t total) {
      offsets.assign(n + 1, 0);
      for (auto& off : offsets) off = r.u32();
      if (offsets.front() != 0 || offsets.back() != total ||
          !std::is_sorted(offsets.begin(), offsets.end())) {
        r.fail("corrupt offset table");
      }
    };
    const std::uint64_t edge_count = r.u64();
    read_offsets(g.child_offsets_, edge_count);
    for (std::uint64_t i = 0; i < edge_count; ++i) g.children_.push_back(read_category());
    const std::uint64_t member_count = r.u64();
    read_offsets(g.member_offsets_, member_count);
    for (std::uint64_t i = 0; i < member_count; ++i) {
      std::uint32_t v = r.u32();
      if (v >= article_count) r.fail("article index out of range");
      g.members_.push_back(ArticleId{v});
    }
    return corpus;
  }
};

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  CorpusCodec::save(corpus, out);
  out.flush();
  if (!out) throw IoError("write error on " + path);
}

Corpus read_corpus(const std::string& path) {
  std::ifstream in = open_input(path);
  return CorpusCodec::load(in, path);
}

}  // namespace opentopic
