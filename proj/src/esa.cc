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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "binary_io.h"
#include "opentopic/errors.h"
#include "opentopic/scoring.h"
#include "opentopic/text.h"

namespace opentopic {
namespace {

constexpr std::string_view kEsaMagic = "OTESAIDX";
constexpr std::uint32_t kEsaFormatVersion = 1;

using TermCounts = std::vector<std::pair<std::string, std::uint32_t>>;

TermCounts count_terms(std::string_view text) {
  std::map<std::string, std::uint32_t> counts;
  for (std::string& t : text::index_tokens(text)) ++counts[std::move(t)];
  return {counts.begin(), counts.end()};
}

double idf_value(IdfMode mode, std::size_t n, std::size_t df) {
  const double N = static_cast<double>(n);
  const double d = static_cast<double>(df);
  switch (mode) {
    case IdfMode::kPlain:
      return std::log(N / d) + 1.0;
    case IdfMode::kSmoothed:
    default:
      return std::log((N + 1.0) / (d + 1.0)) + 1.0;
  }
}

}  // namespace

double LabelScores::at(std::string_view label) const {
  for (const Entry& e : entries_) {
    if (e.first == label) return e.second;
  }
  throw std::out_of_range("label not scored: " + std::string(label));
}

double cosine(const ConceptVector& a, const ConceptVector& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [_, w] : a) na += w * w;
  for (const auto& [_, w] : b) nb += w * w;
  if (na == 0.0 || nb == 0.0) return 0.0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      dot += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return dot / std::sqrt(na * nb);
}

EsaIndex EsaIndex::build(const ArticleStore& articles, EsaOptions options) {
  if (articles.empty()) throw ValidationError("cannot build ESA index: no articles");
  const auto all = articles.all();
  const auto n = static_cast<std::ptrdiff_t>(all.size());
  std::vector<TermCounts> per_concept(all.size());

#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    per_concept[i] = count_terms(all[i].title + " " + all[i].text);
  }

  EsaIndex index;
  index.options_ = options;
  for (const Article& a : all) index.concept_keys_.push_back(a.key);

  std::set<std::string_view> vocabulary;
  for (const TermCounts& tc : per_concept) {
    for (const auto& [term, _] : tc) vocabulary.insert(term);
  }
  std::vector<std::uint32_t> df(vocabulary.size(), 0);
  for (std::string_view term : vocabulary) {
    index.terms_.emplace(std::string(term),
                         static_cast<std::uint32_t>(index.terms_.size()));
  }
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> by_term(
      vocabulary.size());
  for (std::size_t c = 0; c < per_concept.size(); ++c) {
    for (const auto& [term, count] : per_concept[c]) {
      by_term[index.terms_.at(term)].emplace_back(static_cast<std::uint32_t>(c), count);
    }
  }

  index.concept_norms_.assign(all.size(), 0.0);
  for (const auto& list : by_term) {
    const double idf = idf_value(options.idf, all.size(), list.size());
    for (const auto& [c, tf] : list) {
      const double w = static_cast<double>(tf) * idf;
      index.postings_.push_back({c, w});
      index.concept_norms_[c] += w * w;
    }
    index.offsets_.push_back(static_cast<std::uint32_t>(index.postings_.size()));
  }
  for (double& norm : index.concept_norms_) norm = std::sqrt(norm);
  return index;
}

std::span<const EsaIndex::Posting> EsaIndex::postings(std::string_view term) const {
  auto it = terms_.find(std::string(term));
  if (it == terms_.end()) return {};
  const std::uint32_t t = it->second;
  return std::span<const Posting>(postings_).subspan(offsets_[t],
                                                     offsets_[t + 1] - offsets_[t]);
}

double EsaIndex::idf(std::string_view term) const {
  const std::size_t df = document_frequency(term);
  if (df == 0) return 0.0;
  return idf_value(options_.idf, concept_count(), df);
}

ConceptVector EsaIndex::project(std::string_view text) const {
  std::unordered_map<std::uint32_t, double> acc;
  for (const std::string& token : text::index_tokens(text)) {
    for (const Posting& p : postings(token)) {
      acc[p.concept_id] += p.weight / concept_norms_[p.concept_id];
    }
  }
  ConceptVector v(acc.begin(), acc.end());
  if (options_.max_concepts != 0 && v.size() > options_.max_concepts) {
    auto heavier = [](const auto& x, const auto& y) {
      return x.second != y.second ? x.second > y.second : x.first < y.first;
    };
    std::nth_element(v.begin(), v.begin() + options_.max_concepts, v.end(), heavier);
    v.resize(options_.max_concepts);
  }
  std::sort(v.begin(), v.end());
  return v;
}

void EsaIndex::save(const std::string& path) const {
  using namespace binary;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(kEsaMagic.data(), kEsaMagic.size());
  put_u32(out, kEsaFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(options_.idf));
  put_u64(out, options_.max_concepts);
  put_u64(out, concept_keys_.size());
  for (std::size_t c = 0; c < concept_keys_.size(); ++c) {
    put_string(out, concept_keys_[c]);
    put_f64(out, concept_norms_[c]);
  }
  std::vector<std::string_view> by_id(terms_.size());
  for (const auto& [term, id] : terms_) by_id[id] = term;
  put_u64(out, by_id.size());
  for (std::size_t t = 0; t < by_id.size(); ++t) {
    put_string(out, by_id[t]);
    put_u64(out, offsets_[t + 1] - offsets_[t]);
    for (std::uint32_t k = offsets_[t]; k < offsets_[t + 1]; ++k) {
      put_u32(out, postings_[k].concept_id);
      put_f64(out, postings_[k].weight);
    }
  }
  out.flush();
  if (!out) throw IoError("write error on " + path);
}

EsaIndex EsaIndex::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  binary::Reader r(in, path);
  r.expect_magic(kEsaMagic);
  if (const auto v = r.u32(); v != kEsaFormatVersion) {
    r.fail("unsupported ESA index version " + std::to_string(v));
  }
  EsaIndex index;
  const std::uint32_t mode = r.u32();
  if (mode > static_cast<std::uint32_t>(IdfMode::kPlain)) r.fail("bad idf mode");
  index.options_.idf = static_cast<IdfMode>(mode);
  index.options_.max_concepts = r.u64();
  const std::uint64_t n = r.u64();
  if (n == 0 || n > UINT32_MAX) r.fail("concept count out of range");
  for (std::uint64_t c = 0; c < n; ++c) {
    index.concept_keys_.push_back(r.string());
    index.concept_norms_.push_back(r.f64());
  }
  const std::uint64_t terms = r.u64();
  for (std::uint64_t t = 0; t < terms; ++t) {
    std::string term = r.string();
    if (!index.terms_.emplace(std::move(term), static_cast<std::uint32_t>(t)).second) {
      r.fail("duplicate term");
    }
    const std::uint64_t count = r.u64();
    if (count > n) r.fail("posting list longer than concept count");
    for (std::uint64_t k = 0; k < count; ++k) {
      Posting p{r.u32(), r.f64()};
      if (p.concept_id >= n || !std::isfinite(p.weight) || p.weight < 0.0) {
        r.fail("corrupt posting");
      }
      index.postings_.push_back(p);
    }
    index.offsets_.push_back(static_cast<std::uint32_t>(index.postings_.size()));
  }
  return index;
}

bool EsaIndex::operator==(const EsaIndex& other) const {
  return options_.idf == other.options_.idf &&
         options_.max_concepts == other.options_.max_concepts &&
         concept_keys_ == other.concept_keys_ &&
         concept_norms_ == other.concept_norms_ && terms_ == other.terms_ &&
         offsets_ == other.offsets_ && postings_ == other.postings_;
}

LabelScores EsaScorer::score(std::string_view text,
                             std::span<const std::string> labels) const {
  const ConceptVector text_vec = index_->project(text);
  std::vector<LabelScores::Entry> out;
  out.reserve(labels.size());
  for (const std::string& label : labels) {
    const double c = cosine(text_vec, index_->project(label));
    out.emplace_back(label, std::clamp(c, 0.0, 1.0));
  }
  return LabelScores(std::move(out));
}

}  // namespace opentopic
