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

// Label-aware scorers. Every backend maps (text, labels) to one relevance
// score in [0, 1] per label, in the caller's label order.

#ifndef OPENTOPIC_SCORING_H_
#define OPENTOPIC_SCORING_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "opentopic/corpus.h"

namespace httplib {
class Client;
}

namespace opentopic {

class LabelScores {
 public:
  using Entry = std::pair<std::string, double>;

  LabelScores() = default;
  explicit LabelScores(std::vector<Entry> entries) : entries_(std::move(entries)) {}

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::span<const Entry> entries() const { return entries_; }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }

  // Throws std::out_of_range for labels that are not present.
  double at(std::string_view label) const;

  bool operator==(const LabelScores&) const = default;

 private:
  std::vector<Entry> entries_;
};

class Scorer {
 public:
  virtual ~Scorer() = default;

  // Result has exactly `labels`, in order, each scored in [0, 1]. Safe to
  // call concurrently.
  virtual LabelScores score(std::string_view text,
                            std::span<const std::string> labels) const = 0;

  virtual std::string kind() const = 0;
  virtual bool ready() const { return true; }
};

// Sparse vector over concept ids, sorted by id.
using ConceptVector = std::vector<std::pair<std::uint32_t, double>>;

double cosine(const ConceptVector& a, const ConceptVector& b);

enum class IdfMode {
  // log((N + 1) / (df + 1)) + 1
  kSmoothed,
  // log(N / df) + 1
  kPlain,
};

struct EsaOptions {
  IdfMode idf = IdfMode::kSmoothed;
  // Projected vectors keep their heaviest concepts only. 0 disables pruning.
  std::size_t max_concepts = 1000;
};

// Explicit semantic analysis over the ingested articles: each article is one
// concept dimension, each term maps to its tf-idf weight in every article
// containing it.
class EsaIndex {
 public:
  struct Posting {
    std::uint32_t concept_id;
    double weight;  // raw tf * idf

    bool operator==(const Posting&) const = default;
  };

  // Tokenizes articles in parallel. Throws ValidationError on an empty store.
  static EsaIndex build(const ArticleStore& articles, EsaOptions options = {});

  std::size_t concept_count() const { return concept_keys_.size(); }
  std::size_t vocabulary_size() const { return terms_.size(); }
  const EsaOptions& options() const { return options_; }

  const std::string& concept_key(std::uint32_t c) const { return concept_keys_.at(c); }
  double concept_norm(std::uint32_t c) const { return concept_norms_.at(c); }

  // Empty span for unknown terms.
  std::span<const Posting> postings(std::string_view term) const;
  std::size_t document_frequency(std::string_view term) const {
    return postings(term).size();
  }
  double idf(std::string_view term) const;

  // Sum over the text's tokens of their length-normalized concept weights,
  // pruned to max_concepts.
  ConceptVector project(std::string_view text) const;

  void save(const std::string& path) const;
  static EsaIndex load(const std::string& path);

  bool operator==(const EsaIndex& other) const;

 private:
  EsaOptions options_;
  std::vector<std::string> concept_keys_;
  std::vector<double> concept_norms_;
  std::unordered_map<std::string, std::uint32_t> terms_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<Posting> postings_;
};

class EsaScorer : public Scorer {
 public:
  explicit EsaScorer(std::shared_ptr<const EsaIndex> index) : index_(std::move(index)) {}

  LabelScores score(std::string_view text,
                    std::span<const std::string> labels) const override;
  std::string kind() const override { return "esa"; }

 private:
  std::shared_ptr<const EsaIndex> index_;
};

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dimension) : dimension_(dimension) {}

  // `token v1 ... vd` per line; a leading `count dim` header line is
  // accepted and skipped.
  static EmbeddingTable load(const std::string& path);

  // Throws ValidationError on dimension mismatch or non-finite values.
  void add(std::string token, std::vector<float> vector);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return index_.size(); }
  const float* find(std::string_view token) const;

  // Mean of the in-vocabulary token vectors; empty when none are known.
  std::vector<double> mean_vector(std::string_view text) const;

 private:
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> data_;
};

class EmbeddingScorer : public Scorer {
 public:
  explicit EmbeddingScorer(std::shared_ptr<const EmbeddingTable> table)
      : table_(std::move(table)) {}

  // (cosine + 1) / 2, or 0.5 when either side has no known tokens.
  LabelScores score(std::string_view text,
                    std::span<const std::string> labels) const override;
  std::string kind() const override { return "embed"; }

 private:
  std::shared_ptr<const EmbeddingTable> table_;
};

struct RemoteOptions {
  std::chrono::milliseconds timeout{10000};
  std::size_t max_in_flight = 8;
};

// Client for an externally hosted entailment model:
//   POST <endpoint>/entail  {"premise": str, "hypotheses": [str]}
//   -> {"scores": [float]}  aligned with hypotheses.
// Labels are sent verbatim as hypotheses.
class RemoteScorer : public Scorer {
 public:
  explicit RemoteScorer(std::string endpoint, RemoteOptions options = {});
  ~RemoteScorer() override;

  // Throws ScorerUnavailable when the server cannot be reached or answers
  // with anything but one in-range score per label.
  LabelScores score(std::string_view text,
                    std::span<const std::string> labels) const override;
  std::string kind() const override { return "remote"; }
  bool ready() const override { return ready_.load(); }

  // Sends an empty request and records whether the server answered
  // correctly.
  bool probe() const;

  const std::string& endpoint() const { return endpoint_; }

 private:
  std::unique_ptr<httplib::Client> acquire() const;
  void release(std::unique_ptr<httplib::Client> client) const;

  std::string endpoint_;
  std::string host_;
  std::string path_;
  RemoteOptions options_;

  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  mutable std::vector<std::unique_ptr<httplib::Client>> idle_;
  mutable std::size_t outstanding_ = 0;
  mutable std::atomic<bool> ready_{false};
};

// Deterministic pseudo-scores: a seeded 64-bit hash of (text, label) mapped
// into [0, 1). Identical on every platform.
class MockScorer : public Scorer {
 public:
  explicit MockScorer(std::uint64_t seed) : seed_(seed) {}

  LabelScores score(std::string_view text,
                    std::span<const std::string> labels) const override;
  std::string kind() const override { return "mock"; }

  static double hash_score(std::uint64_t seed, std::string_view text,
                           std::string_view label);

 private:
  std::uint64_t seed_;
};

}  // namespace opentopic

#endif  // OPENTOPIC_SCORING_H_
