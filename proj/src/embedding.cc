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
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "opentopic/errors.h"
#include "opentopic/scoring.h"
#include "opentopic/text.h"

namespace opentopic {
namespace {

bool parse_float(std::string_view s, float& out) {
  // std::from_chars for floating point is available in libstdc++ 11.
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

bool is_count_header(const std::vector<std::string_view>& fields) {
  if (fields.size() != 2) return false;
  return std::all_of(fields.begin(), fields.end(), [](std::string_view f) {
    return !f.empty() && std::all_of(f.begin(), f.end(), [](char c) {
      return c >= '0' && c <= '9';
    });
  });
}

}  // namespace

EmbeddingTable EmbeddingTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (line_no == 1 && is_count_header(fields)) continue;
    if (fields.size() < 2) throw ParseError(path, line_no, "expected token and vector");
    std::vector<float> v;
    v.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      float x;
      if (!parse_float(fields[i], x)) {
        throw ParseError(path, line_no, "bad number '" + std::string(fields[i]) + "'");
      }
      v.push_back(x);
    }
    try {
      table.add(std::string(fields[0]), std::move(v));
    } catch (const ValidationError& e) {
      throw ParseError(path, line_no, e.what());
    }
  }
  if (table.size() == 0) throw ValidationError(path + ": no vectors");
  return table;
}

void EmbeddingTable::add(std::string token, std::vector<float> vector) {
  if (dimension_ == 0) dimension_ = vector.size();
  if (vector.size() != dimension_) {
    throw ValidationError("vector for '" + token + "' has dimension " +
                          std::to_string(vector.size()) + ", expected " +
                          std::to_string(dimension_));
  }
  if (!std::all_of(vector.begin(), vector.end(), [](float x) { return std::isfinite(x); })) {
    throw ValidationError("vector for '" + token + "' is not finite");
  }
  auto [it, inserted] = index_.emplace(std::move(token), data_.size() / dimension_);
  if (!inserted) {
    std::copy(vector.begin(), vector.end(), data_.begin() + it->second * dimension_);
    return;
  }
  data_.insert(data_.end(), vector.begin(), vector.end());
}

const float* EmbeddingTable::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return nullptr;
  return data_.data() + it->second * dimension_;
}

std::vector<double> EmbeddingTable::mean_vector(std::string_view text) const {
  std::vector<double> sum(dimension_, 0.0);
  std::size_t known = 0;
  for (const std::string& token : text::index_tokens(text)) {
    const float* v = find(token);
    if (!v) continue;
    for (std::size_t i = 0; i < dimension_; ++i) sum[i] += v[i];
    ++known;
  }
  if (known == 0) return {};
  for (double& x : sum) x /= static_cast<double>(known);
  return sum;
}

LabelScores EmbeddingScorer::score(std::string_view text,
                                   std::span<const std::string> labels) const {
  const std::vector<double> t = table_->mean_vector(text);
  double tn = 0.0;
  for (double x : t) tn += x * x;

  std::vector<LabelScores::Entry> out;
  out.reserve(labels.size());
  for (const std::string& label : labels) {
    const std::vector<double> l = table_->mean_vector(label);
    double ln = 0.0, dot = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) {
      ln += l[i] * l[i];
      if (!t.empty()) dot += t[i] * l[i];
    }
    double s = 0.5;
    if (tn > 0.0 && ln > 0.0) {
      s = std::clamp((dot / std::sqrt(tn * ln) + 1.0) / 2.0, 0.0, 1.0);
    }
    out.emplace_back(label, s);
  }
  return LabelScores(std::move(out));
}

}  // namespace opentopic
