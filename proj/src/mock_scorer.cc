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

#include "opentopic/scoring.h"

namespace opentopic {
namespace {

constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001B3ULL;

std::uint64_t fnv_bytes(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

double MockScorer::hash_score(std::uint64_t seed, std::string_view text,
                              std::string_view label) {
  char seed_bytes[8];
  for (int i = 0; i < 8; ++i) seed_bytes[i] = static_cast<char>((seed >> (8 * i)) & 0xFF);
  std::uint64_t h = fnv_bytes(kFnvOffset, std::string_view(seed_bytes, 8));
  h = fnv_bytes(h, text);
  // Separator so ("ab", "c") and ("a", "bc") hash differently.
  h = fnv_bytes(h, std::string_view("\xFF", 1));
  h = fnv_bytes(h, label);
  return static_cast<double>(mix(h) >> 11) * 0x1.0p-53;
}

LabelScores MockScorer::score(std::string_view text,
                              std::span<const std::string> labels) const {
  std::vector<LabelScores::Entry> out;
  out.reserve(labels.size());
  for (const std::string& label : labels) {
    out.emplace_back(label, hash_score(seed_, text, label));
  }
  return LabelScores(std::move(out));
}

}  // namespace opentopic
