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

#include "opentopic/text.h"

#include <algorithm>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace opentopic::text {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool has_vowel(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return is_vowel(c) || c == 'y'; });
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

const std::unordered_set<std::string_view>& stopwords() {
  static const std::unordered_set<std::string_view> kWords = {
      "a",       "about",  "above", "after", "again",   "against", "all",
      "am",      "an",     "and",   "any",   "are",     "as",      "at",
      "be",      "been",   "before", "being", "below",  "between", "both",
      "but",     "by",     "can",   "could", "did",     "do",      "does",
      "doing",   "down",   "during", "each", "etc",     "few",     "for",
      "from",    "further", "had",  "has",   "have",    "having",  "he",
      "her",     "here",   "hers",  "him",   "his",     "how",     "i",
      "if",      "in",     "into",  "is",    "it",      "its",     "itself",
      "just",    "me",     "more",  "most",  "my",      "no",      "nor",
      "not",     "now",    "of",    "off",   "on",      "once",    "only",
      "or",      "other",  "our",   "ours",  "out",     "over",    "own",
      "same",    "she",    "should", "so",   "some",    "such",    "than",
      "that",    "the",    "their", "theirs", "them",   "then",    "there",
      "these",   "they",   "this",  "those", "through", "to",      "too",
      "under",   "until",  "up",    "very",  "vs",      "was",     "we",
      "were",    "what",   "when",  "where", "which",   "while",   "who",
      "whom",    "why",    "will",  "with",  "would",   "you",     "your",
      "yours",
  };
  return kWords;
}

// Irregular forms and words the suffix rules would mangle. A value equal to
// the key pins the word as its own lemma.
const std::unordered_map<std::string_view, std::string_view>& exceptions() {
  static const std::unordered_map<std::string_view, std::string_view> kMap = {
      {"children", "child"},   {"people", "person"},   {"men", "man"},
      {"women", "woman"},      {"feet", "foot"},       {"teeth", "tooth"},
      {"mice", "mouse"},       {"geese", "goose"},     {"lives", "life"},
      {"wives", "wife"},       {"knives", "knife"},    {"leaves", "leaf"},
      {"halves", "half"},      {"wolves", "wolf"},     {"shelves", "shelf"},
      {"criteria", "criterion"}, {"phenomena", "phenomenon"},
      {"analyses", "analysis"}, {"theses", "thesis"},  {"crises", "crisis"},
      {"indices", "index"},    {"movies", "movie"},    {"cookies", "cookie"},
      {"pies", "pie"},         {"ties", "tie"},        {"lies", "lie"},
      {"zombies", "zombie"},   {"calories", "calorie"}, {"shoes", "shoe"},
      {"toes", "toe"},         {"news", "news"},       {"series", "series"},
      {"species", "species"},  {"united", "united"},   {"need", "need"},
      {"seed", "seed"},        {"speed", "speed"},     {"feed", "feed"},
      {"hundred", "hundred"},  {"string", "string"},   {"spring", "spring"},
      {"morning", "morning"},  {"evening", "evening"}, {"building", "building"},
      {"wedding", "wedding"},  {"ceiling", "ceiling"}, {"clothing", "clothing"},
      {"nothing", "nothing"},  {"something", "something"},
      {"everything", "everything"}, {"anything", "anything"},
      {"during", "during"},    {"gas", "gas"},         {"lens", "lens"},
      {"bias", "bias"},        {"atlas", "atlas"},     {"canvas", "canvas"},
  };
  return kMap;
}

bool undoubles(std::string_view stem) {
  if (stem.size() < 3) return false;
  const char last = stem.back();
  return last == stem[stem.size() - 2] && !is_vowel(last) && last != 'l' &&
         last != 's' && last != 'z';
}

// Porter-style cleanup after removing -ing / -ed.
std::string finish_verb_stem(std::string stem) {
  if (undoubles(stem)) {
    stem.pop_back();
  } else if (ends_with(stem, "at") || ends_with(stem, "iz") ||
             ends_with(stem, "bl")) {
    stem.push_back('e');
  }
  return stem;
}

}  // namespace

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string normalize_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> words;
  std::string current;
  for (char c : s) {
    if (is_word_byte(static_cast<unsigned char>(c))) {
      current.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

bool is_stopword(std::string_view lowercase_word) {
  return stopwords().count(lowercase_word) > 0;
}

std::vector<std::string> index_tokens(std::string_view s) {
  std::vector<std::string> words = split_words(s);
  std::erase_if(words, [](const std::string& w) {
    return w.size() < 2 || is_stopword(w);
  });
  return words;
}

std::string lemmatize(std::string_view word) {
  if (auto it = exceptions().find(word); it != exceptions().end()) {
    return std::string(it->second);
  }
  std::string w(word);
  if (w.size() <= 3) return w;

  // Nouns ending in -ics, -ss, -us, -is are already singular.
  if (ends_with(w, "ics") || ends_with(w, "ss") || ends_with(w, "us") ||
      ends_with(w, "is")) {
    return w;
  }
  if (ends_with(w, "ies") && w.size() > 4) {
    return w.substr(0, w.size() - 3) + "y";
  }
  if (ends_with(w, "sses") || ends_with(w, "shes") || ends_with(w, "ches") ||
      ends_with(w, "xes") || ends_with(w, "zes") || ends_with(w, "oes")) {
    return w.substr(0, w.size() - 2);
  }
  if (ends_with(w, "s")) {
    return w.substr(0, w.size() - 1);
  }
  if (ends_with(w, "ing") && w.size() >= 6) {
    std::string stem = w.substr(0, w.size() - 3);
    if (has_vowel(stem)) return finish_verb_stem(std::move(stem));
    return w;
  }
  if (ends_with(w, "ied") && w.size() > 4) {
    return w.substr(0, w.size() - 3) + "y";
  }
  if (ends_with(w, "ed") && w.size() >= 5 && !ends_with(w, "eed")) {
    std::string stem = w.substr(0, w.size() - 2);
    if (has_vowel(stem)) return finish_verb_stem(std::move(stem));
    return w;
  }
  return w;
}

std::vector<std::string> label_tokens(std::string_view label) {
  std::vector<std::string> tokens;
  for (std::string& w : split_words(label)) {
    if (is_stopword(w)) continue;
    tokens.push_back(lemmatize(w));
  }
  std::sort(tokens.begin(), tokens.end());
  return tokens;
}

bool multiset_includes(const std::vector<std::string>& b,
                       const std::vector<std::string>& a) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string truncate_at_whitespace(std::string_view s, std::size_t max_chars) {
  // Byte offset just past the max_chars-th code point.
  std::size_t chars = 0;
  std::size_t cut = 0;
  while (cut < s.size()) {
    if (chars == max_chars) break;
    ++cut;
    while (cut < s.size() &&
           (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) {
      ++cut;
    }
    ++chars;
  }
  if (cut >= s.size()) return std::string(s);

  // s[cut] is the first dropped byte; if it is whitespace the cut is already
  // on a word boundary.
  if (is_space(s[cut])) return normalize_whitespace(s.substr(0, cut));
  for (std::size_t i = cut; i > 0; --i) {
    if (is_space(s[i - 1])) return normalize_whitespace(s.substr(0, i - 1));
  }
  return std::string(s.substr(0, cut));
}

}  // namespace opentopic::text
