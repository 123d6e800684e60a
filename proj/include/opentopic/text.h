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

// Text utilities shared by the ESA tokenizer and the label deduplicator.

#ifndef OPENTOPIC_TEXT_H_
#define OPENTOPIC_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace opentopic::text {

std::string to_lower_ascii(std::string_view s);

// Collapses runs of ASCII whitespace to one space and trims both ends.
std::string normalize_whitespace(std::string_view s);

// Lowercases and splits on anything that is not an ASCII letter or digit.
// Bytes >= 0x80 are kept as word characters so UTF-8 words stay whole.
std::vector<std::string> split_words(std::string_view s);

bool is_stopword(std::string_view lowercase_word);

// ESA tokenization: split_words minus stopwords and one-byte tokens.
std::vector<std::string> index_tokens(std::string_view s);

// Suffix-stripping English lemmatizer with an exception table. Expects a
// lowercase word.
std::string lemmatize(std::string_view word);

// Lemmatized non-stopword tokens of a label, sorted into a canonical
// multiset.
std::vector<std::string> label_tokens(std::string_view label);

// True iff multiset `a` is contained in multiset `b`. Both must be sorted.
bool multiset_includes(const std::vector<std::string>& b,
                       const std::vector<std::string>& a);

// Cuts `s` to at most `max_chars` code points, backing off to the last
// whitespace inside the limit when there is one.
std::string truncate_at_whitespace(std::string_view s, std::size_t max_chars);

}  // namespace opentopic::text

#endif  // OPENTOPIC_TEXT_H_
