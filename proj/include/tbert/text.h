// Copyright 2026 The tbert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TBERT_TEXT_H_
#define TBERT_TEXT_H_

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Microblog text normalization. Every function here is total: malformed
// input is cleaned, never rejected.
namespace tbert {

// Lowercases, transliterates accented Latin letters to ASCII, then drops
// digits, punctuation and any remaining non-ASCII code points. Whitespace
// runs collapse to one space and the result is trimmed.
std::string canonicalize(std::string_view text);

// Removes every `http://`, `https://` or `www.` span up to the next
// whitespace character. Matching is case-insensitive.
std::string strip_urls(std::string_view text);

// Replaces emoticons by their word, trying the longest table entry first at
// each position.
std::string replace_emoticons(std::string_view text);

// The shipped emoticon table as (emoticon, word) pairs.
std::span<const std::pair<std::string_view, std::string_view>>
emoticon_table();

bool is_stopword(std::string_view token);
std::vector<std::string> remove_stopwords(std::span<const std::string> tokens);

// Porter (1980) suffix-stripping stemmer. Expects a lowercase alphabetic
// token; other input is returned unchanged.
std::string stem(std::string_view token);

// Splits on ASCII whitespace.
std::vector<std::string> split_whitespace(std::string_view text);

}  // namespace tbert

#endif  // TBERT_TEXT_H_
