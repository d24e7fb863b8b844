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

#include "tbert/text.h"

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_set>

namespace tbert {
namespace {

// Decodes one UTF-8 sequence starting at `pos`. Invalid bytes decode to
// U+FFFD and consume a single byte.
char32_t decode_utf8(std::string_view s, std::size_t& pos) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(s[i]);
  };
  const unsigned char lead = byte(pos);
  if (lead < 0x80) {
    ++pos;
    return lead;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((lead & 0xE0) == 0xC0) {
    extra = 1;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    extra = 2;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    extra = 3;
    cp = lead & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + static_cast<std::size_t>(extra) >= s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (int i = 1; i <= extra; ++i) {
    const unsigned char c = byte(pos + i);
    if ((c & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (c & 0x3F);
  }
  pos += extra + 1;
  return cp;
}

bool is_unicode_space(char32_t cp) {
  return cp == 0x00A0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) ||
         cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F ||
         cp == 0x3000;
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

// ASCII transliteration of accented Latin letters (Latin-1 Supplement and
// Latin Extended-A). Returns an empty view for anything else.
std::string_view transliterate(char32_t cp) {
  if (cp >= 0xC0 && cp <= 0xFF) {
    static constexpr std::array<std::string_view, 64> kLatin1 = {
        "a", "a", "a", "a", "a", "a", "ae", "c",   // C0-C7
        "e", "e", "e", "e", "i", "i", "i",  "i",   // C8-CF
        "d", "n", "o", "o", "o", "o", "o",  "",    // D0-D7 (D7 is x-sign)
        "o", "u", "u", "u", "u", "y", "th", "ss",  // D8-DF
        "a", "a", "a", "a", "a", "a", "ae", "c",   // E0-E7
        "e", "e", "e", "e", "i", "i", "i",  "i",   // E8-EF
        "d", "n", "o", "o", "o", "o", "o",  "",    // F0-F7 (F7 is division)
        "o", "u", "u", "u", "u", "y", "th", "y",   // F8-FF
    };
    return kLatin1[cp - 0xC0];
  }
  if (cp < 0x100 || cp > 0x17F) return {};
  struct Range {
    char32_t first;
    char32_t last;
    std::string_view ascii;
  };
  static constexpr Range kExtendedA[] = {
      {0x100, 0x105, "a"}, {0x106, 0x10D, "c"}, {0x10E, 0x111, "d"},
      {0x112, 0x11B, "e"}, {0x11C, 0x123, "g"}, {0x124, 0x127, "h"},
      {0x128, 0x131, "i"}, {0x132, 0x133, "ij"}, {0x134, 0x135, "j"},
      {0x136, 0x138, "k"}, {0x139, 0x142, "l"}, {0x143, 0x14B, "n"},
      {0x14C, 0x151, "o"}, {0x152, 0x153, "oe"}, {0x154, 0x159, "r"},
      {0x15A, 0x161, "s"}, {0x162, 0x167, "t"}, {0x168, 0x173, "u"},
      {0x174, 0x175, "w"}, {0x176, 0x178, "y"}, {0x179, 0x17E, "z"},
      {0x17F, 0x17F, "s"},
  };
  for (const auto& r : kExtendedA) {
    if (cp >= r.first && cp <= r.last) return r.ascii;
  }
  return {};
}

bool starts_with_icase(std::string_view s, std::size_t pos,
                       std::string_view prefix) {
  if (s.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[pos + i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

using Emoticon = std::pair<std::string_view, std::string_view>;

constexpr Emoticon kEmoticons[] = {
    {":-)", "smile"},     {":)", "smile"},      {"(:", "smile"},
    {"=)", "smile"},      {":]", "smile"},      {":-(", "sad"},
    {":(", "sad"},        {"):", "sad"},        {"=(", "sad"},
    {":'(", "cry"},       {":')", "joy"},       {":-D", "laugh"},
    {":D", "laugh"},      {"=D", "laugh"},      {";-)", "wink"},
    {";)", "wink"},       {":-/", "skeptical"}, {":/", "skeptical"},
    {":\\", "skeptical"}, {"<3", "heart"},      {"</3", "heartbreak"},
    {":-P", "playful"},   {":P", "playful"},    {":p", "playful"},
    {":-O", "surprise"},  {":O", "surprise"},   {":o", "surprise"},
    {":-*", "kiss"},      {":*", "kiss"},       {":-|", "neutral"},
    {":|", "neutral"},    {">:(", "angry"},     {":@", "angry"},
    {"^_^", "happy"},     {"^^", "happy"},      {"-_-", "annoyed"},
    {":3", "cute"},       {"B-)", "cool"},      {"8-)", "cool"},
};

// Table entries ordered longest first; stable so equal lengths keep the
// declaration order.
const std::vector<Emoticon>& emoticons_by_length() {
  static const std::vector<Emoticon> sorted = [] {
    std::vector<Emoticon> v(std::begin(kEmoticons), std::end(kEmoticons));
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      return a.first.size() > b.first.size();
    });
    return v;
  }();
  return sorted;
}

// English stopwords in canonical form (apostrophes already stripped).
constexpr std::string_view kStopwords[] = {
    "i",        "me",        "my",       "myself",     "we",
    "our",      "ours",      "ourselves", "you",       "youre",
    "youve",    "youll",     "youd",     "your",       "yours",
    "yourself", "yourselves", "he",      "him",        "his",
    "himself",  "she",       "shes",     "her",        "hers",
    "herself",  "it",        "its",      "itself",     "they",
    "them",     "their",     "theirs",   "themselves", "what",
    "which",    "who",       "whom",     "this",       "that",
    "thatll",   "these",     "those",    "am",         "is",
    "are",      "was",       "were",     "be",         "been",
    "being",    "have",      "has",      "had",        "having",
    "do",       "does",      "did",      "doing",      "a",
    "an",       "the",       "and",      "but",        "if",
    "or",       "because",   "as",       "until",      "while",
    "of",       "at",        "by",       "for",        "with",
    "about",    "against",   "between",  "into",       "through",
    "during",   "before",    "after",    "above",      "below",
    "to",       "from",      "up",       "down",       "in",
    "out",      "on",        "off",      "over",       "under",
    "again",    "further",   "then",     "once",       "here",
    "there",    "when",      "where",    "why",        "how",
    "all",      "any",       "both",     "each",       "few",
    "more",     "most",      "other",    "some",       "such",
    "no",       "nor",       "not",      "only",       "own",
    "same",     "so",        "than",     "too",        "very",
    "s",        "t",         "can",      "will",       "just",
    "don",      "dont",      "should",   "shouldve",   "now",
    "d",        "ll",        "m",        "o",          "re",
    "ve",       "y",         "ain",      "aren",       "arent",
    "couldn",   "couldnt",   "didn",     "didnt",      "doesn",
    "doesnt",   "hadn",      "hadnt",    "hasn",       "hasnt",
    "haven",    "havent",    "isn",      "isnt",       "ma",
    "mightn",   "mightnt",   "mustn",    "mustnt",     "needn",
    "neednt",   "shan",      "shant",    "shouldn",    "shouldnt",
    "wasn",     "wasnt",     "weren",    "werent",     "won",
    "wont",     "wouldn",    "wouldnt",
};

}  // namespace

std::string canonicalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  const auto emit = [&](std::string_view letters) {
    if (letters.empty()) return;
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.append(letters);
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = decode_utf8(text, pos);
    if (cp < 0x80) {
      const char c = static_cast<char>(cp);
      if (c >= 'a' && c <= 'z') {
        emit(std::string_view(&c, 1));
      } else if (c >= 'A' && c <= 'Z') {
        const char lower = static_cast<char>(c - 'A' + 'a');
        emit(std::string_view(&lower, 1));
      } else if (is_ascii_space(c)) {
        pending_space = true;
      }
      continue;
    }
    if (is_unicode_space(cp)) {
      pending_space = true;
      continue;
    }
    emit(transliterate(cp));
  }
  return out;
}

std::string strip_urls(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (starts_with_icase(text, pos, "http://") ||
        starts_with_icase(text, pos, "https://") ||
        starts_with_icase(text, pos, "www.")) {
      while (pos < text.size() && !is_ascii_space(text[pos])) ++pos;
      continue;
    }
    out.push_back(text[pos++]);
  }
  return out;
}

std::string replace_emoticons(std::string_view text) {
  const auto& table = emoticons_by_length();
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    bool matched = false;
    for (const auto& [face, word] : table) {
      if (text.substr(pos, face.size()) == face) {
        out.append(word);
        pos += face.size();
        matched = true;
        break;
      }
    }
    if (!matched) out.push_back(text[pos++]);
  }
  return out;
}

std::span<const std::pair<std::string_view, std::string_view>>
emoticon_table() {
  return kEmoticons;
}

bool is_stopword(std::string_view token) {
  static const std::unordered_set<std::string_view> set(
      std::begin(kStopwords), std::end(kStopwords));
  return set.contains(token);
}

std::vector<std::string> remove_stopwords(
    std::span<const std::string> tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!is_stopword(t)) out.push_back(t);
  }
  return out;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && is_ascii_space(text[pos])) ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && !is_ascii_space(text[pos])) ++pos;
    if (pos > start) out.emplace_back(text.substr(start, pos - start));
  }
  return out;
}

}  // namespace tbert
