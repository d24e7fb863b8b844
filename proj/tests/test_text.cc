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

#include <string>
#include <vector>

#include "doctest.h"
#include "tbert/text.h"

using Tokens = std::vector<std::string>;

TEST_CASE("canonicalize") {
  CHECK(tbert::canonicalize("Héllo, World! 123") == "hello world");
  CHECK(tbert::canonicalize("") == "");
  CHECK(tbert::canonicalize("A.B.C") == "abc");
  CHECK(tbert::canonicalize("  many\t\n spaces  ") == "many spaces");
  CHECK(tbert::canonicalize("non\xC2\xA0" "breaking") == "non breaking");
  CHECK(tbert::canonicalize("don't") == "dont");
}

TEST_CASE("canonicalize tolerates malformed utf-8") {
  CHECK(tbert::canonicalize("ab\xFF" "cd") == "abcd");
  CHECK(tbert::canonicalize("ab\xC3") == "ab");
}

TEST_CASE("strip_urls") {
  CHECK(tbert::strip_urls("see https://x.co/a now") == "see  now");
  CHECK(tbert::strip_urls("no links here") == "no links here");
  CHECK(tbert::strip_urls("www.a.com www.b.com") == " ");
  CHECK(tbert::strip_urls("HTTP://LOUD.example x") == " x");
}

TEST_CASE("replace_emoticons prefers the longest match") {
  CHECK(tbert::replace_emoticons(":) great") == "smile great");
  CHECK(tbert::replace_emoticons("plain") == "plain");
  CHECK(tbert::replace_emoticons(":)) fun") == "smile) fun");
  CHECK(tbert::replace_emoticons("</3") == "heartbreak");
  CHECK(tbert::replace_emoticons(":-)") == "smile");
}

TEST_CASE("emoticon table has unique faces") {
  const auto table = tbert::emoticon_table();
  REQUIRE(table.size() > 10);
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = i + 1; j < table.size(); ++j) {
      CHECK(table[i].first != table[j].first);
    }
  }
}

TEST_CASE("remove_stopwords") {
  const Tokens in{"the", "cat", "is", "here"};
  CHECK(tbert::remove_stopwords(in) == Tokens{"cat"});
  CHECK(tbert::remove_stopwords(Tokens{}).empty());
  CHECK(tbert::remove_stopwords(Tokens{"cat", "dog"}) == Tokens{"cat", "dog"});
}

TEST_CASE("stem follows the reference Porter vocabulary") {
  const std::pair<const char*, const char*> pairs[] = {
      {"running", "run"},         {"cat", "cat"},
      {"caresses", "caress"},     {"ponies", "poni"},
      {"ties", "ti"},             {"caress", "caress"},
      {"cats", "cat"},            {"feed", "feed"},
      {"agreed", "agre"},         {"plastered", "plaster"},
      {"bled", "bled"},           {"motoring", "motor"},
      {"sing", "sing"},           {"conflated", "conflat"},
      {"troubled", "troubl"},     {"sized", "size"},
      {"hopping", "hop"},         {"tanned", "tan"},
      {"falling", "fall"},        {"hissing", "hiss"},
      {"fizzed", "fizz"},         {"failing", "fail"},
      {"filing", "file"},         {"happy", "happi"},
      {"sky", "sky"},             {"relational", "relat"},
      {"conditional", "condit"},  {"rational", "ration"},
      {"valenci", "valenc"},      {"digitizer", "digit"},
      {"operator", "oper"},       {"feudalism", "feudal"},
      {"decisiveness", "decis"},  {"hopefulness", "hope"},
      {"formaliti", "formal"},    {"sensitiviti", "sensit"},
      {"triplicate", "triplic"},  {"formative", "form"},
      {"electrical", "electr"},   {"goodness", "good"},
      {"revival", "reviv"},       {"allowance", "allow"},
      {"inference", "infer"},     {"airliner", "airlin"},
      {"adjustable", "adjust"},   {"defensible", "defens"},
      {"irritant", "irrit"},      {"replacement", "replac"},
      {"adjustment", "adjust"},   {"dependent", "depend"},
      {"adoption", "adopt"},      {"homologou", "homolog"},
      {"communism", "commun"},    {"activate", "activ"},
      {"angulariti", "angular"},  {"homologous", "homolog"},
      {"effective", "effect"},    {"bowdlerize", "bowdler"},
      {"probate", "probat"},      {"rate", "rate"},
      {"cease", "ceas"},          {"controll", "control"},
      {"roll", "roll"},           {"generalizations", "gener"},
      {"oscillators", "oscil"},   {"a", "a"},
  };
  for (const auto& [in, out] : pairs) {
    CAPTURE(in);
    CHECK(tbert::stem(in) == out);
  }
}

TEST_CASE("split_whitespace") {
  CHECK(tbert::split_whitespace("  a  b\tc\n") == Tokens{"a", "b", "c"});
  CHECK(tbert::split_whitespace("").empty());
}
