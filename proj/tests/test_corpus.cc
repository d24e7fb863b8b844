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

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "tbert/corpus.h"
#include "tbert/random.h"

using tbert::ProcessedDocument;
using Tokens = std::vector<std::string>;

namespace {

std::vector<ProcessedDocument> docs_of(std::vector<Tokens> tokens) {
  std::vector<ProcessedDocument> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out.push_back({"d" + std::to_string(i), std::move(tokens[i])});
  }
  return out;
}

}  // namespace

TEST_CASE("preprocess runs the whole cleaning chain") {
  CHECK(tbert::preprocess({"1", "I love https://t.co/x :)"}).tokens ==
        Tokens{"love", "smile"});
  CHECK(tbert::preprocess({"2", ""}).tokens.empty());
  CHECK(tbert::preprocess({"3", "The THE the"}).tokens.empty());
  const auto doc = tbert::preprocess({"4", "Cats were running :("});
  CHECK(doc.tokens == Tokens{"cat", "run", "sad"});
  CHECK(doc.id == "4");
}

TEST_CASE("preprocess output is stable under a second stemming pass") {
  const auto doc =
      tbert::preprocess({"x", "generalizations agreed conditional"});
  for (const auto& t : doc.tokens) {
    CAPTURE(t);
    CHECK(tbert::preprocess({"y", t}).tokens == Tokens{t});
  }
}

TEST_CASE("build_vocabulary filters and orders terms") {
  const auto docs = docs_of({{"a", "b"}, {"a"}});
  const auto v = tbert::build_vocabulary(docs, 1, 1.0);
  CHECK(v.terms() == Tokens{"a", "b"});
  CHECK(v.df(0) == 2);
  CHECK(*v.index("b") == 1);
  CHECK_FALSE(v.index("z").has_value());
  CHECK(tbert::build_vocabulary(docs, 2, 1.0).terms() == Tokens{"a"});

  const auto triple = docs_of({{"x", "y"}, {"x", "y"}, {"x", "z"}});
  const auto capped = tbert::build_vocabulary(triple, 1, 0.7);
  CHECK_FALSE(capped.index("x").has_value());
  CHECK(capped.index("z").has_value());
  CHECK_THROWS(tbert::build_vocabulary(docs_of({{"x"}, {"x"}, {"x"}}), 1, 0.5));
  CHECK_THROWS_AS(tbert::build_vocabulary(docs, 0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("vocabulary does not depend on document order") {
  tbert::Rng rng(3);
  std::vector<Tokens> tokens;
  for (int d = 0; d < 40; ++d) {
    Tokens t;
    for (int i = 0; i < 6; ++i) t.push_back(std::string(1, 'a' + rng.below(12)));
    tokens.push_back(t);
  }
  auto docs = docs_of(tokens);
  const auto v1 = tbert::build_vocabulary(docs, 2, 0.9);
  for (int trial = 0; trial < 5; ++trial) {
    rng.shuffle(std::span<ProcessedDocument>(docs));
    CHECK(tbert::build_vocabulary(docs, 2, 0.9) == v1);
  }
}

TEST_CASE("to_bow counts in index order and drops unknown terms") {
  const auto v = tbert::build_vocabulary(docs_of({{"a", "b"}, {"a"}}), 1, 1.0);
  using E = tbert::BowEntry;
  CHECK(tbert::to_bow({"q", {"a", "b", "a"}}, v) ==
        tbert::SparseCounts{E{0, 2}, E{1, 1}});
  CHECK(tbert::to_bow({"q", {"z"}}, v).empty());
  CHECK(tbert::to_bow({"q", {"b", "a"}}, v) ==
        tbert::SparseCounts{E{0, 1}, E{1, 1}});
  CHECK(tbert::token_ids({"q", {"b", "z", "a"}}, v) ==
        std::vector<std::size_t>{1, 0});
}

TEST_CASE("bow corpus rejects duplicate ids") {
  const auto docs = docs_of({{"a"}, {"a"}});
  const auto v = tbert::build_vocabulary(docs, 1, 1.0);
  auto dup = docs;
  dup[1].id = dup[0].id;
  CHECK_THROWS_AS(tbert::make_bow_corpus(dup, v), std::invalid_argument);
  const auto corpus = tbert::make_bow_corpus(docs, v);
  CHECK(corpus.num_docs() == 2);
  CHECK(corpus.total_tokens() == 2);
  CHECK(corpus.doc_length(1) == 1);
}

TEST_CASE("raw documents from csv and jsonl") {
  std::istringstream csv("text,id\n\"hello, there\",a\nbye,b\n");
  const auto docs = tbert::read_raw_documents(csv);
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].id == "a");
  CHECK(docs[0].text == "hello, there");

  std::istringstream jsonl("{\"id\":\"x\",\"text\":\"one\"}\n\n"
                           "{\"id\":\"y\",\"text\":\"two\"}\n");
  const auto j = tbert::read_raw_documents(jsonl);
  REQUIRE(j.size() == 2);
  CHECK(j[1].text == "two");

  std::istringstream dup("id,text\na,1\na,2\n");
  CHECK_THROWS(tbert::read_raw_documents(dup));
  std::istringstream missing("id,body\na,1\n");
  CHECK_THROWS(tbert::read_raw_documents(missing));
}

TEST_CASE("processed jsonl and vocabulary json round-trip") {
  const auto docs = docs_of({{"a", "b"}, {}, {"c"}});
  std::stringstream buf;
  tbert::write_processed_jsonl(buf, docs);
  const auto back = tbert::read_processed_jsonl(buf);
  REQUIRE(back.size() == docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    CHECK(back[i].id == docs[i].id);
    CHECK(back[i].tokens == docs[i].tokens);
  }
  const auto v = tbert::build_vocabulary(docs, 1, 1.0);
  CHECK(tbert::vocabulary_from_json(tbert::vocabulary_to_json(v)) == v);
}
