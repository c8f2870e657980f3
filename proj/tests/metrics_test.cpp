// tests/metrics_test.cpp

// Copyright 2026  The eegctc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "eegctc/metrics.hpp"
#include "test_util.hpp"

using namespace eegctc;
using eegctc::testing::error_kind;

namespace {

// Memoized textbook recursion, independent of the rolling-row implementation.
Index reference_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<Index>> memo(a.size() + 1, std::vector<Index>(b.size() + 1, -1));
  std::function<Index(std::size_t, std::size_t)> d = [&](std::size_t i, std::size_t j) {
    if (i == 0) return static_cast<Index>(j);
    if (j == 0) return static_cast<Index>(i);
    Index& m = memo[i][j];
    if (m >= 0) return m;
    m = std::min({d(i - 1, j) + 1, d(i, j - 1) + 1,
                  d(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return m;
  };
  return d(a.size(), b.size());
}

std::string random_string(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(0, 12);
  std::uniform_int_distribution<int> ch(0, 3);
  std::string s(static_cast<std::size_t>(len(rng)), 'a');
  for (char& c : s) c = static_cast<char>('a' + ch(rng));
  return s;
}

}  // namespace

TEST_CASE("edit distance values") {
  CHECK(edit_distance(std::string(), std::string()) == 0);
  CHECK(edit_distance(std::string("abc"), std::string()) == 3);
  CHECK(edit_distance(std::string(), std::string("abc")) == 3);
  CHECK(edit_distance(std::string("kitten"), std::string("sitting")) == 3);
  CHECK(edit_distance(std::string("intention"), std::string("execution")) == 5);
  CHECK(edit_distance(std::string("flaw"), std::string("lawn")) == 2);
  // Code points, not bytes: two Han characters are two edits.
  CHECK(edit_distance_utf8("你好世界", "你好") == 2);
  CHECK(edit_distance_utf8("你好", "你坏") == 1);
  CHECK(edit_distance(std::vector<int>{1, 2, 3}, std::vector<int>{1, 3}) == 1);
}

TEST_CASE("edit distance is a metric") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string a = random_string(rng);
    const std::string b = random_string(rng);
    const std::string c = random_string(rng);
    const Index ab = edit_distance(a, b);
    CHECK(ab == reference_distance(a, b));
    CHECK(ab == edit_distance(b, a));
    CHECK((ab == 0) == (a == b));
    CHECK(edit_distance(a, c) <= ab + edit_distance(b, c));
    const auto la = static_cast<Index>(a.size()), lb = static_cast<Index>(b.size());
    CHECK(ab >= std::abs(la - lb));
    CHECK(ab <= std::max(la, lb));
  }
}

TEST_CASE("pooled character error rate") {
  CHECK(cer({{"hello", "hello"}, {"ab", "ab"}}) == 0.0);
  CHECK(cer({{"abc", "axc"}}) == doctest::Approx(100.0 / 3.0));
  CHECK(cer({{"ab", "ab"}, {"cd", "xy"}}) == doctest::Approx(50.0));
  // Per-utterance mean would be 50.
  CHECK(cer({{"abcd", "abcd"}, {"ef", "xy"}}) == doctest::Approx(100.0 / 3.0));
  CHECK(cer({{"ab", ""}}) == doctest::Approx(100.0));
  CHECK(cer({{"ab", "abcdef"}}) == doctest::Approx(200.0));
  CHECK(error_kind([] { cer({{"", "x"}}); }) == ErrorKind::kEvaluation);

  std::mt19937_64 rng(7);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < 20; ++i) pairs.emplace_back("r" + random_string(rng), random_string(rng));
  const double before = cer(pairs);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  CHECK(cer(pairs) == doctest::Approx(before).epsilon(1e-15));
}

TEST_CASE("tabulation") {
  const Tabulation empty = tabulate({});
  CHECK(empty.csv == "corpus_size,config,feature_set,cer_percent,utterances,total_ref_chars\n");
  CHECK(empty.table == "sentences\n");

  const EvalReport one = make_report(3, "gru64", "set1", {{"abc", "abd"}, {"xy", "xy"}},
                                     {"u1", "u2"});
  CHECK(one.utterances[0].id == "u1");
  const Tabulation single = tabulate({one});
  CHECK(single.csv ==
        "corpus_size,config,feature_set,cer_percent,utterances,total_ref_chars\n"
        "3,gru64,set1,20.00,2,5\n");
  CHECK(single.table == "sentences  set1/gru64\n3          20.00\n");

  std::vector<EvalReport> sweep;
  for (int size : {10, 3, 7, 5})
    for (const char* set : {"set1", "set2", "set3", "raw"})
      sweep.push_back(make_report(size, "gru128", set, {{"abcd", "abcd"}}));
  const Tabulation table = tabulate(sweep);
  std::istringstream lines(table.table);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "sentences  raw/gru128  set1/gru128  set2/gru128  set3/gru128");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 4);
  CHECK(table.csv.substr(table.csv.find('\n') + 1, 2) == "3,");
  CHECK(tabulate(sweep).csv == table.csv);

  CHECK(error_kind([&] { tabulate({one, one}); }) == ErrorKind::kEvaluation);
}
