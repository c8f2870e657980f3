// eegctc/metrics.hpp

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

#ifndef EEGCTC_METRICS_HPP_
#define EEGCTC_METRICS_HPP_

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eegctc/types.hpp"

namespace eegctc {

/// Levenshtein distance with unit costs over any random-access sequences.
template <typename SeqA, typename SeqB>
Index edit_distance(const SeqA& a, const SeqB& b) {
  const auto n = static_cast<Index>(std::size(b));
  std::vector<Index> row(static_cast<std::size_t>(n + 1));
  for (Index j = 0; j <= n; ++j) row[j] = j;
  Index i = 0;
  for (const auto& x : a) {
    ++i;
    Index diagonal = row[0];
    row[0] = i;
    Index j = 0;
    for (const auto& y : b) {
      ++j;
      const Index substitute = diagonal + (x == y ? 0 : 1);
      diagonal = row[j];
      row[j] = std::min({substitute, row[j] + 1, row[j - 1] + 1});
    }
  }
  return row[n];
}

/// Distance between UTF-8 texts, counted in code points.
Index edit_distance_utf8(std::string_view reference, std::string_view hypothesis);

struct ScoredUtterance {
  std::string id;
  std::string reference;
  std::string hypothesis;
  Index edits = 0;
  Index reference_length = 0;  // code points
};

/// Scores each pair; an empty reference is an evaluation error.
std::vector<ScoredUtterance> score_pairs(
    const std::vector<std::pair<std::string, std::string>>& reference_hypothesis);

/// 100 * sum(edits) / sum(reference lengths), pooled over the corpus.
double cer(const std::vector<std::pair<std::string, std::string>>& reference_hypothesis);

struct EvalReport {
  int corpus_size = 0;      // sentences
  std::string config;       // encoder, e.g. "gru64"
  std::string feature_set;  // e.g. "set1", "raw"
  std::vector<ScoredUtterance> utterances;

  Index total_edits() const;
  Index total_reference_chars() const;
  double cer_percent() const;
};

EvalReport make_report(int corpus_size, std::string config, std::string feature_set,
                       const std::vector<std::pair<std::string, std::string>>& pairs,
                       const std::vector<std::string>& ids = {});

struct Tabulation {
  std::string table;  // aligned text: one row per corpus size, one column per config
  std::string csv;    // corpus_size,config,feature_set,cer_percent,utterances,total_ref_chars
};

/// Rows and columns sorted; cells formatted with two decimals.
Tabulation tabulate(const std::vector<EvalReport>& reports);

}  // namespace eegctc

#endif  // EEGCTC_METRICS_HPP_
