// src/metrics.cpp

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

#include "eegctc/metrics.hpp"

#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "eegctc/error.hpp"
#include "eegctc/utf8.hpp"

namespace eegctc {

namespace {

std::string fixed2(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.2f", v);
  return buffer;
}

std::string pad(const std::string& text, std::size_t width) {
  return text.size() >= width ? text : text + std::string(width - text.size(), ' ');
}

}  // namespace

Index edit_distance_utf8(std::string_view reference, std::string_view hypothesis) {
  return edit_distance(utf8_decode(reference), utf8_decode(hypothesis));
}

std::vector<ScoredUtterance> score_pairs(
    const std::vector<std::pair<std::string, std::string>>& reference_hypothesis) {
  std::vector<ScoredUtterance> out;
  out.reserve(reference_hypothesis.size());
  for (const auto& [reference, hypothesis] : reference_hypothesis) {
    const std::u32string ref = utf8_decode(reference);
    if (ref.empty()) fail(ErrorKind::kEvaluation, "empty reference transcript");
    ScoredUtterance s;
    s.reference = reference;
    s.hypothesis = hypothesis;
    s.edits = edit_distance(ref, utf8_decode(hypothesis));
    s.reference_length = static_cast<Index>(ref.size());
    out.push_back(std::move(s));
  }
  return out;
}

double cer(const std::vector<std::pair<std::string, std::string>>& reference_hypothesis) {
  EvalReport report;
  report.utterances = score_pairs(reference_hypothesis);
  return report.cer_percent();
}

Index EvalReport::total_edits() const {
  Index n = 0;
  for (const auto& u : utterances) n += u.edits;
  return n;
}

Index EvalReport::total_reference_chars() const {
  Index n = 0;
  for (const auto& u : utterances) n += u.reference_length;
  return n;
}

double EvalReport::cer_percent() const {
  const Index chars = total_reference_chars();
  if (chars == 0) fail(ErrorKind::kEvaluation, "no reference characters to score");
  return 100.0 * static_cast<double>(total_edits()) / static_cast<double>(chars);
}

EvalReport make_report(int corpus_size, std::string config, std::string feature_set,
                       const std::vector<std::pair<std::string, std::string>>& pairs,
                       const std::vector<std::string>& ids) {
  if (!ids.empty() && ids.size() != pairs.size())
    fail(ErrorKind::kEvaluation, "utterance id count does not match the pair count");
  EvalReport report;
  report.corpus_size = corpus_size;
  report.config = std::move(config);
  report.feature_set = std::move(feature_set);
  report.utterances = score_pairs(pairs);
  for (std::size_t i = 0; i < ids.size(); ++i) report.utterances[i].id = ids[i];
  return report;
}

Tabulation tabulate(const std::vector<EvalReport>& reports) {
  using Column = std::pair<std::string, std::string>;  // (feature_set, config)
  std::set<int> sizes;
  std::set<Column> columns;
  std::map<std::pair<int, Column>, const EvalReport*> cells;
  for (const EvalReport& r : reports) {
    const Column column{r.feature_set, r.config};
    sizes.insert(r.corpus_size);
    columns.insert(column);
    if (!cells.emplace(std::make_pair(r.corpus_size, column), &r).second)
      fail(ErrorKind::kEvaluation, "two reports for corpus size " +
                                       std::to_string(r.corpus_size) + ", " + r.feature_set +
                                       "/" + r.config);
  }

  Tabulation out;
  std::ostringstream csv;
  csv << "corpus_size,config,feature_set,cer_percent,utterances,total_ref_chars\n";
  for (int size : sizes)
    for (const Column& column : columns) {
      const auto it = cells.find({size, column});
      if (it == cells.end()) continue;
      const EvalReport& r = *it->second;
      csv << r.corpus_size << ',' << r.config << ',' << r.feature_set << ','
          << fixed2(r.cer_percent()) << ',' << r.utterances.size() << ','
          << r.total_reference_chars() << '\n';
    }
  out.csv = csv.str();

  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{"sentences"};
  for (const Column& column : columns) header.push_back(column.first + "/" + column.second);
  grid.push_back(header);
  for (int size : sizes) {
    std::vector<std::string> row{std::to_string(size)};
    for (const Column& column : columns) {
      const auto it = cells.find({size, column});
      row.push_back(it == cells.end() ? "-" : fixed2(it->second->cer_percent()));
    }
    grid.push_back(std::move(row));
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : grid)
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  std::ostringstream table;
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) table << "  ";
      table << (c + 1 == row.size() ? row[c] : pad(row[c], widths[c]));
    }
    table << '\n';
  }
  out.table = table.str();
  return out;
}

}  // namespace eegctc
