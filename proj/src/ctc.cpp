// src/ctc.cpp

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

#include "eegctc/ctc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "eegctc/error.hpp"

namespace eegctc {

namespace {

void check_inputs(const Eigen::Ref<const FramesXd>& logits, const LabelSequence& labels,
                  int blank_id) {
  const Index vocab = logits.cols();
  if (vocab < 2) fail(ErrorKind::kShape, "CTC needs at least 2 output symbols");
  if (blank_id < 0 || blank_id >= vocab)
    fail(ErrorKind::kConfig, "blank id " + std::to_string(blank_id) + " outside vocabulary");
  for (int id : labels) {
    if (id == blank_id) fail(ErrorKind::kConfig, "label sequence contains the blank id");
    if (id < 0 || id >= vocab)
      fail(ErrorKind::kConfig, "label id " + std::to_string(id) + " outside vocabulary of " +
                                   std::to_string(vocab));
  }
  if (!logits.allFinite()) fail(ErrorKind::kNumeric, "non-finite logits");
}

[[noreturn]] void infeasible(Index frames, const LabelSequence& labels) {
  fail(ErrorKind::kInfeasible, "no alignment of " + std::to_string(labels.size()) +
                                   " labels fits in " + std::to_string(frames) +
                                   " frames (needs " +
                                   std::to_string(required_length(labels)) + ")");
}

}  // namespace

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b <= kLogZero) return std::max(a, kLogZero);
  return a + std::log1p(std::exp(b - a));
}

FramesXd log_softmax(const Eigen::Ref<const FramesXd>& logits) {
  FramesXd out(logits.rows(), logits.cols());
  for (Index t = 0; t < logits.rows(); ++t) {
    const double peak = logits.row(t).maxCoeff();
    const double norm = peak + std::log((logits.row(t).array() - peak).exp().sum());
    out.row(t) = logits.row(t).array() - norm;
  }
  return out;
}

Index required_length(const LabelSequence& labels) {
  Index n = static_cast<Index>(labels.size());
  for (std::size_t i = 1; i < labels.size(); ++i)
    if (labels[i] == labels[i - 1]) ++n;
  return n;
}

CtcResult ctc_loss(const Eigen::Ref<const FramesXd>& logits, const LabelSequence& labels,
                   int blank_id) {
  check_inputs(logits, labels, blank_id);
  const Index frames = logits.rows();
  if (frames < 1) fail(ErrorKind::kShape, "CTC needs at least one frame");
  if (frames < required_length(labels)) infeasible(frames, labels);

  // Blank-interleaved extended sequence: -, l1, -, l2, ..., -
  const Index states = 2 * static_cast<Index>(labels.size()) + 1;
  std::vector<int> ext(static_cast<std::size_t>(states), blank_id);
  for (std::size_t i = 0; i < labels.size(); ++i) ext[2 * i + 1] = labels[i];
  const auto skip_allowed = [&](Index s) {
    return s >= 2 && ext[s] != blank_id && ext[s] != ext[s - 2];
  };

  const FramesXd logp = log_softmax(logits);
  MatrixXd alpha = MatrixXd::Constant(frames, states, kLogZero);
  MatrixXd beta = MatrixXd::Constant(frames, states, kLogZero);

  alpha(0, 0) = logp(0, ext[0]);
  if (states > 1) alpha(0, 1) = logp(0, ext[1]);
  for (Index t = 1; t < frames; ++t) {
    for (Index s = 0; s < states; ++s) {
      double acc = alpha(t - 1, s);
      if (s >= 1) acc = log_add(acc, alpha(t - 1, s - 1));
      if (skip_allowed(s)) acc = log_add(acc, alpha(t - 1, s - 2));
      alpha(t, s) = acc <= kLogZero ? kLogZero : acc + logp(t, ext[s]);
    }
  }

  // beta(t, s): log probability of emitting the remainder after frame t
  // given state s at frame t.
  beta(frames - 1, states - 1) = 0.0;
  if (states > 1) beta(frames - 1, states - 2) = 0.0;
  for (Index t = frames - 2; t >= 0; --t) {
    for (Index s = 0; s < states; ++s) {
      double acc = beta(t + 1, s) + logp(t + 1, ext[s]);
      if (s + 1 < states) acc = log_add(acc, beta(t + 1, s + 1) + logp(t + 1, ext[s + 1]));
      if (s + 2 < states && skip_allowed(s + 2))
        acc = log_add(acc, beta(t + 1, s + 2) + logp(t + 1, ext[s + 2]));
      beta(t, s) = std::max(acc, kLogZero);
    }
  }

  double log_total = alpha(frames - 1, states - 1);
  if (states > 1) log_total = log_add(log_total, alpha(frames - 1, states - 2));
  if (log_total <= 0.5 * kLogZero) infeasible(frames, labels);

  CtcResult result;
  result.loss = std::max(-log_total, 0.0);
  // d loss / d logit = softmax - posterior symbol occupancy
  result.logit_grad = logp.array().exp();
  for (Index t = 0; t < frames; ++t) {
    std::vector<double> occupancy(static_cast<std::size_t>(logits.cols()), kLogZero);
    for (Index s = 0; s < states; ++s) {
      const double g = alpha(t, s) + beta(t, s);
      if (g > 0.5 * kLogZero) occupancy[ext[s]] = log_add(occupancy[ext[s]], g);
    }
    for (Index k = 0; k < logits.cols(); ++k)
      if (occupancy[k] > 0.5 * kLogZero)
        result.logit_grad(t, k) -= std::exp(occupancy[k] - log_total);
  }
  return result;
}

double ctc_loss_bruteforce(const Eigen::Ref<const FramesXd>& logits,
                           const LabelSequence& labels, int blank_id) {
  check_inputs(logits, labels, blank_id);
  const Index frames = logits.rows();
  const Index vocab = logits.cols();
  double paths = 1.0;
  for (Index t = 0; t < frames; ++t) paths *= static_cast<double>(vocab);
  if (paths > 1e7)
    fail(ErrorKind::kBudget, "brute-force CTC over " + std::to_string(vocab) + "^" +
                                 std::to_string(frames) + " paths exceeds the 1e7 budget");

  const FramesXd logp = log_softmax(logits);
  std::vector<int> path(static_cast<std::size_t>(frames), 0);
  double log_total = -std::numeric_limits<double>::infinity();
  const auto paths_count = static_cast<long long>(paths);
  for (long long code = 0; code < paths_count; ++code) {
    long long rest = code;
    double lp = 0.0;
    for (Index t = 0; t < frames; ++t) {
      path[t] = static_cast<int>(rest % vocab);
      rest /= vocab;
      lp += logp(t, path[t]);
    }
    if (collapse_alignment(path, blank_id) != labels) continue;
    if (std::isinf(log_total))
      log_total = lp;
    else
      log_total = std::max(log_total, lp) + std::log1p(std::exp(-std::abs(log_total - lp)));
  }
  if (std::isinf(log_total)) infeasible(frames, labels);
  return -log_total;
}

LabelSequence collapse_alignment(const std::vector<int>& path, int blank_id) {
  LabelSequence out;
  int previous = -1;
  for (int id : path) {
    if (id != previous && id != blank_id) out.push_back(id);
    previous = id;
  }
  return out;
}

LabelSequence greedy_decode(const Eigen::Ref<const FramesXd>& logits, int blank_id) {
  std::vector<int> path(static_cast<std::size_t>(logits.rows()));
  for (Index t = 0; t < logits.rows(); ++t) {
    Index best = 0;
    logits.row(t).maxCoeff(&best);  // first maximum
    path[t] = static_cast<int>(best);
  }
  return collapse_alignment(path, blank_id);
}

std::vector<ScoredPrefix> beam_search(const Eigen::Ref<const FramesXd>& logits, int blank_id,
                                      int beam_width) {
  if (beam_width < 1) fail(ErrorKind::kConfig, "beam width must be >= 1");
  if (blank_id < 0 || blank_id >= logits.cols())
    fail(ErrorKind::kConfig, "blank id " + std::to_string(blank_id) + " outside vocabulary");

  struct Mass {
    double blank = kLogZero;      // paths ending in blank
    double non_blank = kLogZero;  // paths ending in the prefix's last label
    double total() const { return log_add(blank, non_blank); }
  };
  using Beam = std::map<LabelSequence, Mass>;

  // Best first; stable on map order, so equal masses stay lexicographic.
  const auto rank = [beam_width](const Beam& beam) {
    std::vector<ScoredPrefix> ranked;
    ranked.reserve(beam.size());
    for (const auto& [prefix, mass] : beam) ranked.push_back({prefix, mass.total()});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.log_prob > b.log_prob; });
    if (ranked.size() > static_cast<std::size_t>(beam_width))
      ranked.resize(static_cast<std::size_t>(beam_width));
    return ranked;
  };

  const FramesXd logp = log_softmax(logits);
  Beam beam;
  beam[{}].blank = 0.0;
  for (Index t = 0; t < logp.rows(); ++t) {
    Beam next;
    for (const auto& [prefix, mass] : beam) {
      const double total = mass.total();
      Mass& same = next[prefix];
      same.blank = log_add(same.blank, total + logp(t, blank_id));
      if (!prefix.empty())
        same.non_blank = log_add(same.non_blank, mass.non_blank + logp(t, prefix.back()));
      for (int c = 0; c < logp.cols(); ++c) {
        if (c == blank_id) continue;
        LabelSequence extended = prefix;
        extended.push_back(c);
        // A repeated label only extends across a blank.
        const double from = (!prefix.empty() && prefix.back() == c) ? mass.blank : total;
        Mass& grown = next[extended];
        grown.non_blank = log_add(grown.non_blank, from + logp(t, c));
      }
    }
    beam.clear();
    for (const auto& kept : rank(next)) beam.emplace(kept.labels, next.at(kept.labels));
  }
  return rank(beam);
}

LabelSequence beam_search_decode(const Eigen::Ref<const FramesXd>& logits, int blank_id,
                                 int beam_width) {
  return beam_search(logits, blank_id, beam_width).front().labels;
}

}  // namespace eegctc
