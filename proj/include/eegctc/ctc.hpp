// eegctc/ctc.hpp

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

#ifndef EEGCTC_CTC_HPP_
#define EEGCTC_CTC_HPP_

#include <vector>

#include "eegctc/types.hpp"

namespace eegctc {

/// Character ids in [1, vocab - 1]; never the blank.
using LabelSequence = std::vector<int>;

inline constexpr int kBlankId = 0;
inline constexpr int kDefaultBeamWidth = 16;

/// Stand-in for log(0) that keeps the recursions free of infinities.
inline constexpr double kLogZero = -1e30;

/// log(exp(a) + exp(b)), saturating at kLogZero.
double log_add(double a, double b);

/// Row-wise log-softmax of [T x vocab] logits.
FramesXd log_softmax(const Eigen::Ref<const FramesXd>& logits);

/// Shortest frame count that can emit `labels`: one frame per label plus a
/// blank between each pair of equal neighbours.
Index required_length(const LabelSequence& labels);

struct CtcResult {
  double loss = 0.0;   // -log p(labels | logits), nats
  FramesXd logit_grad;  // d loss / d logits, [T x vocab]
};

CtcResult ctc_loss(const Eigen::Ref<const FramesXd>& logits, const LabelSequence& labels,
                   int blank_id = kBlankId);

/// Sums over every vocab^T path. Only for tiny instances (vocab^T <= 1e7).
double ctc_loss_bruteforce(const Eigen::Ref<const FramesXd>& logits,
                           const LabelSequence& labels, int blank_id = kBlankId);

/// Merge repeats, then drop blanks.
LabelSequence collapse_alignment(const std::vector<int>& path, int blank_id = kBlankId);

/// Per-frame argmax (lowest id on ties), collapsed.
LabelSequence greedy_decode(const Eigen::Ref<const FramesXd>& logits, int blank_id = kBlankId);

struct ScoredPrefix {
  LabelSequence labels;
  double log_prob = kLogZero;  // summed over every path collapsing to labels
};

/// Final beams of a prefix beam search, best first.
std::vector<ScoredPrefix> beam_search(const Eigen::Ref<const FramesXd>& logits,
                                      int blank_id = kBlankId,
                                      int beam_width = kDefaultBeamWidth);

/// Prefix beam search without a language model. Among equally probable
/// prefixes the lexicographically smaller one wins.
LabelSequence beam_search_decode(const Eigen::Ref<const FramesXd>& logits,
                                 int blank_id = kBlankId,
                                 int beam_width = kDefaultBeamWidth);

}  // namespace eegctc

#endif  // EEGCTC_CTC_HPP_
