// eegctc/trainer.hpp

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

#ifndef EEGCTC_TRAINER_HPP_
#define EEGCTC_TRAINER_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "eegctc/corpus.hpp"
#include "eegctc/ctc.hpp"
#include "eegctc/net.hpp"

namespace eegctc {

/// Per-dimension standardization fitted on training frames.
struct InputNormalizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd inv_std;

  static InputNormalizer fit(const std::vector<const FramesXd*>& sequences);
  static InputNormalizer identity(Index dim);
  FramesXd apply(const Eigen::Ref<const FramesXd>& frames) const;
  Index dim() const { return mean.size(); }
};

/// Everything needed to decode: architecture, weights, charset, input scaling.
struct Model {
  NetworkConfig config;
  Charset charset;
  InputNormalizer normalizer;
  NetworkParams params;
};

Model init_model(const NetworkConfig& config, const Charset& charset,
                 const InputNormalizer& normalizer, std::uint64_t seed);

/// Logits for unnormalized input frames.
FramesXd model_logits(const Model& model, const Eigen::Ref<const FramesXd>& features);

struct TrainingExample {
  std::string id;
  FramesXd features;  // unnormalized
  LabelSequence labels;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;       // nats per reference character
  double validation_loss = 0.0;  // NaN without a validation set
};

struct TrainOptions {
  int epochs = 400;
  std::uint64_t seed = 0;  // shuffling
  AdamOptions adam;
  std::function<void(const EpochLog&)> on_epoch;
};

struct TrainResult {
  Model final_model;
  Model best_model;  // lowest validation loss, or training loss without validation
  int best_epoch = 0;
  std::vector<EpochLog> log;
  Index skipped = 0;  // examples too short for their transcript
};

/// Batch size 1: one Adam step per example, examples reshuffled each epoch.
TrainResult train(const Model& initial, const std::vector<TrainingExample>& train_set,
                  const std::vector<TrainingExample>& validation_set,
                  const TrainOptions& options);

/// Sum of losses over sum of label lengths; infeasible examples are skipped.
double mean_loss(const Model& model, const std::vector<TrainingExample>& examples,
                 Index* skipped = nullptr);

// Checkpoint: "EEGCTC-CKPT" magic, version byte, config, charset (UTF-8),
// normalizer, named tensors, Adam step and moments; little-endian.
void save_checkpoint(const std::filesystem::path& path, const Model& model);
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace eegctc

#endif  // EEGCTC_TRAINER_HPP_
