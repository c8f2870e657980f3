// src/trainer.cpp

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

#include "eegctc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "eegctc/binary_io.hpp"
#include "eegctc/error.hpp"
#include "eegctc/utf8.hpp"

namespace eegctc {

namespace {

constexpr char kMagic[] = "EEGCTC-CKPT";
constexpr std::uint8_t kVersion = 1;

void put_tensors(BinaryWriter& out, const Weights& weights) {
  const auto tensors = named_tensors(weights);
  out.put_u64(tensors.size());
  for (const auto& [name, tensor] : tensors) {
    out.put_string(name);
    out.put_matrix(*tensor);
  }
}

void get_tensors(BinaryReader& in, Weights& weights, const std::filesystem::path& path) {
  auto tensors = named_tensors(weights);
  if (in.get_u64() != tensors.size())
    fail(ErrorKind::kIo, "checkpoint '" + path.string() + "' has the wrong tensor count");
  for (auto& [name, tensor] : tensors) {
    const std::string stored = in.get_string();
    const MatrixXd value = in.get_matrix();
    if (stored != name || value.rows() != tensor->rows() || value.cols() != tensor->cols())
      fail(ErrorKind::kIo, "checkpoint '" + path.string() + "': tensor '" + stored +
                               "' does not match expected '" + name + "'");
    *tensor = value;
  }
}

}  // namespace

InputNormalizer InputNormalizer::fit(const std::vector<const FramesXd*>& sequences) {
  if (sequences.empty()) fail(ErrorKind::kData, "no frames to fit the input normalizer");
  const Index dim = sequences.front()->cols();
  Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(dim);
  Index count = 0;
  for (const FramesXd* s : sequences) {
    if (s->cols() != dim) fail(ErrorKind::kShape, "feature sequences differ in dimension");
    sum += s->colwise().sum();
    count += s->rows();
  }
  if (count == 0) fail(ErrorKind::kData, "no frames to fit the input normalizer");
  InputNormalizer n;
  n.mean = sum / static_cast<double>(count);
  Eigen::RowVectorXd squares = Eigen::RowVectorXd::Zero(dim);
  for (const FramesXd* s : sequences)
    squares += (s->rowwise() - n.mean).array().square().matrix().colwise().sum();
  const Eigen::RowVectorXd stddev = (squares / static_cast<double>(count)).array().sqrt();
  // Constant dimensions are centred but left unscaled.
  n.inv_std = stddev.unaryExpr([](double s) { return s > 1e-12 ? 1.0 / s : 1.0; });
  return n;
}

InputNormalizer InputNormalizer::identity(Index dim) {
  return {Eigen::RowVectorXd::Zero(dim), Eigen::RowVectorXd::Ones(dim)};
}

FramesXd InputNormalizer::apply(const Eigen::Ref<const FramesXd>& frames) const {
  if (frames.cols() != dim())
    fail(ErrorKind::kShape, "frames have dimension " + std::to_string(frames.cols()) +
                                ", normalizer expects " + std::to_string(dim()));
  return (frames.rowwise() - mean).array().rowwise() * inv_std.array();
}

Model init_model(const NetworkConfig& config, const Charset& charset,
                 const InputNormalizer& normalizer, std::uint64_t seed) {
  if (config.vocab_size_with_blank != charset.vocab_size_with_blank())
    fail(ErrorKind::kConfig, "network output size " +
                                 std::to_string(config.vocab_size_with_blank) +
                                 " does not match charset size + blank " +
                                 std::to_string(charset.vocab_size_with_blank()));
  if (normalizer.dim() != config.input_dim)
    fail(ErrorKind::kConfig, "normalizer dimension does not match the network input");
  return Model{config, charset, normalizer, init_params(config, seed)};
}

FramesXd model_logits(const Model& model, const Eigen::Ref<const FramesXd>& features) {
  return forward(model.params.weights, model.config, model.normalizer.apply(features)).logits;
}

double mean_loss(const Model& model, const std::vector<TrainingExample>& examples,
                 Index* skipped) {
  double loss = 0.0;
  Index chars = 0, skip = 0;
  for (const TrainingExample& ex : examples) {
    const FramesXd logits = model_logits(model, ex.features);
    if (logits.rows() < required_length(ex.labels)) {
      ++skip;
      continue;
    }
    loss += ctc_loss(logits, ex.labels).loss;
    chars += static_cast<Index>(ex.labels.size());
  }
  if (skipped) *skipped = skip;
  if (chars == 0) return std::numeric_limits<double>::quiet_NaN();
  return loss / static_cast<double>(chars);
}

TrainResult train(const Model& initial, const std::vector<TrainingExample>& train_set,
                  const std::vector<TrainingExample>& validation_set,
                  const TrainOptions& options) {
  if (options.epochs < 0) fail(ErrorKind::kConfig, "epochs must be >= 0");
  if (train_set.empty()) fail(ErrorKind::kTraining, "empty training set");

  TrainResult result;
  result.final_model = initial;
  Model& model = result.final_model;

  // Drop examples whose transcript cannot fit in their output length.
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < train_set.size(); ++i) {
    const TrainingExample& ex = train_set[i];
    if (ex.features.cols() != model.config.input_dim)
      fail(ErrorKind::kShape, "example '" + ex.id + "' has feature dimension " +
                                  std::to_string(ex.features.cols()));
    const Index out_rows =
        forward(model.params.weights, model.config, model.normalizer.apply(ex.features))
            .logits.rows();
    if (out_rows < required_length(ex.labels) || ex.labels.empty())
      ++result.skipped;
    else
      usable.push_back(i);
  }
  if (usable.empty())
    fail(ErrorKind::kTraining, "all " + std::to_string(train_set.size()) +
                                   " training examples are too short for their transcripts");

  std::mt19937_64 rng(options.seed);
  double best = std::numeric_limits<double>::infinity();
  result.best_model = model;
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    std::shuffle(usable.begin(), usable.end(), rng);
    double loss_sum = 0.0;
    Index chars = 0;
    for (std::size_t i : usable) {
      const TrainingExample& ex = train_set[i];
      const ForwardTrace trace =
          forward(model.params.weights, model.config, model.normalizer.apply(ex.features));
      const CtcResult ctc = ctc_loss(trace.logits, ex.labels);
      if (!std::isfinite(ctc.loss))
        fail(ErrorKind::kNumeric, "non-finite loss on '" + ex.id + "' in epoch " +
                                      std::to_string(epoch));
      const Weights grad = backward(model.params.weights, model.config, trace, ctc.logit_grad);
      if (!std::isfinite(global_norm(grad)))
        fail(ErrorKind::kNumeric, "non-finite gradient on '" + ex.id + "' in epoch " +
                                      std::to_string(epoch));
      adam_step(model.params, grad, options.adam);
      loss_sum += ctc.loss;
      chars += static_cast<Index>(ex.labels.size());
    }
    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = loss_sum / static_cast<double>(chars);
    entry.validation_loss = validation_set.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                   : mean_loss(model, validation_set);
    const double criterion =
        std::isnan(entry.validation_loss) ? entry.train_loss : entry.validation_loss;
    if (criterion < best) {
      best = criterion;
      result.best_model = model;
      result.best_epoch = epoch;
    }
    result.log.push_back(entry);
    if (options.on_epoch) options.on_epoch(entry);
  }
  return result;
}

void save_checkpoint(const std::filesystem::path& path, const Model& model) {
  BinaryWriter out(path);
  out.put_bytes(std::string_view(kMagic, sizeof kMagic - 1));
  out.put_u8(kVersion);
  const NetworkConfig& c = model.config;
  out.put_u8(c.use_raw_front_end ? 1 : 0);
  for (Index v : {c.conv_filters, c.conv_kernel, c.pool_size, c.pool_stride, c.gru_layers,
                  c.gru_hidden, c.input_dim, c.vocab_size_with_blank})
    out.put_u64(static_cast<std::uint64_t>(v));
  out.put_string(utf8_encode(model.charset.characters()));
  out.put_matrix(model.normalizer.mean);
  out.put_matrix(model.normalizer.inv_std);
  put_tensors(out, model.params.weights);
  out.put_u64(static_cast<std::uint64_t>(model.params.adam.step));
  put_tensors(out, model.params.adam.first_moment);
  put_tensors(out, model.params.adam.second_moment);
  out.close();
}

Model load_checkpoint(const std::filesystem::path& path) {
  BinaryReader in(path);
  const std::string magic = in.get_bytes(sizeof kMagic - 1);
  if (magic != kMagic) fail(ErrorKind::kIo, "'" + path.string() + "' is not a checkpoint");
  const std::uint8_t version = in.get_u8();
  if (version != kVersion)
    fail(ErrorKind::kIo, "checkpoint '" + path.string() + "' has unsupported version " +
                             std::to_string(version));
  Model model;
  NetworkConfig& c = model.config;
  c.use_raw_front_end = in.get_u8() != 0;
  for (Index* v : {&c.conv_filters, &c.conv_kernel, &c.pool_size, &c.pool_stride,
                   &c.gru_layers, &c.gru_hidden, &c.input_dim, &c.vocab_size_with_blank}) {
    *v = static_cast<Index>(in.get_u64());
    if (*v > 1'000'000)
      fail(ErrorKind::kIo, "implausible network size in checkpoint '" + path.string() + "'");
  }
  try {
    c.validate();
  } catch (const Error& e) {
    fail(ErrorKind::kIo, "checkpoint '" + path.string() + "': " + e.what());
  }
  model.charset = Charset(utf8_decode(in.get_string()));
  model.normalizer.mean = in.get_matrix();
  model.normalizer.inv_std = in.get_matrix();
  if (model.normalizer.mean.size() != c.input_dim ||
      model.normalizer.inv_std.size() != c.input_dim ||
      model.charset.vocab_size_with_blank() != c.vocab_size_with_blank)
    fail(ErrorKind::kIo, "checkpoint '" + path.string() + "' is internally inconsistent");
  model.params = init_params(c, 0);
  get_tensors(in, model.params.weights, path);
  model.params.adam.step = static_cast<std::int64_t>(in.get_u64());
  get_tensors(in, model.params.adam.first_moment, path);
  get_tensors(in, model.params.adam.second_moment, path);
  in.expect_end();
  return model;
}

}  // namespace eegctc
