// src/net.cpp

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

#include "eegctc/net.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "eegctc/error.hpp"

namespace eegctc {

namespace {

using RowVec = Eigen::RowVectorXd;

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void glorot(MatrixXd& tensor, Index fan_in, Index fan_out, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (Index r = 0; r < tensor.rows(); ++r)
    for (Index c = 0; c < tensor.cols(); ++c)
      tensor(r, c) = limit * (2.0 * unit_uniform(rng) - 1.0);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Index pool_output_rows(Index rows, Index stride) { return (rows + stride - 1) / stride; }

Index pool_left_pad(Index rows, Index pool, Index stride) {
  const Index total = std::max((pool_output_rows(rows, stride) - 1) * stride + pool - rows,
                               Index{0});
  return total / 2;
}

FramesXd im2col(const Eigen::Ref<const FramesXd>& input, Index width) {
  const Index rows = input.rows();
  const Index channels = input.cols();
  const Index left = (width - 1) / 2;
  FramesXd columns = FramesXd::Zero(rows, width * channels);
  for (Index t = 0; t < rows; ++t)
    for (Index j = 0; j < width; ++j) {
      const Index source = t + j - left;
      if (source >= 0 && source < rows)
        columns.block(t, j * channels, 1, channels) = input.row(source);
    }
  return columns;
}

FramesXd pool_forward(const Eigen::Ref<const FramesXd>& input, Index pool, Index stride,
                      PoolCache* cache) {
  const Index rows = input.rows();
  const Index out_rows = pool_output_rows(rows, stride);
  const Index left = pool_left_pad(rows, pool, stride);
  FramesXd out(out_rows, input.cols());
  if (cache) {
    cache->argmax.resize(out_rows, input.cols());
    cache->input_rows = rows;
  }
  for (Index i = 0; i < out_rows; ++i) {
    const Index begin = std::max(i * stride - left, Index{0});
    const Index end = std::min(i * stride - left + pool, rows);
    for (Index c = 0; c < input.cols(); ++c) {
      Index best = begin;
      for (Index t = begin + 1; t < end; ++t)
        if (input(t, c) > input(best, c)) best = t;
      out(i, c) = input(best, c);
      if (cache) cache->argmax(i, c) = best;
    }
  }
  return out;
}

FramesXd gru_forward(const GruLayer& layer, const Eigen::Ref<const FramesXd>& input,
                     GruCache& cache) {
  const Index rows = input.rows();
  const Index hidden = layer.u_update.rows();
  cache.input = input;
  // Input projections for every frame at once.
  const FramesXd x_update = (input * layer.w_update).rowwise() + RowVec(layer.b_update);
  const FramesXd x_reset = (input * layer.w_reset).rowwise() + RowVec(layer.b_reset);
  const FramesXd x_candidate =
      (input * layer.w_candidate).rowwise() + RowVec(layer.b_candidate);
  cache.update.resize(rows, hidden);
  cache.reset.resize(rows, hidden);
  cache.candidate.resize(rows, hidden);
  cache.previous.resize(rows, hidden);
  cache.hidden.resize(rows, hidden);

  RowVec h = RowVec::Zero(hidden);
  for (Index t = 0; t < rows; ++t) {
    cache.previous.row(t) = h;
    const RowVec z =
        (x_update.row(t) + h * layer.u_update).unaryExpr([](double v) { return sigmoid(v); });
    const RowVec r =
        (x_reset.row(t) + h * layer.u_reset).unaryExpr([](double v) { return sigmoid(v); });
    const RowVec gated = r.cwiseProduct(h);
    const RowVec c = (x_candidate.row(t) + gated * layer.u_candidate).array().tanh().matrix();
    h = (1.0 - z.array()) * h.array() + z.array() * c.array();
    cache.update.row(t) = z;
    cache.reset.row(t) = r;
    cache.candidate.row(t) = c;
    cache.hidden.row(t) = h;
  }
  return cache.hidden;
}

// Returns d/d input; accumulates into `grad`.
FramesXd gru_backward(const GruLayer& layer, const GruCache& cache,
                      const Eigen::Ref<const FramesXd>& d_hidden, GruLayer& grad) {
  const Index rows = cache.hidden.rows();
  const Index hidden = cache.hidden.cols();
  FramesXd d_update(rows, hidden), d_reset(rows, hidden), d_candidate(rows, hidden);
  RowVec carry = RowVec::Zero(hidden);
  for (Index t = rows - 1; t >= 0; --t) {
    const auto z = cache.update.row(t).array();
    const auto r = cache.reset.row(t).array();
    const auto c = cache.candidate.row(t).array();
    const auto h_prev = cache.previous.row(t).array();
    const RowVec dh = d_hidden.row(t) + carry;

    const RowVec da_candidate = (dh.array() * z * (1.0 - c.square())).matrix();
    const RowVec d_gated = da_candidate * layer.u_candidate.transpose();
    const RowVec da_reset = (d_gated.array() * h_prev * r * (1.0 - r)).matrix();
    const RowVec da_update = (dh.array() * (c - h_prev) * z * (1.0 - z)).matrix();

    carry = (dh.array() * (1.0 - z) + d_gated.array() * r).matrix();
    carry.noalias() += da_update * layer.u_update.transpose();
    carry.noalias() += da_reset * layer.u_reset.transpose();

    d_update.row(t) = da_update;
    d_reset.row(t) = da_reset;
    d_candidate.row(t) = da_candidate;
  }

  const FramesXd gated_previous = cache.reset.cwiseProduct(cache.previous);
  grad.w_update.noalias() += cache.input.transpose() * d_update;
  grad.w_reset.noalias() += cache.input.transpose() * d_reset;
  grad.w_candidate.noalias() += cache.input.transpose() * d_candidate;
  grad.u_update.noalias() += cache.previous.transpose() * d_update;
  grad.u_reset.noalias() += cache.previous.transpose() * d_reset;
  grad.u_candidate.noalias() += gated_previous.transpose() * d_candidate;
  grad.b_update += d_update.colwise().sum();
  grad.b_reset += d_reset.colwise().sum();
  grad.b_candidate += d_candidate.colwise().sum();

  FramesXd d_input = d_update * layer.w_update.transpose();
  d_input.noalias() += d_reset * layer.w_reset.transpose();
  d_input.noalias() += d_candidate * layer.w_candidate.transpose();
  return d_input;
}

FramesXd conv_backward(const ConvLayer& layer, const ConvCache& cache,
                       const Eigen::Ref<const FramesXd>& d_out, Index in_channels,
                       ConvLayer& grad) {
  const FramesXd d_pre =
      (cache.pre_activation.array() > 0.0).select(d_out, FramesXd::Zero(d_out.rows(),
                                                                         d_out.cols()));
  grad.kernel.noalias() += cache.columns.transpose() * d_pre;
  grad.bias += d_pre.colwise().sum();
  const FramesXd d_columns = d_pre * layer.kernel.transpose();

  const Index rows = d_out.rows();
  const Index width = layer.kernel.rows() / in_channels;
  const Index left = (width - 1) / 2;
  FramesXd d_input = FramesXd::Zero(rows, in_channels);
  for (Index t = 0; t < rows; ++t)
    for (Index j = 0; j < width; ++j) {
      const Index source = t + j - left;
      if (source >= 0 && source < rows)
        d_input.row(source) += d_columns.block(t, j * in_channels, 1, in_channels);
    }
  return d_input;
}

FramesXd pool_backward(const PoolCache& cache, const Eigen::Ref<const FramesXd>& d_out) {
  FramesXd d_input = FramesXd::Zero(cache.input_rows, d_out.cols());
  for (Index i = 0; i < d_out.rows(); ++i)
    for (Index c = 0; c < d_out.cols(); ++c) d_input(cache.argmax(i, c), c) += d_out(i, c);
  return d_input;
}

template <typename W, typename Out>
void collect_tensors(W& weights, Out& out) {
  for (std::size_t i = 0; i < weights.conv.size(); ++i) {
    const std::string p = "conv" + std::to_string(i) + ".";
    out.emplace_back(p + "kernel", &weights.conv[i].kernel);
    out.emplace_back(p + "bias", &weights.conv[i].bias);
  }
  for (std::size_t i = 0; i < weights.gru.size(); ++i) {
    const std::string p = "gru" + std::to_string(i) + ".";
    auto& g = weights.gru[i];
    out.emplace_back(p + "w_update", &g.w_update);
    out.emplace_back(p + "w_reset", &g.w_reset);
    out.emplace_back(p + "w_candidate", &g.w_candidate);
    out.emplace_back(p + "u_update", &g.u_update);
    out.emplace_back(p + "u_reset", &g.u_reset);
    out.emplace_back(p + "u_candidate", &g.u_candidate);
    out.emplace_back(p + "b_update", &g.b_update);
    out.emplace_back(p + "b_reset", &g.b_reset);
    out.emplace_back(p + "b_candidate", &g.b_candidate);
  }
  out.emplace_back("dense.weight", &weights.dense.weight);
  out.emplace_back("dense.bias", &weights.dense.bias);
}

}  // namespace

void NetworkConfig::validate() const {
  const auto positive = [](Index v, const char* name) {
    if (v < 1) fail(ErrorKind::kConfig, std::string(name) + " must be positive");
  };
  if (use_raw_front_end) {
    positive(conv_filters, "conv_filters");
    positive(conv_kernel, "conv_kernel");
    positive(pool_size, "pool_size");
    positive(pool_stride, "pool_stride");
  }
  positive(gru_layers, "gru_layers");
  positive(gru_hidden, "gru_hidden");
  positive(input_dim, "input_dim");
  if (vocab_size_with_blank < 2)
    fail(ErrorKind::kConfig, "vocab_size_with_blank must be at least 2");
}

std::vector<std::pair<std::string, MatrixXd*>> named_tensors(Weights& weights) {
  std::vector<std::pair<std::string, MatrixXd*>> out;
  collect_tensors(weights, out);
  return out;
}

std::vector<std::pair<std::string, const MatrixXd*>> named_tensors(const Weights& weights) {
  std::vector<std::pair<std::string, const MatrixXd*>> out;
  collect_tensors(weights, out);
  return out;
}

Weights zeros_like(const Weights& weights) {
  Weights out = weights;
  for (auto& [name, tensor] : named_tensors(out)) tensor->setZero();
  return out;
}

NetworkParams init_params(const NetworkConfig& config, std::uint64_t seed) {
  config.validate();
  std::mt19937_64 rng(seed);
  Weights w;
  Index in = config.input_dim;
  if (config.use_raw_front_end) {
    for (int i = 0; i < 2; ++i) {
      ConvLayer layer;
      layer.kernel.resize(config.conv_kernel * in, config.conv_filters);
      glorot(layer.kernel, config.conv_kernel * in, config.conv_kernel * config.conv_filters,
             rng);
      layer.bias = MatrixXd::Zero(1, config.conv_filters);
      w.conv.push_back(std::move(layer));
      in = config.conv_filters;
    }
  }
  const Index h = config.gru_hidden;
  for (Index i = 0; i < config.gru_layers; ++i) {
    GruLayer g;
    for (MatrixXd* m : {&g.w_update, &g.w_reset, &g.w_candidate}) {
      m->resize(in, h);
      glorot(*m, in, h, rng);
    }
    for (MatrixXd* m : {&g.u_update, &g.u_reset, &g.u_candidate}) {
      m->resize(h, h);
      glorot(*m, h, h, rng);
    }
    for (MatrixXd* m : {&g.b_update, &g.b_reset, &g.b_candidate}) *m = MatrixXd::Zero(1, h);
    w.gru.push_back(std::move(g));
    in = h;
  }
  w.dense.weight.resize(h, config.vocab_size_with_blank);
  glorot(w.dense.weight, h, config.vocab_size_with_blank, rng);
  w.dense.bias = MatrixXd::Zero(1, config.vocab_size_with_blank);

  NetworkParams params;
  params.adam.first_moment = zeros_like(w);
  params.adam.second_moment = zeros_like(w);
  params.weights = std::move(w);
  return params;
}

FramesXd conv1d_same(const Eigen::Ref<const FramesXd>& input, const MatrixXd& kernel,
                     const MatrixXd& bias) {
  if (input.cols() == 0 || kernel.rows() % input.cols() != 0 || bias.cols() != kernel.cols())
    fail(ErrorKind::kShape, "convolution kernel does not match the input channels");
  const FramesXd columns = im2col(input, kernel.rows() / input.cols());
  return ((columns * kernel).rowwise() + RowVec(bias)).cwiseMax(0.0);
}

FramesXd maxpool1d_same(const Eigen::Ref<const FramesXd>& input, Index pool, Index stride) {
  if (pool < 1 || stride < 1) fail(ErrorKind::kConfig, "pool size and stride must be positive");
  return pool_forward(input, pool, stride, nullptr);
}

ForwardTrace forward(const Weights& weights, const NetworkConfig& config,
                     const Eigen::Ref<const FramesXd>& features) {
  if (features.cols() != config.input_dim)
    fail(ErrorKind::kShape, "features have dimension " + std::to_string(features.cols()) +
                                ", network expects " + std::to_string(config.input_dim));
  if (features.rows() < 1) fail(ErrorKind::kShape, "network input has no frames");

  ForwardTrace trace;
  FramesXd x = features;
  for (const ConvLayer& layer : weights.conv) {
    ConvCache cache;
    cache.columns = im2col(x, layer.kernel.rows() / x.cols());
    cache.pre_activation = (cache.columns * layer.kernel).rowwise() + RowVec(layer.bias);
    x = cache.pre_activation.cwiseMax(0.0);
    trace.conv.push_back(std::move(cache));
    PoolCache pool;
    x = pool_forward(x, config.pool_size, config.pool_stride, &pool);
    trace.pool.push_back(std::move(pool));
  }
  for (const GruLayer& layer : weights.gru) {
    GruCache cache;
    x = gru_forward(layer, x, cache);
    trace.gru.push_back(std::move(cache));
  }
  trace.logits = (x * weights.dense.weight).rowwise() + RowVec(weights.dense.bias);
  return trace;
}

Weights backward(const Weights& weights, const NetworkConfig& config,
                 const ForwardTrace& trace, const Eigen::Ref<const FramesXd>& logit_grad) {
  if (logit_grad.rows() != trace.logits.rows() || logit_grad.cols() != trace.logits.cols())
    fail(ErrorKind::kShape, "logit gradient shape does not match the forward trace");
  if (trace.gru.size() != weights.gru.size() || trace.conv.size() != weights.conv.size())
    fail(ErrorKind::kShape, "forward trace does not match the network");

  Weights grad = zeros_like(weights);
  const FramesXd& top = trace.gru.back().hidden;
  grad.dense.weight.noalias() = top.transpose() * logit_grad;
  grad.dense.bias = logit_grad.colwise().sum();
  FramesXd d = logit_grad * weights.dense.weight.transpose();

  for (std::size_t i = weights.gru.size(); i-- > 0;)
    d = gru_backward(weights.gru[i], trace.gru[i], d, grad.gru[i]);
  for (std::size_t i = weights.conv.size(); i-- > 0;) {
    d = pool_backward(trace.pool[i], d);
    const Index in_channels = i == 0 ? config.input_dim : config.conv_filters;
    d = conv_backward(weights.conv[i], trace.conv[i], d, in_channels, grad.conv[i]);
  }
  return grad;
}

double global_norm(const Weights& weights) {
  double sum = 0.0;
  for (const auto& [name, tensor] : named_tensors(weights)) sum += tensor->squaredNorm();
  return std::sqrt(sum);
}

void adam_step(NetworkParams& params, const Weights& gradients, const AdamOptions& options) {
  double scale = 1.0;
  if (options.max_grad_norm > 0.0) {
    const double norm = global_norm(gradients);
    if (norm > options.max_grad_norm) scale = options.max_grad_norm / norm;
  }
  params.adam.step += 1;
  const double t = static_cast<double>(params.adam.step);
  const double correction1 = 1.0 - std::pow(options.beta1, t);
  const double correction2 = 1.0 - std::pow(options.beta2, t);

  auto w = named_tensors(params.weights);
  auto m = named_tensors(params.adam.first_moment);
  auto v = named_tensors(params.adam.second_moment);
  const auto g = named_tensors(gradients);
  if (g.size() != w.size()) fail(ErrorKind::kShape, "gradient does not match the parameters");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (g[i].second->rows() != w[i].second->rows() || g[i].second->cols() != w[i].second->cols())
      fail(ErrorKind::kShape, "gradient shape mismatch for " + w[i].first);
    const auto grad = (*g[i].second).array() * scale;
    auto& first = *m[i].second;
    auto& second = *v[i].second;
    first = options.beta1 * first.array() + (1.0 - options.beta1) * grad;
    second = options.beta2 * second.array() + (1.0 - options.beta2) * grad.square();
    w[i].second->array() -= options.learning_rate * (first.array() / correction1) /
                            ((second.array() / correction2).sqrt() + options.epsilon);
  }
}

}  // namespace eegctc
