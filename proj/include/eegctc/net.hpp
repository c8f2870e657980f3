// eegctc/net.hpp

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

#ifndef EEGCTC_NET_HPP_
#define EEGCTC_NET_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eegctc/types.hpp"

namespace eegctc {

struct NetworkConfig {
  bool use_raw_front_end = false;
  Index conv_filters = 100;
  Index conv_kernel = 3;
  Index pool_size = 2;
  Index pool_stride = 1;
  Index gru_layers = 1;
  Index gru_hidden = 128;
  Index input_dim = 0;
  Index vocab_size_with_blank = 0;

  void validate() const;
  bool operator==(const NetworkConfig&) const = default;
};

// Tensors are stored so that a row of activations multiplies them from the
// left: activations [T x in] * weight [in x out]. Biases are [1 x out].
struct ConvLayer {
  MatrixXd kernel;  // [conv_kernel * in x filters]; row j * in + c is tap j, channel c
  MatrixXd bias;
};

struct GruLayer {
  MatrixXd w_update, w_reset, w_candidate;  // [in x H]
  MatrixXd u_update, u_reset, u_candidate;  // [H x H]
  MatrixXd b_update, b_reset, b_candidate;  // [1 x H]
};

struct DenseLayer {
  MatrixXd weight;  // [H x vocab]
  MatrixXd bias;
};

struct Weights {
  std::vector<ConvLayer> conv;  // empty without the raw front end, else 2
  std::vector<GruLayer> gru;
  DenseLayer dense;
};

/// Every tensor with a stable name, in a fixed order.
std::vector<std::pair<std::string, MatrixXd*>> named_tensors(Weights& weights);
std::vector<std::pair<std::string, const MatrixXd*>> named_tensors(const Weights& weights);

/// Same shapes, all zeros.
Weights zeros_like(const Weights& weights);

struct AdamState {
  Weights first_moment;
  Weights second_moment;
  std::int64_t step = 0;
};

struct NetworkParams {
  Weights weights;
  AdamState adam;
};

/// Glorot-uniform weights, zero biases, zero Adam state. Bitwise
/// reproducible for a given (config, seed).
NetworkParams init_params(const NetworkConfig& config, std::uint64_t seed);

/// Zero-padded temporal convolution (output length T) followed by ReLU.
FramesXd conv1d_same(const Eigen::Ref<const FramesXd>& input, const MatrixXd& kernel,
                     const MatrixXd& bias);

/// Max pooling with 'same' padding: ceil(T / stride) outputs, padding never
/// wins the max.
FramesXd maxpool1d_same(const Eigen::Ref<const FramesXd>& input, Index pool, Index stride);

struct ConvCache {
  FramesXd columns;         // im2col of the layer input
  FramesXd pre_activation;  // before ReLU
};

struct PoolCache {
  Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> argmax;
  Index input_rows = 0;
};

struct GruCache {
  FramesXd input;
  FramesXd update, reset, candidate;
  FramesXd previous;  // h_{t-1}, row t
  FramesXd hidden;    // h_t, row t
};

struct ForwardTrace {
  FramesXd logits;  // [T' x vocab]
  std::vector<ConvCache> conv;
  std::vector<PoolCache> pool;
  std::vector<GruCache> gru;
};

ForwardTrace forward(const Weights& weights, const NetworkConfig& config,
                     const Eigen::Ref<const FramesXd>& features);

/// Gradient of sum_t <logit_grad_t, logits_t> with respect to every tensor.
Weights backward(const Weights& weights, const NetworkConfig& config,
                 const ForwardTrace& trace, const Eigen::Ref<const FramesXd>& logit_grad);

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double max_grad_norm = 0.0;  // 0 disables global-norm clipping
};

/// One bias-corrected Adam update; increments the step counter.
void adam_step(NetworkParams& params, const Weights& gradients, const AdamOptions& options = {});

double global_norm(const Weights& weights);

}  // namespace eegctc

#endif  // EEGCTC_NET_HPP_
