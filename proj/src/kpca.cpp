// src/kpca.cpp

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

#include "eegctc/kpca.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "eegctc/binary_io.hpp"

namespace eegctc {

namespace {

void set_centering(KpcaModel& model) {
  const MatrixXd gram =
      kernel_matrix(model.training_frames, model.training_frames, model.kernel);
  model.gram_column_means = gram.colwise().mean().transpose();
  model.gram_mean = gram.mean();
}

FramesXd subsample(const Eigen::Ref<const FramesXd>& frames, const KpcaOptions& options) {
  const Index n = frames.rows();
  if (options.max_fit_frames <= 0 || n <= options.max_fit_frames) return frames;
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(options.subsample_seed);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(static_cast<std::size_t>(options.max_fit_frames));
  std::sort(order.begin(), order.end());
  FramesXd out(options.max_fit_frames, frames.cols());
  for (std::size_t i = 0; i < order.size(); ++i)
    out.row(static_cast<Index>(i)) = frames.row(order[i]);
  return out;
}

}  // namespace

MatrixXd centered_gram(const Eigen::Ref<const FramesXd>& frames, const PolyKernel& kernel) {
  MatrixXd gram = kernel_matrix(frames, frames, kernel);
  const VectorXd column_means = gram.colwise().mean().transpose();
  const double mean = gram.mean();
  gram.rowwise() -= column_means.transpose();
  gram.colwise() -= column_means;
  gram.array() += mean;
  return gram;
}

PolyKernel default_kernel(Index input_dim) {
  if (input_dim < 1) fail(ErrorKind::kShape, "input dimension must be positive");
  return PolyKernel{3, 1.0 / static_cast<double>(input_dim), 1.0};
}

KpcaModel fit_kpca(const Eigen::Ref<const FramesXd>& frames, const PolyKernel& kernel,
                   Index target_dim, const KpcaOptions& options) {
  if (frames.rows() < 2)
    fail(ErrorKind::kData, "KPCA needs at least 2 frames, got " +
                               std::to_string(frames.rows()));
  if (target_dim < 1) fail(ErrorKind::kConfig, "KPCA target dimension must be >= 1");
  if (kernel.degree < 1) fail(ErrorKind::kConfig, "kernel degree must be >= 1");

  KpcaModel model;
  model.kernel = kernel;
  model.requested_dim = target_dim;
  model.training_frames = subsample(frames, options);
  const Index n = model.training_frames.rows();

  set_centering(model);
  const MatrixXd centered = centered_gram(model.training_frames, kernel);

  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(centered);
  if (solver.info() != Eigen::Success)
    fail(ErrorKind::kNumeric, "eigendecomposition of the centered kernel failed");
  // Ascending from the solver; store descending.
  model.eigenvalues = solver.eigenvalues().reverse();
  const MatrixXd vectors = solver.eigenvectors().rowwise().reverse();

  const double largest = std::max(model.eigenvalues[0], 0.0);
  const double threshold = 1e-9 * largest;
  Index rank = 0;
  for (Index i = 0; i < n; ++i) {
    if (largest > 0.0 && model.eigenvalues[i] > threshold)
      ++rank;
    else
      model.eigenvalues[i] = 0.0;
  }

  model.target_dim = std::min(target_dim, rank);
  model.rank_limited = model.target_dim < target_dim;
  model.projection.resize(n, model.target_dim);
  for (Index j = 0; j < model.target_dim; ++j)
    model.projection.col(j) = vectors.col(j) / std::sqrt(model.eigenvalues[j]);

  std::ostringstream descriptor;
  descriptor << "kpca degree=" << kernel.degree << " scale=" << kernel.scale
             << " offset=" << kernel.offset << " n=" << n << " k=" << model.target_dim;
  if (n < frames.rows()) descriptor << " subsample_seed=" << options.subsample_seed;
  model.descriptor = descriptor.str();
  return model;
}

FramesXd transform(const KpcaModel& model, const Eigen::Ref<const FramesXd>& frames) {
  if (frames.cols() != model.input_dim())
    fail(ErrorKind::kShape, "frames have dimension " + std::to_string(frames.cols()) +
                                ", model expects " + std::to_string(model.input_dim()));
  MatrixXd cross = kernel_matrix(frames, model.training_frames, model.kernel);
  const VectorXd row_means = cross.rowwise().mean();
  cross.rowwise() -= model.gram_column_means.transpose();
  cross.colwise() -= row_means;
  cross.array() += model.gram_mean;
  return cross * model.projection;
}

std::vector<std::pair<Index, double>> explained_variance_curve(const KpcaModel& model) {
  const double total = model.eigenvalues.sum();
  if (!(total > 0.0))
    fail(ErrorKind::kData, "all KPCA eigenvalues are zero; explained variance undefined");
  std::vector<std::pair<Index, double>> curve;
  double running = 0.0;
  for (Index i = 0; i < model.eigenvalues.size(); ++i) {
    running += model.eigenvalues[i];
    curve.emplace_back(i + 1, std::min(running / total, 1.0));
  }
  return curve;
}

FeatureSequence reduce_features(const KpcaModel& model, const FeatureSequence& features) {
  FeatureSequence projected(transform(model, features.frames()), features.frame_rate_hz(),
                            features.descriptor() + " | " + model.descriptor);
  return append_deltas(projected);
}

FeatureSequence reduce_pipeline(const FeatureSequence& features, const PolyKernel& kernel,
                                Index target_dim, const KpcaOptions& options) {
  const KpcaModel model = fit_kpca(features.frames(), kernel, target_dim, options);
  return reduce_features(model, features);
}

void save_kpca(const std::filesystem::path& path, const KpcaModel& model) {
  BinaryWriter writer(path);
  writer.put_u64(static_cast<std::uint64_t>(model.training_frames.rows()));
  writer.put_u64(static_cast<std::uint64_t>(model.training_frames.cols()));
  writer.put_u64(static_cast<std::uint64_t>(model.target_dim));
  writer.put_u64(static_cast<std::uint64_t>(model.kernel.degree));
  writer.put_f64(model.kernel.scale);
  writer.put_f64(model.kernel.offset);
  writer.put_u64(static_cast<std::uint64_t>(model.requested_dim));
  writer.put_string(model.descriptor);
  writer.put_values(model.training_frames);
  writer.put_values(model.eigenvalues);
  writer.put_values(model.projection);
  writer.close();
}

KpcaModel load_kpca(const std::filesystem::path& path) {
  BinaryReader reader(path);
  KpcaModel model;
  const auto n = static_cast<Index>(reader.get_u64());
  const auto d = static_cast<Index>(reader.get_u64());
  const auto k = static_cast<Index>(reader.get_u64());
  model.kernel.degree = static_cast<int>(reader.get_u64());
  model.kernel.scale = reader.get_f64();
  model.kernel.offset = reader.get_f64();
  model.requested_dim = static_cast<Index>(reader.get_u64());
  model.descriptor = reader.get_string();
  if (n < 2 || d < 1 || k < 0 || k > n || n > 100000 || d > 100000)
    fail(ErrorKind::kIo, "implausible KPCA header in '" + path.string() + "'");
  model.training_frames.resize(n, d);
  reader.get_values(model.training_frames);
  MatrixXd eigenvalues(n, 1);
  reader.get_values(eigenvalues);
  model.eigenvalues = eigenvalues.col(0);
  model.projection.resize(n, k);
  reader.get_values(model.projection);
  reader.expect_end();
  model.target_dim = k;
  model.rank_limited = k < model.requested_dim;
  set_centering(model);
  return model;
}

}  // namespace eegctc
