// eegctc/kpca.hpp

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

#ifndef EEGCTC_KPCA_HPP_
#define EEGCTC_KPCA_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "eegctc/error.hpp"
#include "eegctc/features.hpp"
#include "eegctc/types.hpp"

namespace eegctc {

struct PolyKernel {
  int degree = 3;
  double scale = 1.0;
  double offset = 1.0;
};

/// Degree 3, scale 1 / input_dim, offset 1.
PolyKernel default_kernel(Index input_dim);

/// (scale * <x, y> + offset)^degree
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar poly_kernel(const Eigen::MatrixBase<DerivedX>& x,
                                      const Eigen::MatrixBase<DerivedY>& y,
                                      const PolyKernel& kernel) {
  if (x.size() != y.size())
    fail(ErrorKind::kShape, "kernel arguments have dimensions " +
                                std::to_string(x.size()) + " and " +
                                std::to_string(y.size()));
  using Scalar = typename DerivedX::Scalar;
  const Scalar dot = x.reshaped().dot(y.reshaped().template cast<Scalar>());
  return std::pow(Scalar(kernel.scale) * dot + Scalar(kernel.offset), kernel.degree);
}

/// Gram matrix between the rows of a and the rows of b.
template <typename DerivedA, typename DerivedB>
Matrix<typename DerivedA::Scalar> kernel_matrix(const Eigen::MatrixBase<DerivedA>& a,
                                                const Eigen::MatrixBase<DerivedB>& b,
                                                const PolyKernel& kernel) {
  if (a.cols() != b.cols())
    fail(ErrorKind::kShape, "frame dimension " + std::to_string(a.cols()) +
                                " does not match " + std::to_string(b.cols()));
  using Scalar = typename DerivedA::Scalar;
  Matrix<Scalar> gram = (a * b.transpose()).eval();
  gram = (gram.array() * Scalar(kernel.scale) + Scalar(kernel.offset))
             .pow(Scalar(kernel.degree))
             .matrix();
  return gram;
}

/// Double-centered Gram matrix K - 1K - K1 + 1K1 of the rows of `frames`.
MatrixXd centered_gram(const Eigen::Ref<const FramesXd>& frames, const PolyKernel& kernel);

struct KpcaOptions {
  Index max_fit_frames = 2000;
  std::uint64_t subsample_seed = 0;
};

/// A fitted model. Projection columns are alpha_i = v_i / sqrt(lambda_i) so
/// that lambda_i * alpha_i' alpha_i = 1.
struct KpcaModel {
  FramesXd training_frames;        // [n x d]
  PolyKernel kernel;
  VectorXd eigenvalues;            // all n, descending, clamped >= 0
  MatrixXd projection;             // [n x k]
  Index target_dim = 0;            // k actually kept
  Index requested_dim = 0;
  bool rank_limited = false;       // k < requested_dim
  std::string descriptor;

  // Centering statistics of the training Gram matrix.
  VectorXd gram_column_means;
  double gram_mean = 0.0;

  Index input_dim() const { return training_frames.cols(); }
};

KpcaModel fit_kpca(const Eigen::Ref<const FramesXd>& frames, const PolyKernel& kernel,
                   Index target_dim, const KpcaOptions& options = {});

/// [m x k] scores of new frames against the stored training set.
FramesXd transform(const KpcaModel& model, const Eigen::Ref<const FramesXd>& frames);

/// (components, cumulative fraction of total eigenvalue mass).
std::vector<std::pair<Index, double>> explained_variance_curve(const KpcaModel& model);

/// Project with a fitted model and append deltas (dim 3k).
FeatureSequence reduce_features(const KpcaModel& model, const FeatureSequence& features);

/// Fit on `features` itself, project, append deltas.
FeatureSequence reduce_pipeline(const FeatureSequence& features, const PolyKernel& kernel,
                                Index target_dim, const KpcaOptions& options = {});

// Model file: u64 n, u64 d, u64 k, u64 degree, f64 scale, f64 offset,
// u64 requested k, descriptor string, training frames [n x d],
// eigenvalues [n], projection [n x k]; little-endian, row-major.
void save_kpca(const std::filesystem::path& path, const KpcaModel& model);
KpcaModel load_kpca(const std::filesystem::path& path);

}  // namespace eegctc

#endif  // EEGCTC_KPCA_HPP_
