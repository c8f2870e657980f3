// tests/kpca_test.cpp

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <random>

#include <Eigen/SVD>

#include "eegctc/kpca.hpp"
#include "test_util.hpp"

using namespace eegctc;
using eegctc::testing::error_kind;
using eegctc::testing::random_frames;

namespace {

const PolyKernel kLinear{1, 1.0, 0.0};

// Every column of `a` equals the matching column of `b` up to sign.
void check_columns_up_to_sign(const MatrixXd& a, const MatrixXd& b, double tol) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    const double same = (a.col(j) - b.col(j)).cwiseAbs().maxCoeff();
    const double flipped = (a.col(j) + b.col(j)).cwiseAbs().maxCoeff();
    CHECK(std::min(same, flipped) < tol);
  }
}

}  // namespace

TEST_CASE("polynomial kernel values") {
  const PolyKernel cubic{3, 1.0, 1.0};
  CHECK(poly_kernel(Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 0), cubic) == 8.0);
  CHECK(poly_kernel(Eigen::Vector2d(0, 0), Eigen::Vector2d(5, -2), PolyKernel{3, 1.0, 0.0}) ==
        0.0);
  CHECK(poly_kernel(Eigen::Vector2d(1, 2), Eigen::Vector2d(3, 4), cubic) == 1728.0);
  CHECK(error_kind([&] {
          poly_kernel(VectorXd::Ones(2), VectorXd::Ones(3), cubic);
        }) == ErrorKind::kShape);

  const PolyKernel d = default_kernel(4);
  CHECK(d.degree == 3);
  CHECK(d.scale == 0.25);
  CHECK(d.offset == 1.0);
}

TEST_CASE("identical frames give a zero spectrum") {
  FramesXd frames(6, 3);
  frames.rowwise() = Eigen::RowVector3d(0.5, -1.0, 2.0);
  const KpcaModel model = fit_kpca(frames, default_kernel(3), 2);
  CHECK(model.eigenvalues.size() == 6);
  CHECK(model.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
  CHECK(model.rank_limited);
  CHECK(model.target_dim == 0);
  CHECK(centered_gram(frames, default_kernel(3)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(error_kind([&] { explained_variance_curve(model); }) == ErrorKind::kData);
}

TEST_CASE("two distinct frames have rank one") {
  FramesXd frames(2, 3);
  frames << 1.0, 0.0, 2.0, -1.0, 3.0, 0.5;
  const KpcaModel model = fit_kpca(frames, default_kernel(3), 2);
  CHECK(model.eigenvalues[0] > 0.0);
  CHECK(model.eigenvalues[1] == 0.0);
  CHECK(model.target_dim == 1);
  CHECK(model.rank_limited);
  const auto curve = explained_variance_curve(model);
  REQUIRE(curve.size() == 2);
  CHECK(curve[0].first == 1);
  CHECK(curve[0].second == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit preconditions") {
  CHECK(error_kind([] { fit_kpca(FramesXd::Ones(1, 3), default_kernel(3), 1); }) ==
        ErrorKind::kData);
  CHECK(error_kind([] { fit_kpca(FramesXd::Ones(4, 3), default_kernel(3), 0); }) ==
        ErrorKind::kConfig);
  std::mt19937_64 rng(3);
  const KpcaModel model = fit_kpca(random_frames(8, 3, rng), default_kernel(3), 2);
  CHECK(error_kind([&] { transform(model, FramesXd::Ones(2, 4)); }) == ErrorKind::kShape);
}

TEST_CASE("linear kernel matches covariance PCA") {
  std::mt19937_64 rng(11);
  FramesXd x = random_frames(20, 5, rng);
  // Anisotropic scaling keeps the principal directions well separated.
  x = x * Eigen::Vector<double, 5>(5.0, 3.0, 2.0, 1.0, 0.5).asDiagonal();
  x.rowwise() -= x.colwise().mean();

  // Oracle: eigenvectors of the sample covariance, scores = X W.
  const MatrixXd cov = x.transpose() * x;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(cov);
  const MatrixXd w = eig.eigenvectors().rowwise().reverse();
  const MatrixXd oracle_scores = x * w;

  const KpcaModel model = fit_kpca(x, kLinear, 5);
  REQUIRE(model.target_dim == 5);
  CHECK((model.eigenvalues.head(5) - eig.eigenvalues().reverse()).cwiseAbs().maxCoeff() <
        1e-8);
  check_columns_up_to_sign(transform(model, x), oracle_scores, 1e-8);

  // Also agrees with an SVD of the centered data.
  Eigen::JacobiSVD<MatrixXd> svd(x, Eigen::ComputeThinU);
  const MatrixXd svd_scores = svd.matrixU() * svd.singularValues().asDiagonal();
  check_columns_up_to_sign(transform(model, x), svd_scores, 1e-8);
}

TEST_CASE("transform reproduces training scores") {
  std::mt19937_64 rng(5);
  const FramesXd x = random_frames(30, 4, rng);
  const KpcaModel model = fit_kpca(x, default_kernel(4), 6);
  REQUIRE(model.target_dim == 6);
  // Training scores are sqrt(lambda) v = lambda alpha.
  const MatrixXd stored =
      model.projection * model.eigenvalues.head(6).asDiagonal();
  const FramesXd scores = transform(model, x);
  CHECK((scores - stored).cwiseAbs().maxCoeff() < 1e-8);
  const FramesXd one = transform(model, x.row(17));
  CHECK((one.row(0) - stored.row(17)).cwiseAbs().maxCoeff() < 1e-8);

  // Unit-norm feature-space components.
  for (Index j = 0; j < 6; ++j)
    CHECK(model.eigenvalues[j] * model.projection.col(j).squaredNorm() ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("projected distances match feature-space distances") {
  std::mt19937_64 rng(9);
  const FramesXd x = random_frames(10, 3, rng);
  const PolyKernel kernel = default_kernel(3);
  const KpcaModel model = fit_kpca(x, kernel, 10);
  const FramesXd z = transform(model, x);

  // Independent centering: H K H with H = I - 11'/n.
  MatrixXd gram(10, 10);
  for (Index i = 0; i < 10; ++i)
    for (Index j = 0; j < 10; ++j) gram(i, j) = poly_kernel(x.row(i), x.row(j), kernel);
  const MatrixXd h = MatrixXd::Identity(10, 10) - MatrixXd::Constant(10, 10, 0.1);
  const MatrixXd centered = h * gram * h;

  for (Index i = 0; i < 10; ++i)
    for (Index j = 0; j < 10; ++j) {
      const double feature_space = centered(i, i) + centered(j, j) - 2.0 * centered(i, j);
      CHECK((z.row(i) - z.row(j)).squaredNorm() ==
            doctest::Approx(feature_space).epsilon(1e-6));
    }
}

TEST_CASE("centered kernel properties") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const FramesXd x = random_frames(10, 4, rng);
    const PolyKernel kernel = default_kernel(4);
    const MatrixXd centered = centered_gram(x, kernel);
    CHECK(centered.rowwise().sum().cwiseAbs().maxCoeff() < 1e-9);
    CHECK(centered.colwise().sum().cwiseAbs().maxCoeff() < 1e-9);

    const KpcaModel model = fit_kpca(x, kernel, 10);
    CHECK(model.eigenvalues.minCoeff() >= 0.0);
    for (Index i = 1; i < model.eigenvalues.size(); ++i)
      CHECK(model.eigenvalues[i] <= model.eigenvalues[i - 1]);
    // v_i = sqrt(lambda_i) alpha_i
    MatrixXd rebuilt = MatrixXd::Zero(10, 10);
    for (Index j = 0; j < model.target_dim; ++j) {
      const VectorXd v = model.projection.col(j) * std::sqrt(model.eigenvalues[j]);
      rebuilt += model.eigenvalues[j] * v * v.transpose();
    }
    CHECK((rebuilt - centered).norm() < 1e-6);
  }
}

TEST_CASE("explained variance curve") {
  KpcaModel model;
  model.eigenvalues = Eigen::Vector3d(3.0, 1.0, 0.0);
  const auto curve = explained_variance_curve(model);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0] == std::pair<Index, double>{1, 0.75});
  CHECK(curve[1] == std::pair<Index, double>{2, 1.0});
  CHECK(curve[2] == std::pair<Index, double>{3, 1.0});

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const KpcaModel fitted = fit_kpca(random_frames(20, 5, rng), default_kernel(5), 5);
    const auto c = explained_variance_curve(fitted);
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i].second >= c[i - 1].second);
    CHECK(c.back().second == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("reduced feature dimensions") {
  std::mt19937_64 rng(2);
  const struct {
    Index input_dim, target, expected;
  } cases[] = {{155, 30, 90}, {93, 50, 150}, {93, 93, 279}};
  for (const auto& c : cases) {
    const FeatureSequence features(random_frames(120, c.input_dim, rng), 100.0, "bank");
    const FeatureSequence reduced =
        reduce_pipeline(features, default_kernel(c.input_dim), c.target);
    CHECK(reduced.dim() == c.expected);
    CHECK(reduced.length() == 120);
    CHECK(reduced.frame_rate_hz() == 100.0);
  }
}

TEST_CASE("subsampling is seeded") {
  std::mt19937_64 rng(4);
  const FramesXd x = random_frames(50, 3, rng);
  const KpcaOptions options{20, 7};
  const KpcaModel a = fit_kpca(x, default_kernel(3), 4, options);
  const KpcaModel b = fit_kpca(x, default_kernel(3), 4, options);
  CHECK(a.training_frames.rows() == 20);
  CHECK(a.training_frames == b.training_frames);
  CHECK(a.descriptor.find("subsample_seed=7") != std::string::npos);
  const KpcaModel c = fit_kpca(x, default_kernel(3), 4, KpcaOptions{20, 8});
  CHECK(a.training_frames != c.training_frames);
}

TEST_CASE("model file round trip") {
  std::mt19937_64 rng(6);
  const FramesXd x = random_frames(15, 4, rng);
  const KpcaModel model = fit_kpca(x, default_kernel(4), 5);
  const auto path = std::filesystem::temp_directory_path() / "eegctc_kpca_test.bin";
  save_kpca(path, model);
  const KpcaModel loaded = load_kpca(path);
  std::filesystem::remove(path);
  CHECK(loaded.training_frames == model.training_frames);
  CHECK(loaded.eigenvalues == model.eigenvalues);
  CHECK(loaded.projection == model.projection);
  CHECK(loaded.kernel.scale == model.kernel.scale);
  CHECK(loaded.descriptor == model.descriptor);
  CHECK(transform(loaded, x) == transform(model, x));
  CHECK(error_kind([] { load_kpca("/nonexistent/eegctc.kpca"); }) == ErrorKind::kIo);
}
