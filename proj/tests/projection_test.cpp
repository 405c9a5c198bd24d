#include "sfpca/projection.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "sfpca/errors.hpp"
#include "test_util.hpp"

namespace sfpca {
namespace {

TEST(Projection, ConstantSubjectsProjectToZero) {
  // identical subjects center to zero, so every coefficient vanishes
  FunctionalDataset ds;
  ds.grid = Grid::linspace(21);
  ds.y = Tensor3(3, 2, 21);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 21; ++k) ds.y(i, j, k) = 5.0 + static_cast<double>(j);

  const BasisSystem basis = make_fourier(4, ds.grid);
  const CoefficientTensor ct = project(ds, basis);
  EXPECT_EQ(ct.n(), 3u);
  EXPECT_EQ(ct.p(), 2u);
  EXPECT_EQ(ct.s(), 4u);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t l = 0; l < 4; ++l) EXPECT_NEAR(ct.theta(i, j, l), 0.0, 1e-12);
  EXPECT_NEAR(ct.variances.cwiseAbs().maxCoeff(), 0.0, 1e-24);
  EXPECT_NEAR(ct.means(0, 0), 5.0, 1e-12);
  EXPECT_NEAR(ct.means(1, 0), 6.0, 1e-12);
}

TEST(Projection, RecoversKnownCoefficientsOfBasisFunction) {
  // two subjects at +-b_1: means are zero, so theta_i11 = +-<b_1, b_1> ~ 1
  const std::size_t m = 101;
  FunctionalDataset ds;
  ds.grid = Grid::linspace(m);
  ds.y = Tensor3(2, 1, m);
  const BasisSystem basis = make_fourier(3, ds.grid);
  for (std::size_t k = 0; k < m; ++k) {
    ds.y(0, 0, k) = basis.eval()(static_cast<Eigen::Index>(k), 0);
    ds.y(1, 0, k) = -basis.eval()(static_cast<Eigen::Index>(k), 0);
  }
  const CoefficientTensor ct = project(ds, basis);
  const double tol = 10.0 / static_cast<double>(m);
  EXPECT_NEAR(ct.theta(0, 0, 0), 1.0, tol);
  EXPECT_NEAR(ct.theta(1, 0, 0), -1.0, tol);
  EXPECT_NEAR(ct.theta(0, 0, 1), 0.0, tol);
  EXPECT_NEAR(ct.theta(0, 0, 2), 0.0, tol);
  // variance of (+1, -1) with mean zero is 1
  EXPECT_NEAR(ct.variances(0, 0), 1.0, 3.0 * tol);
}

TEST(Projection, SingleSubjectCentersToZero) {
  const FunctionalDataset ds = testutil::toy_dataset(1, 2, 31);
  const CoefficientTensor ct = project(ds, make_fourier(4, ds.grid));
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t l = 0; l < 4; ++l) EXPECT_NEAR(ct.theta(0, j, l), 0.0, 1e-12);
}

TEST(Projection, VarianceHandExample) {
  // coefficients (+1, -1) against b_1 give sigma^2_11 = (1/n) sum theta^2 = 1
  const std::size_t m = 201;
  FunctionalDataset ds;
  ds.grid = Grid::linspace(m);
  ds.y = Tensor3(2, 1, m);
  const BasisSystem basis = make_fourier(1, ds.grid);
  for (std::size_t k = 0; k < m; ++k) {
    ds.y(0, 0, k) = 2.0 + basis.eval()(static_cast<Eigen::Index>(k), 0);
    ds.y(1, 0, k) = 2.0 - basis.eval()(static_cast<Eigen::Index>(k), 0);
  }
  const CoefficientTensor ct = project(ds, basis);
  EXPECT_NEAR(ct.variances(0, 0), 1.0, 10.0 / static_cast<double>(m));
}

TEST(Projection, CoefficientsScaleLinearly) {
  const FunctionalDataset ds = testutil::toy_dataset(6, 3, 41, 0.2);
  FunctionalDataset scaled = ds;
  const double c = 3.5;
  for (std::size_t i = 0; i < scaled.n(); ++i)
    for (std::size_t j = 0; j < scaled.p(); ++j)
      for (std::size_t k = 0; k < scaled.m(); ++k) scaled.y(i, j, k) *= c;

  const BasisSystem basis = make_fourier(5, ds.grid);
  const CoefficientTensor a = project(ds, basis);
  const CoefficientTensor b = project(scaled, basis);
  for (std::size_t i = 0; i < ds.n(); ++i)
    for (std::size_t j = 0; j < ds.p(); ++j)
      for (std::size_t l = 0; l < 5; ++l)
        EXPECT_NEAR(b.theta(i, j, l), c * a.theta(i, j, l), 1e-10);
  // variances are quadratic in the scale
  EXPECT_NEAR((b.variances - c * c * a.variances).cwiseAbs().maxCoeff(), 0.0, 1e-10);
}

TEST(Projection, GridMismatchRejected) {
  const FunctionalDataset ds = testutil::toy_dataset(4, 2, 31);
  const BasisSystem basis = make_fourier(4, Grid::linspace(32));
  EXPECT_THROW(project(ds, basis), InvalidArgument);
}

TEST(ProjectionWithMeans, ExternalMeansAreSubtracted) {
  const std::size_t m = 51;
  FunctionalDataset ds = testutil::toy_dataset(5, 2, m);
  const BasisSystem basis = make_fourier(4, ds.grid);

  // zero external means: coefficients are the raw (uncentered) projections
  const Matrix zero_means = Matrix::Zero(2, static_cast<Eigen::Index>(m));
  const CoefficientTensor raw = project_with_means(ds, basis, zero_means);

  // shifting data and means together leaves coefficients unchanged
  FunctionalDataset shifted = ds;
  Matrix shift_means(2, static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < m; ++k) {
      shift_means(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          1.0 + static_cast<double>(j);
      for (std::size_t i = 0; i < 5; ++i)
        shifted.y(i, j, k) += 1.0 + static_cast<double>(j);
    }
  const CoefficientTensor moved = project_with_means(shifted, basis, shift_means);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t l = 0; l < 4; ++l)
        EXPECT_NEAR(moved.theta(i, j, l), raw.theta(i, j, l), 1e-10);
  // the supplied means are echoed back
  EXPECT_NEAR(testutil::max_abs_diff(moved.means, shift_means), 0.0, 0.0);
}

TEST(ProjectionWithMeans, MeanShapeValidated) {
  const FunctionalDataset ds = testutil::toy_dataset(3, 2, 31);
  const BasisSystem basis = make_fourier(3, ds.grid);
  EXPECT_THROW(project_with_means(ds, basis, Matrix::Zero(2, 30)), InvalidArgument);
  EXPECT_THROW(project_with_means(ds, basis, Matrix::Zero(3, 31)), InvalidArgument);
}

}  // namespace
}  // namespace sfpca
