#include "sfpca/projection.hpp"

#include <cmath>

namespace sfpca {

namespace {

CoefficientTensor project_impl(const FunctionalDataset& data, const BasisSystem& basis,
                               const Matrix& means) {
  const std::size_t n = data.n(), p = data.p(), m = data.m();
  const std::size_t s = basis.size();

  // Fold the quadrature weights into the basis once: theta_i = Yc_i * Bw.
  const Matrix bw = basis.grid().quad_weights().asDiagonal() * basis.eval();

  CoefficientTensor out;
  out.theta = Tensor3(n, p, s);
  out.means = means;
  out.variances = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(s));

  Matrix centered(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < n; ++i) {
    centered = data.y.slice(i) - means;
    out.theta.slice(i) = centered * bw;
  }
  for (std::size_t i = 0; i < n; ++i)
    out.variances.array() += out.theta.slice(i).array().square();
  out.variances /= static_cast<double>(n);
  return out;
}

}  // namespace

CoefficientTensor project(const FunctionalDataset& data, const BasisSystem& basis) {
  data.validate();
  if (data.m() != basis.grid().size())
    throw InvalidArgument("project: dataset grid does not match basis grid");
  for (std::size_t k = 0; k < data.m(); ++k) {
    if (std::abs(data.grid[k] - basis.grid()[k]) > 1e-12)
      throw InvalidArgument("project: dataset grid does not match basis grid");
  }
  const std::size_t n = data.n(), p = data.p(), m = data.m();
  Matrix means = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < n; ++i) means += data.y.slice(i);
  means /= static_cast<double>(n);
  return project_impl(data, basis, means);
}

CoefficientTensor project_with_means(const FunctionalDataset& data,
                                     const BasisSystem& basis, const Matrix& means) {
  data.validate();
  if (data.m() != basis.grid().size())
    throw InvalidArgument("project: dataset grid does not match basis grid");
  for (std::size_t k = 0; k < data.m(); ++k) {
    if (std::abs(data.grid[k] - basis.grid()[k]) > 1e-12)
      throw InvalidArgument("project: dataset grid does not match basis grid");
  }
  if (means.rows() != static_cast<Eigen::Index>(data.p()) ||
      means.cols() != static_cast<Eigen::Index>(data.m()))
    throw InvalidArgument("project: mean matrix shape does not match dataset");
  return project_impl(data, basis, means);
}

}  // namespace sfpca
