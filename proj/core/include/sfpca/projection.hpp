#pragma once

#include "sfpca/basis.hpp"
#include "sfpca/dataset.hpp"

namespace sfpca {

// Basis coefficients of centered observations plus the centering means and
// per-coordinate sample variances. theta(i, j, l) is subject i, process j,
// basis function l.
struct CoefficientTensor {
  Tensor3 theta;     // n x p x s_n
  Matrix means;      // p x m, the per-process mean curves used for centering
  Matrix variances;  // p x s_n, (1/n) sum_i theta(i,j,l)^2

  std::size_t n() const { return theta.dim0(); }
  std::size_t p() const { return theta.dim1(); }
  std::size_t s() const { return theta.dim2(); }
};

// Center each process by its cross-subject mean curve and project onto the
// basis by quadrature: theta_ijl = sum_k w_k (y_ij(t_k) - mean_j(t_k)) b_l(t_k).
CoefficientTensor project(const FunctionalDataset& data, const BasisSystem& basis);

// Same projection but centering with externally supplied mean curves
// (training means applied to held-out or test data).
CoefficientTensor project_with_means(const FunctionalDataset& data,
                                     const BasisSystem& basis, const Matrix& means);

}  // namespace sfpca
