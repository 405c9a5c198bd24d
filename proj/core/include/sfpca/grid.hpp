#pragma once

#include <vector>

#include "sfpca/tensor.hpp"

namespace sfpca {

// Observation grid on [0, 1] with quadrature weights. Two uniform layouts
// appear in practice: t_k = (k+1)/m (right-shifted, excludes 0) and the
// inclusive linspace {0, 1/(m-1), ..., 1}. Both are "uniform" for quadrature
// purposes and use weight 1/m so that discrete norms match the L2 norms of
// the generating functions (Riemann sum convention).
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<double> points);

  // t_k = (k+1)/m for k = 0..m-1.
  static Grid regular(std::size_t m);
  // m equally spaced points including both endpoints of [0, 1].
  static Grid linspace(std::size_t m);

  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t k) const { return points_[k]; }
  const std::vector<double>& points() const { return points_; }
  bool uniform() const { return uniform_; }

  // Quadrature weights: 1/m on uniform grids, backward spacing
  // w_k = t_k - t_{k-1} (with t_0 = 0) otherwise.
  const Vector& quad_weights() const { return weights_; }

  // Weighted inner product and norm of grid-sampled functions.
  double inner(const Vector& f, const Vector& g) const;
  double norm2(const Vector& f) const;  // squared norm

 private:
  std::vector<double> points_;
  Vector weights_;
  bool uniform_ = false;
};

}  // namespace sfpca
