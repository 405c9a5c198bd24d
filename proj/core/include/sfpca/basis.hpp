#pragma once

#include <cstddef>
#include <vector>

#include "sfpca/grid.hpp"
#include "sfpca/tensor.hpp"

namespace sfpca {

enum class BasisKind { kFourier, kOrthonormalBSpline };

// Orthonormal basis system on [0, 1], evaluated on a grid. Columns of eval()
// are discretely orthonormal under the grid's quadrature inner product.
//
// Fourier columns are closed-form: b_l = sqrt(2) sin(pi (l+1) t) for odd l,
// sqrt(2) cos(pi l t) for even l (1-based l), the usual trigonometric system
// without the constant term. B-spline columns are cubic (or other degree)
// B-splines on equispaced interior knots, Gram-Schmidt orthonormalized under
// the discrete inner product; the raw->orthonormal transform is kept so the
// system can be re-evaluated on a different grid consistently.
class BasisSystem {
 public:
  BasisKind kind() const { return kind_; }
  std::size_t size() const { return static_cast<std::size_t>(eval_.cols()); }
  const Grid& grid() const { return grid_; }
  const Matrix& eval() const { return eval_; }  // m x s_n
  std::size_t degree() const { return degree_; }

  // Evaluate all basis columns on an arbitrary grid (m' x s_n).
  Matrix evaluate(const Grid& where) const;

 private:
  friend BasisSystem make_fourier(std::size_t, const Grid&);
  friend BasisSystem make_orthonormal_bspline(std::size_t, std::size_t, const Grid&);

  BasisKind kind_ = BasisKind::kFourier;
  Grid grid_;
  Matrix eval_;
  std::size_t degree_ = 0;          // B-spline only
  std::vector<double> knots_;       // clamped knot vector, B-spline only
  Matrix transform_;                // raw B-spline -> orthonormal, B-spline only
};

BasisSystem make_fourier(std::size_t s_n, const Grid& grid);
BasisSystem make_orthonormal_bspline(std::size_t s_n, std::size_t degree, const Grid& grid);

// Raw (non-orthonormalized) B-spline design matrix for a clamped knot vector,
// via the Cox-de Boor recursion. Exposed for tests.
Matrix bspline_design(const std::vector<double>& knots, std::size_t degree, const Grid& grid);

}  // namespace sfpca
