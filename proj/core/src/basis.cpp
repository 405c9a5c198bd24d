#include "sfpca/basis.hpp"

#include <cmath>
#include <numbers>

namespace sfpca {

namespace {

// One Cox-de Boor evaluation: value of B-spline i (degree d) at t.
double cox_de_boor(const std::vector<double>& knots, std::size_t i, std::size_t d,
                   double t) {
  if (d == 0) {
    // Half-open intervals, closed at the right end of the domain.
    if (knots[i] <= t && t < knots[i + 1]) return 1.0;
    if (t == knots.back() && knots[i] < knots[i + 1] && t == knots[i + 1]) return 1.0;
    return 0.0;
  }
  double left = 0.0, right = 0.0;
  const double dl = knots[i + d] - knots[i];
  if (dl > 0.0) left = (t - knots[i]) / dl * cox_de_boor(knots, i, d - 1, t);
  const double dr = knots[i + d + 1] - knots[i + 1];
  if (dr > 0.0)
    right = (knots[i + d + 1] - t) / dr * cox_de_boor(knots, i + 1, d - 1, t);
  return left + right;
}

// Weighted modified Gram-Schmidt with one re-orthogonalization pass.
// Returns the upper-triangular-ish transform T with Q = A * T orthonormal
// under <f, g> = sum_k w_k f_k g_k.
Matrix orthonormalize(const Matrix& a, const Vector& w, Matrix* q_out) {
  const Eigen::Index s = a.cols();
  Matrix q = a;
  Matrix t = Matrix::Identity(s, s);
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index j = 0; j < s; ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const double r = (q.col(i).array() * q.col(j).array() * w.array()).sum();
        q.col(j) -= r * q.col(i);
        t.col(j) -= r * t.col(i);
      }
      const double nrm =
          std::sqrt((q.col(j).array().square() * w.array()).sum());
      if (!(nrm > 1e-12))
        throw NumericError("basis: B-spline columns are numerically dependent on this grid");
      q.col(j) /= nrm;
      t.col(j) /= nrm;
    }
  }
  *q_out = q;
  return t;
}

Matrix fourier_eval(std::size_t s_n, const Grid& grid) {
  const std::size_t m = grid.size();
  Matrix b(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(s_n));
  const double sqrt2 = std::numbers::sqrt2;
  for (std::size_t l1 = 1; l1 <= s_n; ++l1) {
    for (std::size_t k = 0; k < m; ++k) {
      const double t = grid[k];
      double v;
      if (l1 % 2 == 1)
        v = sqrt2 * std::sin(std::numbers::pi * static_cast<double>(l1 + 1) * t);
      else
        v = sqrt2 * std::cos(std::numbers::pi * static_cast<double>(l1) * t);
      b(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l1 - 1)) = v;
    }
  }
  return b;
}

}  // namespace

Matrix bspline_design(const std::vector<double>& knots, std::size_t degree,
                      const Grid& grid) {
  const std::size_t n_basis = knots.size() - degree - 1;
  const std::size_t m = grid.size();
  Matrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n_basis));
  for (std::size_t i = 0; i < n_basis; ++i)
    for (std::size_t k = 0; k < m; ++k)
      a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) =
          cox_de_boor(knots, i, degree, grid[k]);
  return a;
}

BasisSystem make_fourier(std::size_t s_n, const Grid& grid) {
  if (s_n == 0) throw InvalidArgument("basis: s_n must be positive");
  if (grid.size() == 0) throw InvalidArgument("basis: empty grid");
  BasisSystem b;
  b.kind_ = BasisKind::kFourier;
  b.grid_ = grid;
  b.eval_ = fourier_eval(s_n, grid);
  return b;
}

BasisSystem make_orthonormal_bspline(std::size_t s_n, std::size_t degree,
                                     const Grid& grid) {
  if (s_n < degree + 1)
    throw InvalidArgument("basis: s_n must be at least degree+1");
  if (grid.size() < s_n)
    throw InvalidArgument("basis: need at least s_n grid points");

  // Clamped knots: degree+1 copies at each end, s_n - degree - 1 equispaced
  // interior knots.
  const std::size_t n_int = s_n - degree - 1;
  std::vector<double> knots;
  knots.reserve(s_n + degree + 1);
  for (std::size_t i = 0; i <= degree; ++i) knots.push_back(0.0);
  for (std::size_t i = 1; i <= n_int; ++i)
    knots.push_back(static_cast<double>(i) / static_cast<double>(n_int + 1));
  for (std::size_t i = 0; i <= degree; ++i) knots.push_back(1.0);

  const Matrix raw = bspline_design(knots, degree, grid);
  Matrix q;
  Matrix t = orthonormalize(raw, grid.quad_weights(), &q);

  BasisSystem b;
  b.kind_ = BasisKind::kOrthonormalBSpline;
  b.grid_ = grid;
  b.eval_ = q;
  b.degree_ = degree;
  b.knots_ = std::move(knots);
  b.transform_ = std::move(t);
  return b;
}

Matrix BasisSystem::evaluate(const Grid& where) const {
  if (kind_ == BasisKind::kFourier) return fourier_eval(size(), where);
  return bspline_design(knots_, degree_, where) * transform_;
}

}  // namespace sfpca
