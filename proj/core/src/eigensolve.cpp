#include "sfpca/eigensolve.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#ifdef SFPCA_HAVE_LAPACKE
#include <lapacke.h>
#endif

namespace sfpca {

namespace {

void apply_sign_convention(Matrix& vecs) {
  for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < vecs.rows(); ++r) {
      const double a = std::abs(vecs(r, c));
      if (a > best) {  // strict: ties keep the lowest index
        best = a;
        arg = r;
      }
    }
    if (vecs(arg, c) < 0.0) vecs.col(c) = -vecs.col(c);
  }
}

std::vector<bool> flag_degenerate(const Vector& vals) {
  const Eigen::Index k = vals.size();
  std::vector<bool> deg(static_cast<std::size_t>(k), false);
  for (Eigen::Index i = 0; i + 1 < k; ++i) {
    const double scale = std::max(std::abs(vals[i]), std::abs(vals[i + 1]));
    if (std::abs(vals[i] - vals[i + 1]) <= 1e-12 * std::max(scale, 1e-300)) {
      deg[static_cast<std::size_t>(i)] = true;
      deg[static_cast<std::size_t>(i + 1)] = true;
    }
  }
  return deg;
}

#ifdef SFPCA_HAVE_LAPACKE
// dsyevr computes eigenvalues il..iu in ascending order; we want the top k.
bool lapack_top_k(const Matrix& s, std::size_t k, Vector* vals, Matrix* vecs) {
  const lapack_int dim = static_cast<lapack_int>(s.rows());
  const lapack_int il = dim - static_cast<lapack_int>(k) + 1;
  const lapack_int iu = dim;
  Matrix a = s;  // dsyevr destroys its input
  Vector w(dim);
  Matrix z(dim, static_cast<Eigen::Index>(k));
  std::vector<lapack_int> isuppz(2 * k);
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_COL_MAJOR, 'V', 'I', 'U', dim, a.data(), dim, 0.0, 0.0, il, iu,
      /*abstol=*/0.0, &found, w.data(), z.data(), dim, isuppz.data());
  if (info != 0 || found != static_cast<lapack_int>(k)) return false;
  vals->resize(static_cast<Eigen::Index>(k));
  vecs->resize(dim, static_cast<Eigen::Index>(k));
  for (std::size_t c = 0; c < k; ++c) {
    // ascending -> descending
    (*vals)[static_cast<Eigen::Index>(c)] = w[static_cast<Eigen::Index>(k - 1 - c)];
    vecs->col(static_cast<Eigen::Index>(c)) = z.col(static_cast<Eigen::Index>(k - 1 - c));
  }
  return true;
}
#endif

}  // namespace

EigenResult eigh_top(const Matrix& s, std::size_t k) {
  if (s.rows() != s.cols()) throw InvalidArgument("eigh_top: matrix not square");
  if (s.rows() == 0) throw InvalidArgument("eigh_top: empty matrix");
  const std::size_t dim = static_cast<std::size_t>(s.rows());

  EigenResult out;
  if (k > dim) {
    k = dim;
    out.clipped = true;
  }
  if (k == 0) {
    out.eigvals.resize(0);
    out.eigvecs.resize(s.rows(), 0);
    return out;
  }

  bool done = false;
#ifdef SFPCA_HAVE_LAPACKE
  // The tridiagonal range solver pays off on large matrices; below that the
  // plain full decomposition is cheap anyway.
  if (dim >= 128) done = lapack_top_k(s, k, &out.eigvals, &out.eigvecs);
#endif
  if (!done) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    if (es.info() != Eigen::Success)
      throw NumericError("eigh_top: eigensolver failed to converge");
    out.eigvals.resize(static_cast<Eigen::Index>(k));
    out.eigvecs.resize(s.rows(), static_cast<Eigen::Index>(k));
    for (std::size_t c = 0; c < k; ++c) {
      const Eigen::Index src = s.rows() - 1 - static_cast<Eigen::Index>(c);
      out.eigvals[static_cast<Eigen::Index>(c)] = es.eigenvalues()[src];
      out.eigvecs.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(src);
    }
  }

  apply_sign_convention(out.eigvecs);
  out.degenerate = flag_degenerate(out.eigvals);
  return out;
}

}  // namespace sfpca
