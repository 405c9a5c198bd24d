#pragma once

#include <vector>

#include "sfpca/tensor.hpp"

namespace sfpca {

// Leading eigenpairs of a dense symmetric matrix, eigenvalues non-increasing.
// Sign convention: each eigenvector's largest-magnitude entry is positive
// (ties broken toward the lowest index). Pairs whose eigenvalue sits within
// relative gap 1e-12 of a neighbor are flagged degenerate; individual vectors
// in such blocks are basis-dependent and callers should compare projectors.
struct EigenResult {
  Vector eigvals;                 // length k
  Matrix eigvecs;                 // dim x k, orthonormal columns
  std::vector<bool> degenerate;   // length k
  bool clipped = false;           // requested k exceeded dim and was clipped
};

// Top-k eigenpairs of symmetric S. k > dim(S) is clipped (flagged, not an
// error). Backed by LAPACK's dsyevr range solver when available, otherwise
// a full Eigen self-adjoint decomposition.
EigenResult eigh_top(const Matrix& s, std::size_t k);

}  // namespace sfpca
