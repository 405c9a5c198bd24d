#pragma once

#include <array>
#include <cstdint>

#include "sfpca/basis.hpp"
#include "sfpca/dataset.hpp"

namespace sfpca {

// Weak-l_q sparse multivariate functional data: independent coefficients
// theta~_ij'l ~ N(0, scale * l^-decay) are mixed across processes by
// theta_ijl = sum_j' rho_ar^|j-j'| j^(-1/q) theta~_ij'l, trajectories are
// x_ij = sum_l theta_ijl phi_l with the trigonometric system, and
// observations add N(0, noise_sd^2) noise on an inclusive uniform grid.
struct LqScenario {
  std::size_t n = 100;
  std::size_t p = 100;
  std::size_t m = 101;
  std::size_t s = 50;
  double q = 0.5;
  double rho_ar = 0.5;
  double coef_var_scale = 16.0;
  double coef_var_decay = 7.0 / 3.0;
  double noise_sd = 1.0;
  std::uint64_t seed = 1;
};

// Two-class variant: both classes share the coefficient law (scale 3,
// decay 2); class 1 additionally gets mean curves on the first kappa
// processes, built from the leading population eigenfunction components
// with fixed weights.
struct ClassScenario {
  LqScenario base{.coef_var_scale = 3.0, .coef_var_decay = 2.0};
  std::size_t kappa = 2;
  std::array<double, 5> mean_weights{1.0, 1.0, -0.75, 0.75, 0.5};
  std::size_t n_train = 100;
  std::size_t n_test = 200;
  // Mean-curve building blocks: true (default) uses the j-th components of
  // the first five population eigenfunctions, which puts the class shift
  // inside the top principal subspace; false uses the raw basis functions
  // phi_1..phi_5 instead, a much easier problem (near-zero Bayes error).
  bool mean_from_eigenfunctions = true;
};

// Exact population eigenstructure of the generator (the coefficient
// covariance is block-diagonal over l with blocks v_l * M M', closed form),
// plus the noise-free trajectories for recovery metrics.
struct GroundTruth {
  Tensor3 x;             // noise-free trajectories (class mean included)
  Tensor3 eigfuns;       // r x p x m leading population eigenfunctions on the grid
  Vector eigvals;        // length r, non-increasing
  Grid grid;
};

struct LqSample {
  FunctionalDataset data;
  GroundTruth truth;
};

struct ClassSample {
  FunctionalDataset train;  // labels set
  FunctionalDataset test;   // labels set
  GroundTruth truth;        // x holds the noise-free training trajectories
};

LqSample generate_lq(const LqScenario& sc);
ClassSample generate_class(const ClassScenario& sc);

// The mixing matrix M with M(j, j') = rho_ar^|j-j'| * (j+1 as 1-based)^(-1/q).
Matrix mixing_matrix(std::size_t p, double q, double rho_ar);

// Population covariance of the coefficient vector theta_{. l} (1-based l):
// scale * l^-decay * M M'. The independent oracle for generator tests.
Matrix population_block_covariance(const LqScenario& sc, std::size_t l);

// Per-component squared H-norm error sum_j ||psi_kj - psihat_kj||^2 after
// aligning each estimate's sign so <psi_k, psihat_k>_H >= 0.
Vector mse_eigenfunctions(const Tensor3& est, const GroundTruth& truth);

// n^-1 sum_i ||x_i - xhat_i||^2_H / ||x_i||^2_H. Zero-norm truth subjects are
// excluded and counted in *excluded when given.
double mrse(const Tensor3& recovered, const GroundTruth& truth,
            std::size_t* excluded = nullptr);

}  // namespace sfpca
