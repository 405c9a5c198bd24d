#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "sfpca/projection.hpp"

namespace sfpca {

// Outcome of diagonal thresholding: the retained (process, basis) pairs in
// lexicographic order, per-process counts N_j, the number of surviving
// processes g_n, and the threshold that was applied.
struct SelectionSet {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // 0-based (j, l), sorted
  std::vector<std::size_t> counts;                         // N_j, length p
  std::size_t retained_processes = 0;                      // g_n
  double threshold_value = 0.0;

  bool empty() const { return pairs.empty(); }
  std::size_t size() const { return pairs.size(); }
};

// Per-process total variability V_j = sum_l variance(j, l), plus the
// descending order statistics used for energy-decay diagnostics.
struct EnergyProfile {
  Vector energies;         // V_j in process order
  Vector sorted_energies;  // V_(1) >= V_(2) >= ...
};

// sigma2_jl = (1/n) sum_i theta_ijl^2. Requires n >= 2.
Matrix sample_variances(const CoefficientTensor& coeffs);

// 100*rho-th sample quantile of all p*s variance values, linear interpolation
// between order statistics. Estimates the per-coordinate noise floor sigma^2/m.
double noise_quantile(const Matrix& variances, double rho);

// alpha_n = alpha0 * sqrt(log(p * s_n) / n).
double threshold_alpha(std::size_t n, std::size_t p, std::size_t s_n, double alpha0);

// Keep (j, l) iff variances(j, l) >= noise_level * (1 + alpha_n).
SelectionSet select(const Matrix& variances, double noise_level, double alpha_n);

EnergyProfile energy_profile(const Matrix& variances);

}  // namespace sfpca
