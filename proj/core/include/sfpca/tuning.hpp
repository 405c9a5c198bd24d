#pragma once

#include <cstdint>
#include <vector>

#include "sfpca/classify.hpp"
#include "sfpca/model.hpp"

namespace sfpca {

enum class TuningObjective { kRecoveryError, kMisclassificationRate };

struct TuningGrid {
  std::vector<double> rhos;
  std::vector<std::size_t> s_ns;
  std::vector<std::size_t> r_ns;
  std::size_t folds = 5;
  TuningObjective objective = TuningObjective::kRecoveryError;
  // Basis used for every configuration (the s_n sweep re-makes it per size).
  BasisKind basis = BasisKind::kOrthonormalBSpline;
  std::size_t bspline_degree = 3;
  double alpha0 = 4.0;
};

struct TuningRow {
  double rho = 0.0;
  std::size_t s_n = 0;
  std::size_t r_n = 0;
  double mean = 0.0;     // objective mean across folds
  double sd = 0.0;       // objective sd across folds
  double mean_gn = 0.0;  // average retained-process count across folds
};

struct TuningReport {
  std::vector<TuningRow> table;
  std::size_t best = 0;  // index into table
};

// K-fold assignment: fold id per subject, seeded shuffle; stratified by label
// when labels are given (every class present in every fold or it throws).
std::vector<std::size_t> make_folds(std::size_t n, std::size_t k, std::uint64_t seed,
                                    const std::vector<int>* labels = nullptr);

// Held-out reconstruction error n^-1 sum ||y_i - xhat_i||^2_H over the CV
// folds, per (rho, s_n, r_n) configuration. Ties in the objective break
// toward smaller g_n, then smaller r_n. A caller-supplied fold assignment
// (per-subject fold ids) overrides the seeded shuffle.
TuningReport cv_unsupervised(const FunctionalDataset& data, const TuningGrid& grid,
                             std::uint64_t seed,
                             const std::vector<std::size_t>* fold_assignment = nullptr);

// Held-out misclassification of fit -> scores -> LDA, stratified folds.
TuningReport cv_supervised(const FunctionalDataset& data, const TuningGrid& grid,
                           std::uint64_t seed,
                           const std::vector<std::size_t>* fold_assignment = nullptr);

}  // namespace sfpca
