#pragma once

#include <functional>
#include <utility>

#include "sfpca/config.hpp"
#include "sfpca/model.hpp"
#include "sfpca/tuning.hpp"

namespace sfpca {

// Monte-Carlo runners behind the experiment/bench commands. Per-replication
// seeds are derived from the master seed and the replication index, so
// results do not depend on the worker-pool size.

struct RecoveryRep {
  std::size_t rep = 0;
  std::vector<double> mse;  // per leading component
  double mrse = 0.0;
  std::size_t g_n = 0;
  std::size_t pairs = 0;
  double seconds = 0.0;  // full fit + recovery wall time
};

struct MethodSummary {
  std::vector<RecoveryRep> reps;
  // means/sds are indexed like RecoveryRep::mse; mrse etc. aggregated too
  std::vector<double> mse_mean, mse_sd;
  double mrse_mean = 0.0, mrse_sd = 0.0;
  double gn_mean = 0.0;
  double seconds_mean = 0.0;
};

struct RecoveryExperimentResult {
  MethodSummary sfpca;
  MethodSummary mfpca;
  bool ran_mfpca = false;
};

// Recovery study on the weak-l_q generator: fits sFPCA (and the full baseline
// when compare_mfpca) on `reps` independent datasets, reporting per-component
// eigenfunction MSE (up to `num_components`), MRSE, model complexity, and
// wall time.
RecoveryExperimentResult run_recovery_experiment(const ExperimentConfig& cfg,
                                                 bool compare_mfpca,
                                                 std::size_t num_components = 4);

struct ClassificationRep {
  std::size_t rep = 0;
  double tuned_rho = 0.0;          // at the reference rank (5 when present)
  std::size_t g_n = 0;             // idem
  bool relevant_retained = false;  // all kappa discriminative processes kept
  std::vector<double> error_by_r;  // parallel to r_list
  std::vector<double> rho_by_r;    // tuned quantile per rank
  std::vector<std::size_t> g_n_by_r;
};

struct ClassificationExperimentResult {
  std::vector<std::size_t> r_list;
  std::vector<ClassificationRep> sfpca;
  std::vector<ClassificationRep> mfpca;
  std::vector<double> sfpca_error_mean, sfpca_error_sd;  // per r
  std::vector<double> mfpca_error_mean, mfpca_error_sd;
  double sfpca_gn_mean = 0.0;
  double relevant_retained_rate = 0.0;
};

// Classification study on the two-class generator: per replication, tunes rho
// by stratified K-fold CV on the training set separately for every rank in
// r_list (the fold fits are shared, so this costs one sweep), refits at each
// distinct winner, and reports held-out test error per rank for sFPCA and the
// full baseline.
ClassificationExperimentResult run_classification_experiment(
    const ExperimentConfig& cfg, const std::vector<std::size_t>& r_list);

struct BenchCell {
  std::size_t p = 0;
  std::size_t s_n = 0;
  double sfpca_seconds = 0.0;
  double mfpca_seconds = 0.0;
  double ratio = 0.0;  // mfpca / sfpca
};

// Wall time of a full recovery (projection, fit, scores, reconstruction) for
// both methods at each (p, s_n) cell, averaged over cfg.replications runs.
std::vector<BenchCell> run_bench(const ExperimentConfig& cfg,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& cells);

// Map a function over replication indices on `threads` workers; results land
// in index order regardless of scheduling.
void parallel_reps(std::size_t reps, std::size_t threads,
                   const std::function<void(std::size_t)>& work);

}  // namespace sfpca
