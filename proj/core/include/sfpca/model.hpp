#pragma once

#include <optional>

#include "sfpca/basis.hpp"
#include "sfpca/dataset.hpp"
#include "sfpca/eigensolve.hpp"
#include "sfpca/threshold.hpp"

namespace sfpca {

// Fitted sparse functional PCA model: selected coordinates, leading
// eigenstructure of their covariance, the centering means, and the basis the
// coefficients live in. Immutable after fit; safe to share across threads.
struct SfpcaModel {
  SelectionSet selection;
  Vector eigvals;        // length r, non-increasing
  Matrix eigvecs;        // |selection| x r, orthonormal columns
  Matrix means;          // p x m
  BasisSystem basis;
  Vector fve;            // length r, cumulative fraction of variance explained
  std::vector<bool> degenerate;  // per component, eigenvalue-gap flag

  // Thresholding selected nothing; the model is the zero model (recovery
  // returns the mean curves) rather than an error, so CV sweeps can score it.
  bool empty_selection = false;

  std::size_t rank() const { return static_cast<std::size_t>(eigvals.size()); }
  std::size_t p() const { return static_cast<std::size_t>(means.rows()); }
};

struct ScoreMatrix {
  Matrix scores;  // n x r
};

struct FitOptions {
  double rho = 0.5;  // quantile level for the noise estimate (default mode)
  // When set, the noise floor is noise_variance / m exactly instead of the
  // quantile estimate.
  std::optional<double> noise_variance;
  double alpha0 = 4.0;
  std::optional<std::size_t> num_components;  // overrides the FVE rule
  double fve_level = 0.95;
};

struct FitTiming {
  double project_s = 0.0;
  double threshold_s = 0.0;
  double eigen_s = 0.0;
  double total_s = 0.0;
};

// Sample covariance of the retained coefficient columns, ordered
// lexicographically in (j, l). Empty selection yields a 0x0 matrix.
Matrix covariance_retained(const CoefficientTensor& coeffs, const SelectionSet& selection);

// Full pipeline: project, threshold, eigendecompose.
SfpcaModel fit_sfpca(const FunctionalDataset& data, const BasisSystem& basis,
                     const FitOptions& options, FitTiming* timing = nullptr);

// Same pipeline on a precomputed projection (shared across methods/sweeps).
SfpcaModel fit_sfpca_coeffs(const CoefficientTensor& coeffs, const BasisSystem& basis,
                            const FitOptions& options, FitTiming* timing = nullptr);

// Non-sparse baseline: identical machinery with every (j, l) pair retained.
SfpcaModel mfpca_baseline(const CoefficientTensor& coeffs, const BasisSystem& basis,
                          const FitOptions& options, FitTiming* timing = nullptr);

// psi_kj on an evaluation grid: r x p x m' tensor. Ruled-out processes are
// identically zero.
Tensor3 eigenfunctions(const SfpcaModel& model, const Grid& eval_grid);

// Scores of coefficients projected with the model's basis: eta = Theta_sel * u.
ScoreMatrix scores(const SfpcaModel& model, const CoefficientTensor& coeffs);

// Convenience: project new data with the model's basis and training means,
// then score it.
ScoreMatrix score_dataset(const SfpcaModel& model, const FunctionalDataset& data);

// Rank-r reconstruction on the model's own grid: x_i = mean + sum eta_ik psi_k.
// r defaults to the model rank; smaller r truncates.
Tensor3 recover(const SfpcaModel& model, const ScoreMatrix& sc,
                std::optional<std::size_t> r = std::nullopt);

// Smallest r with cumulative FVE >= level (0 when the model has no variance).
std::size_t choose_r_by_fve(const SfpcaModel& model, double level);

}  // namespace sfpca
