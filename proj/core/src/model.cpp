#include "sfpca/model.hpp"

#include <chrono>
#include <cmath>

namespace sfpca {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Gather the retained coefficient columns into an n x |sel| matrix.
Matrix gather_retained(const CoefficientTensor& coeffs, const SelectionSet& sel) {
  const std::size_t n = coeffs.n();
  Matrix g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(sel.size()));
  for (std::size_t c = 0; c < sel.size(); ++c) {
    const auto [j, l] = sel.pairs[c];
    for (std::size_t i = 0; i < n; ++i)
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = coeffs.theta(i, j, l);
  }
  return g;
}

SfpcaModel finish_fit(const CoefficientTensor& coeffs, const BasisSystem& basis,
                      SelectionSet sel, const FitOptions& options, FitTiming* timing) {
  SfpcaModel model;
  model.means = coeffs.means;
  model.basis = basis;
  model.selection = std::move(sel);

  const auto t0 = Clock::now();
  if (model.selection.empty()) {
    model.empty_selection = true;
    model.eigvals.resize(0);
    model.eigvecs.resize(0, 0);
    model.fve.resize(0);
    if (timing) timing->eigen_s = seconds_since(t0);
    return model;
  }

  const Matrix s_hat = covariance_retained(coeffs, model.selection);
  const double total_var = s_hat.trace();
  const std::size_t dim = static_cast<std::size_t>(s_hat.rows());

  // The covariance has rank at most n (it is a sum of n rank-1 terms), so
  // eigenvalues past n are exactly zero and never move the FVE. Solving for
  // min(dim, max(n, requested)) pairs is therefore exact, not a truncation.
  std::size_t k_needed = std::min(dim, std::max(coeffs.n(), options.num_components.value_or(0)));
  if (k_needed == 0) k_needed = 1;
  EigenResult eig = eigh_top(s_hat, k_needed);

  // Clamp tiny negative roundoff.
  for (Eigen::Index i = 0; i < eig.eigvals.size(); ++i)
    if (eig.eigvals[i] < 0.0 && eig.eigvals[i] > -1e-10 * std::max(total_var, 1.0))
      eig.eigvals[i] = 0.0;

  std::size_t r;
  if (options.num_components) {
    r = std::min(*options.num_components, dim);
  } else {
    if (!(total_var > 0.0)) {
      r = 0;
    } else {
      double cum = 0.0;
      r = static_cast<std::size_t>(eig.eigvals.size());
      for (Eigen::Index i = 0; i < eig.eigvals.size(); ++i) {
        cum += eig.eigvals[i];
        if (cum / total_var >= options.fve_level) {
          r = static_cast<std::size_t>(i) + 1;
          break;
        }
      }
    }
  }

  model.eigvals = eig.eigvals.head(static_cast<Eigen::Index>(r));
  model.eigvecs = eig.eigvecs.leftCols(static_cast<Eigen::Index>(r));
  model.degenerate.assign(eig.degenerate.begin(),
                          eig.degenerate.begin() + static_cast<std::ptrdiff_t>(r));
  model.fve.resize(static_cast<Eigen::Index>(r));
  double cum = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    cum += model.eigvals[static_cast<Eigen::Index>(i)];
    model.fve[static_cast<Eigen::Index>(i)] = total_var > 0.0 ? cum / total_var : 0.0;
  }
  if (timing) timing->eigen_s = seconds_since(t0);
  return model;
}

}  // namespace

Matrix covariance_retained(const CoefficientTensor& coeffs, const SelectionSet& selection) {
  if (selection.empty()) return Matrix(0, 0);
  const Matrix g = gather_retained(coeffs, selection);
  Matrix s = (g.transpose() * g) / static_cast<double>(coeffs.n());
  // Symmetrize away one-ulp asymmetry from the product.
  s = 0.5 * (s + s.transpose()).eval();
  return s;
}

SfpcaModel fit_sfpca(const FunctionalDataset& data, const BasisSystem& basis,
                     const FitOptions& options, FitTiming* timing) {
  const auto t0 = Clock::now();
  const CoefficientTensor coeffs = project(data, basis);
  if (timing) timing->project_s = seconds_since(t0);
  return fit_sfpca_coeffs(coeffs, basis, options, timing);
}

SfpcaModel fit_sfpca_coeffs(const CoefficientTensor& coeffs, const BasisSystem& basis,
                            const FitOptions& options, FitTiming* timing) {
  const auto t_all = Clock::now();
  auto t0 = Clock::now();
  double noise_level;
  if (options.noise_variance) {
    if (*options.noise_variance < 0.0)
      throw InvalidArgument("fit: noise variance must be >= 0");
    noise_level = *options.noise_variance / static_cast<double>(basis.grid().size());
  } else {
    noise_level = noise_quantile(coeffs.variances, options.rho);
  }
  const double alpha_n =
      threshold_alpha(coeffs.n(), coeffs.p(), coeffs.s(), options.alpha0);
  SelectionSet sel = select(coeffs.variances, noise_level, alpha_n);
  if (timing) timing->threshold_s = seconds_since(t0);
  SfpcaModel model = finish_fit(coeffs, basis, std::move(sel), options, timing);
  if (timing) timing->total_s = timing->project_s + seconds_since(t_all);
  return model;
}

SfpcaModel mfpca_baseline(const CoefficientTensor& coeffs, const BasisSystem& basis,
                          const FitOptions& options, FitTiming* timing) {
  const auto t_all = Clock::now();
  SelectionSet sel;
  sel.counts.assign(coeffs.p(), coeffs.s());
  sel.retained_processes = coeffs.p();
  sel.threshold_value = 0.0;
  sel.pairs.reserve(coeffs.p() * coeffs.s());
  for (std::size_t j = 0; j < coeffs.p(); ++j)
    for (std::size_t l = 0; l < coeffs.s(); ++l) sel.pairs.emplace_back(j, l);
  SfpcaModel model = finish_fit(coeffs, basis, std::move(sel), options, timing);
  if (timing) timing->total_s = timing->project_s + seconds_since(t_all);
  return model;
}

Tensor3 eigenfunctions(const SfpcaModel& model, const Grid& eval_grid) {
  const std::size_t r = model.rank();
  const std::size_t p = model.p();
  const std::size_t m = eval_grid.size();
  const Matrix b = model.basis.evaluate(eval_grid);  // m x s
  Tensor3 psi(r, p, m);
  for (std::size_t c = 0; c < model.selection.size(); ++c) {
    const auto [j, l] = model.selection.pairs[c];
    for (std::size_t k = 0; k < r; ++k) {
      const double u = model.eigvecs(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k));
      if (u == 0.0) continue;
      psi.fiber(k, j) += u * b.col(static_cast<Eigen::Index>(l));
    }
  }
  return psi;
}

ScoreMatrix scores(const SfpcaModel& model, const CoefficientTensor& coeffs) {
  if (coeffs.p() != model.p() ||
      coeffs.s() != model.basis.size())
    throw InvalidArgument("scores: coefficient shape does not match model");
  ScoreMatrix out;
  if (model.rank() == 0 || model.selection.empty()) {
    out.scores = Matrix::Zero(static_cast<Eigen::Index>(coeffs.n()),
                              static_cast<Eigen::Index>(model.rank()));
    return out;
  }
  const Matrix g = gather_retained(coeffs, model.selection);
  out.scores = g * model.eigvecs;
  return out;
}

ScoreMatrix score_dataset(const SfpcaModel& model, const FunctionalDataset& data) {
  const CoefficientTensor coeffs = project_with_means(data, model.basis, model.means);
  return scores(model, coeffs);
}

Tensor3 recover(const SfpcaModel& model, const ScoreMatrix& sc,
                std::optional<std::size_t> r_opt) {
  const std::size_t n = static_cast<std::size_t>(sc.scores.rows());
  const std::size_t p = model.p();
  const std::size_t m = static_cast<std::size_t>(model.means.cols());
  std::size_t r = r_opt.value_or(model.rank());
  if (r > model.rank()) r = model.rank();
  if (sc.scores.cols() < static_cast<Eigen::Index>(r))
    throw InvalidArgument("recover: score matrix has fewer components than requested");

  Tensor3 out(n, p, m);
  for (std::size_t i = 0; i < n; ++i) out.slice(i) = model.means;
  if (r == 0) return out;

  const Tensor3 psi = eigenfunctions(model, model.basis.grid());
  // x_i += sum_k eta_ik psi_k; flatten psi components to rows of a rank x (p*m)
  // matrix so the update is one GEMM.
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      psi_flat(psi.data(), static_cast<Eigen::Index>(psi.dim0()),
               static_cast<Eigen::Index>(p * m));
  out.flat_rows() += sc.scores.leftCols(static_cast<Eigen::Index>(r)) *
                     psi_flat.topRows(static_cast<Eigen::Index>(r));
  return out;
}

std::size_t choose_r_by_fve(const SfpcaModel& model, double level) {
  if (!(level > 0.0 && level <= 1.0))
    throw InvalidArgument("choose_r_by_fve: level must be in (0, 1]");
  if (model.fve.size() == 0) return 0;
  for (Eigen::Index i = 0; i < model.fve.size(); ++i)
    if (model.fve[i] >= level - 1e-15) return static_cast<std::size_t>(i) + 1;
  return static_cast<std::size_t>(model.fve.size());
}

}  // namespace sfpca
