// Acceptance checks for the sparse functional PCA toolkit. Nine end-to-end
// criteria: eigenfunction accuracy, sparse-vs-full ordering, timing ratios,
// classification error, model complexity, oracle equivalence, reconstruction
// exactness, invariant suites, and consistency trends. One line per
// criterion; the exit code is nonzero when any of them fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sfpca/experiment.hpp"
#include "sfpca/model.hpp"
#include "sfpca/rng.hpp"
#include "sfpca/simgen.hpp"
#include "sfpca/threshold.hpp"

using namespace sfpca;

namespace {

constexpr std::uint64_t kSeed = 20240801;

bool g_all_ok = true;

void report(int idx, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s (%s)\n", idx, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  g_all_ok = g_all_ok && ok;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

ExperimentConfig recovery_config() {
  ExperimentConfig cfg;  // defaults already match the reference scenario
  cfg.seed = kSeed;
  cfg.replications = 100;
  cfg.threads = 1;
  cfg.rho = 0.5;
  cfg.s_n = 14;
  return cfg;
}

std::string ordering_cells(const RecoveryExperimentResult& res) {
  std::string s;
  for (std::size_t k = 0; k < 4; ++k) {
    if (k) s += " ";
    s += fmt(res.sfpca.mse_mean[k]) + "/" + fmt(res.mfpca.mse_mean[k]);
  }
  return s;
}

bool ordering_holds(const RecoveryExperimentResult& res) {
  for (std::size_t k = 0; k < 4; ++k)
    if (!(res.sfpca.mse_mean[k] <= res.mfpca.mse_mean[k])) return false;
  return true;
}

// Synthetic white-noise dataset for the oracle-equivalence checks.
FunctionalDataset noise_dataset(std::size_t n, std::size_t p, std::size_t m,
                                std::uint64_t stream) {
  FunctionalDataset data;
  data.grid = Grid::linspace(m);
  data.y = Tensor3(n, p, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < m; ++k)
        data.y(i, j, k) = gaussian(kSeed, DrawTag::kTheta, stream * 1000 + i, j, k);
  return data;
}

bool criterion6(std::string* detail) {
  bool shapes_ok = true;
  double worst_eval = 0.0, worst_evec = 0.0;
  for (int t = 0; t < 20; ++t) {
    HashRng sizes(kSeed, DrawTag::kRepSeed, 100 + static_cast<std::uint64_t>(t));
    const std::size_t n = 8 + sizes.next_below(23);  // <= 30
    const std::size_t p = 1 + sizes.next_below(5);   // <= 5
    const std::size_t s = 2 + sizes.next_below(5);   // <= 6
    const FunctionalDataset data = noise_dataset(n, p, 31, 10 + t);
    const BasisSystem basis = make_fourier(s, data.grid);
    const CoefficientTensor coeffs = project(data, basis);
    FitOptions zo;
    zo.noise_variance = 0.0;  // zero threshold keeps every pair
    zo.num_components = 6;
    const SfpcaModel a = fit_sfpca_coeffs(coeffs, basis, zo);
    const SfpcaModel b = mfpca_baseline(coeffs, basis, zo);
    if (a.selection.size() != p * s || a.selection.size() != b.selection.size() ||
        a.rank() != b.rank()) {
      shapes_ok = false;
      continue;
    }
    worst_eval = std::max(worst_eval, (a.eigvals - b.eigvals).cwiseAbs().maxCoeff());
    for (std::size_t k = 0; k < a.rank(); ++k) {
      if (a.degenerate[k] || b.degenerate[k]) continue;
      if (a.eigvals[static_cast<Eigen::Index>(k)] <=
          1e-8 * std::max(a.eigvals[0], 1.0))
        continue;
      worst_evec = std::max(
          worst_evec, (a.eigvecs.col(static_cast<Eigen::Index>(k)) -
                       b.eigvecs.col(static_cast<Eigen::Index>(k)))
                          .norm());
    }
  }

  // p = 1: the baseline must agree with plain PCA of the coefficient matrix.
  double worst_pca_eval = 0.0, worst_pca_evec = 0.0;
  for (int t = 0; t < 5; ++t) {
    HashRng sizes(kSeed, DrawTag::kRepSeed, 200 + static_cast<std::uint64_t>(t));
    const std::size_t n = 10 + sizes.next_below(21);  // > s always
    const std::size_t s = 2 + sizes.next_below(5);
    const FunctionalDataset data = noise_dataset(n, 1, 31, 40 + t);
    const BasisSystem basis = make_fourier(s, data.grid);
    const CoefficientTensor coeffs = project(data, basis);
    FitOptions opt;
    opt.num_components = s;
    const SfpcaModel model = mfpca_baseline(coeffs, basis, opt);

    Matrix x(n, s);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < s; ++l)
        x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) =
            coeffs.theta(i, 0, l);
    const Matrix cov = x.transpose() * x / static_cast<double>(n);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    if (model.rank() != s) {
      shapes_ok = false;
      continue;
    }
    for (std::size_t k = 0; k < s; ++k) {
      const Eigen::Index src = static_cast<Eigen::Index>(s - 1 - k);
      const double ev = es.eigenvalues()[src];
      Vector v = es.eigenvectors().col(src);
      Eigen::Index arg = 0;
      for (Eigen::Index i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
      if (v[arg] < 0.0) v = -v;
      worst_pca_eval = std::max(
          worst_pca_eval, std::abs(model.eigvals[static_cast<Eigen::Index>(k)] - ev));
      if (!model.degenerate[k])
        worst_pca_evec = std::max(
            worst_pca_evec, (model.eigvecs.col(static_cast<Eigen::Index>(k)) - v).norm());
    }
  }

  *detail = "zero-threshold vs baseline max|dlambda|=" + fmt(worst_eval) +
            " max|dv|=" + fmt(worst_evec) + "; p=1 vs direct PCA max|dlambda|=" +
            fmt(worst_pca_eval) + " max|dv|=" + fmt(worst_pca_evec);
  return shapes_ok && worst_eval <= 1e-10 && worst_evec <= 1e-10 &&
         worst_pca_eval <= 1e-10 && worst_pca_evec <= 1e-10;
}

bool criterion7(std::string* detail) {
  const std::size_t n = 15, p = 3, m = 61, s_n = 8;
  const Grid grid = Grid::linspace(m);
  const BasisSystem basis = make_orthonormal_bspline(s_n, 3, grid);
  FunctionalDataset data;
  data.grid = grid;
  data.y = Tensor3(n, p, m);
  const Matrix& b = basis.eval();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      Vector f = Vector::Constant(static_cast<Eigen::Index>(m),
                                  gaussian(kSeed, DrawTag::kTheta, 900 + i, j, 99));
      for (std::size_t l = 0; l < s_n; ++l)
        f += gaussian(kSeed, DrawTag::kTheta, 900 + i, j, l) *
             b.col(static_cast<Eigen::Index>(l));
      data.y.fiber(i, j) = f;
    }

  FitOptions zo;
  zo.noise_variance = 0.0;
  zo.num_components = 1000;  // clipped to the full dimension
  const SfpcaModel model = fit_sfpca(data, basis, zo);
  const ScoreMatrix sm = scores(model, project(data, basis));
  GroundTruth truth;
  truth.grid = grid;
  truth.x = data.y;  // noise-free by construction

  const double full = mrse(recover(model, sm), truth);
  const bool exact = full <= 10.0 / static_cast<double>(m);

  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r <= model.rank(); ++r) {
    const double e = mrse(recover(model, sm, r), truth);
    if (e > prev + 1e-12) monotone = false;
    prev = e;
  }
  *detail = "full-rank mrse=" + fmt(full) + " (cap " + fmt(10.0 / m) +
            "), mrse monotone over r=0.." + std::to_string(model.rank()) + ": " +
            (monotone ? "yes" : "no");
  return exact && monotone;
}

bool criterion8(std::string* detail) {
  std::vector<std::string> failures;

  // basis orthonormality at the documented tolerances
  {
    const Grid grid = Grid::linspace(101);
    auto gram_error = [&](const BasisSystem& sys) {
      const Matrix g = sys.eval().transpose() * grid.quad_weights().asDiagonal() *
                       sys.eval();
      return (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
    };
    if (gram_error(make_fourier(14, grid)) > 10.0 / 101.0) failures.push_back("basis-fourier");
    if (gram_error(make_orthonormal_bspline(14, 3, grid)) > 1e-8)
      failures.push_back("basis-bspline");
  }

  for (std::uint64_t round = 0; round < 3; ++round) {
    LqScenario sc;
    sc.n = 25;
    sc.p = 4;
    sc.m = 51;
    sc.s = 6;
    sc.seed = derive_seed(kSeed + 1, round);
    const LqSample sample = generate_lq(sc);
    const BasisSystem basis = make_fourier(6, sample.data.grid);
    const CoefficientTensor coeffs = project(sample.data, basis);

    // noise quantile monotone in rho
    double prev_q = -std::numeric_limits<double>::infinity();
    for (double rho : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      const double q = noise_quantile(coeffs.variances, rho);
      if (q < prev_q) failures.push_back("threshold-monotone");
      prev_q = q;
    }

    // selection identities and nesting
    const double alpha = threshold_alpha(sc.n, sc.p, sc.s, 4.0);
    const SelectionSet lo = select(coeffs.variances, noise_quantile(coeffs.variances, 0.25), alpha);
    const SelectionSet hi = select(coeffs.variances, noise_quantile(coeffs.variances, 0.75), alpha);
    for (const SelectionSet* sel : {&lo, &hi}) {
      std::size_t total = 0, procs = 0;
      for (std::size_t c : sel->counts) {
        total += c;
        procs += static_cast<std::size_t>(c > 0);
      }
      if (total != sel->size() || procs != sel->retained_processes)
        failures.push_back("selection-counts");
      if (!std::is_sorted(sel->pairs.begin(), sel->pairs.end()))
        failures.push_back("selection-order");
    }
    if (!std::includes(lo.pairs.begin(), lo.pairs.end(), hi.pairs.begin(), hi.pairs.end()))
      failures.push_back("selection-nested");

    // retained covariance is positive semidefinite
    const Matrix cov = covariance_retained(coeffs, lo);
    if (cov.rows() > 0) {
      const Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
      if (es.eigenvalues().minCoeff() < -1e-10 * std::max(cov.trace(), 1.0))
        failures.push_back("covariance-psd");
    }

    // training score variance reproduces the eigenvalues
    FitOptions opt;
    opt.rho = 0.5;
    opt.alpha0 = 4.0;
    opt.num_components = 3;
    const SfpcaModel model = fit_sfpca_coeffs(coeffs, basis, opt);
    if (model.empty_selection) {
      failures.push_back("score-variance-empty");
    } else {
      const ScoreMatrix sm = scores(model, coeffs);
      for (std::size_t k = 0; k < model.rank(); ++k) {
        const double var =
            sm.scores.col(static_cast<Eigen::Index>(k)).squaredNorm() / sc.n;
        const double lam = model.eigvals[static_cast<Eigen::Index>(k)];
        if (std::abs(var - lam) > 1e-10 * std::max(1.0, lam))
          failures.push_back("score-variance");
      }
    }

    // eigenfunction MSE is symmetric under a global sign flip
    const std::size_t r = 3;
    Tensor3 est(r, sc.p, sc.m), neg(r, sc.p, sc.m);
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t j = 0; j < sc.p; ++j)
        for (std::size_t g = 0; g < sc.m; ++g) {
          const double v = sample.truth.eigfuns(k, j, g) +
                           0.05 * gaussian(kSeed, DrawTag::kNoise, k, j, g);
          est(k, j, g) = v;
          neg(k, j, g) = -v;
        }
    const Vector me = mse_eigenfunctions(est, sample.truth);
    const Vector mn = mse_eigenfunctions(neg, sample.truth);
    if ((me - mn).cwiseAbs().maxCoeff() > 1e-12) failures.push_back("mse-sign-symmetry");
  }

  if (failures.empty()) {
    *detail =
        "basis orthonormality, threshold monotonicity, selection identities, "
        "covariance PSD, score-variance identity, MSE sign symmetry: all hold";
    return true;
  }
  std::sort(failures.begin(), failures.end());
  failures.erase(std::unique(failures.begin(), failures.end()), failures.end());
  *detail = "violated:";
  for (const std::string& f : failures) *detail += " " + f;
  return false;
}

double median_mse1(std::size_t n, std::size_t m) {
  std::vector<double> v;
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    LqScenario sc;
    sc.n = n;
    sc.p = 20;
    sc.m = m;
    sc.seed = derive_seed(kSeed + 9, rep);
    const LqSample sample = generate_lq(sc);
    const BasisSystem basis = make_orthonormal_bspline(14, 3, sample.data.grid);
    FitOptions opt;
    opt.rho = 0.5;
    opt.num_components = 1;
    const SfpcaModel model = fit_sfpca(sample.data, basis, opt);
    const Tensor3 est = eigenfunctions(model, sample.data.grid);
    const Vector mse = mse_eigenfunctions(est, sample.truth);
    v.push_back(mse.size() > 0 ? mse[0] : 1.0);
  }
  return median(v);
}

}  // namespace

int main() {
  // 1 + 2: eigenfunction accuracy and sparse-vs-full ordering, 100 runs each
  ExperimentConfig cfg = recovery_config();
  const RecoveryExperimentResult res100 = run_recovery_experiment(cfg, true, 4);
  {
    const double m1 = res100.sfpca.mse_mean[0];
    const double m2 = res100.sfpca.mse_mean[1];
    const bool ok = m1 >= 0.004 && m1 <= 0.012 && m2 >= 0.015 && m2 <= 0.050;
    report(1, ok,
           "p=100 mean mse psi1=" + fmt(m1) + " target [0.004,0.012], psi2=" + fmt(m2) +
               " target [0.015,0.05]");
  }
  cfg.lq.p = 200;
  const RecoveryExperimentResult res200 = run_recovery_experiment(cfg, true, 4);
  report(2, ordering_holds(res100) && ordering_holds(res200),
         "sfpca/mfpca mean mse psi1..4, p=100: " + ordering_cells(res100) +
             "; p=200: " + ordering_cells(res200));

  // 3: timing ratios
  {
    ExperimentConfig bcfg = recovery_config();
    bcfg.replications = 3;
    const BenchCell small = run_bench(bcfg, {{100, 14}})[0];
    bcfg.replications = 1;
    const BenchCell large = run_bench(bcfg, {{200, 44}})[0];
    report(3, small.ratio >= 3.0 && large.ratio > small.ratio,
           "p=100,sn=14 mfpca/sfpca=" + fmt(small.ratio) + " (need >=3); p=200,sn=44 " +
               fmt(large.ratio) + " (need > " + fmt(small.ratio) + ")");
  }

  // 4 + 5: classification error and model complexity, 100 runs
  {
    ExperimentConfig ccfg;
    ccfg.seed = kSeed;
    ccfg.replications = 100;
    ccfg.threads = 1;
    ccfg.s_n = 14;  // full-baseline basis size
    ccfg.tune_sns = {14, 24};
    const std::vector<std::size_t> r_list{2, 5, 8, 12, 15};
    const ClassificationExperimentResult cres = run_classification_experiment(ccfg, r_list);

    std::size_t i5 = 0;
    for (std::size_t ri = 0; ri < r_list.size(); ++ri)
      if (r_list[ri] == 5) i5 = ri;
    const double e5 = cres.sfpca_error_mean[i5];
    const bool band = e5 >= 0.105 && e5 <= 0.165;
    bool dominance = true;
    std::string cells;
    for (std::size_t ri = 0; ri < r_list.size(); ++ri) {
      if (r_list[ri] < 5) continue;
      dominance = dominance && cres.sfpca_error_mean[ri] <= cres.mfpca_error_mean[ri];
      cells += " r=" + std::to_string(r_list[ri]) + " " + fmt(cres.sfpca_error_mean[ri]) +
               "/" + fmt(cres.mfpca_error_mean[ri]);
    }
    report(4, band && dominance,
           "r=5 mean error=" + fmt(e5) + " target [0.105,0.165]; sfpca/mfpca:" + cells);
    report(5,
           cres.sfpca_gn_mean < 10.0 && cres.relevant_retained_rate >= 0.90,
           "mean retained processes=" + fmt(cres.sfpca_gn_mean) +
               " (need <10), relevant pair kept in " +
               fmt(100.0 * cres.relevant_retained_rate) + "% of runs (need >=90%)");
  }

  // 6: oracle equivalence on random small problems
  {
    std::string detail;
    const bool ok = criterion6(&detail);
    report(6, ok, detail);
  }

  // 7: reconstruction exactness and rank monotonicity
  {
    std::string detail;
    const bool ok = criterion7(&detail);
    report(7, ok, detail);
  }

  // 8: invariant suites
  {
    std::string detail;
    const bool ok = criterion8(&detail);
    report(8, ok, detail);
  }

  // 9: consistency trend in n, stability in m
  {
    const double n50 = median_mse1(50, 201);
    const double n100 = median_mse1(100, 201);
    const double n200 = median_mse1(200, 201);
    const double m51 = median_mse1(100, 51);
    report(9, n50 > n100 && n100 > n200 && n100 <= m51,
           "median mse psi1 at m=201: n=50 " + fmt(n50) + " > n=100 " + fmt(n100) +
               " > n=200 " + fmt(n200) + "; m=51 vs m=201 at n=100: " + fmt(m51) +
               " >= " + fmt(n100));
  }

  return g_all_ok ? 0 : 1;
}
