#include "sfpca/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "sfpca/rng.hpp"

namespace sfpca {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void mean_sd(const std::vector<double>& xs, double* mean, double* sd) {
  const std::size_t n = xs.size();
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(n);
  *mean = m;
  if (n < 2) {
    *sd = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  *sd = std::sqrt(ss / static_cast<double>(n - 1));
}

BasisSystem fit_basis(const ExperimentConfig& cfg, std::size_t s_n, const Grid& grid) {
  if (cfg.basis == BasisKind::kFourier) return make_fourier(s_n, grid);
  return make_orthonormal_bspline(s_n, cfg.bspline_degree, grid);
}

void summarize(MethodSummary* s, std::size_t n_components) {
  s->mse_mean.assign(n_components, 0.0);
  s->mse_sd.assign(n_components, 0.0);
  for (std::size_t k = 0; k < n_components; ++k) {
    std::vector<double> col;
    col.reserve(s->reps.size());
    for (const auto& r : s->reps)
      col.push_back(k < r.mse.size() ? r.mse[k] : 0.0);
    mean_sd(col, &s->mse_mean[k], &s->mse_sd[k]);
  }
  std::vector<double> mrses, gns, secs;
  for (const auto& r : s->reps) {
    mrses.push_back(r.mrse);
    gns.push_back(static_cast<double>(r.g_n));
    secs.push_back(r.seconds);
  }
  mean_sd(mrses, &s->mrse_mean, &s->mrse_sd);
  double dummy;
  mean_sd(gns, &s->gn_mean, &dummy);
  mean_sd(secs, &s->seconds_mean, &dummy);
}

// One full recovery pass: fit on the projected coefficients, score, rebuild
// trajectories, measure against truth.
RecoveryRep evaluate_method(const CoefficientTensor& coeffs, const BasisSystem& basis,
                            const GroundTruth& truth, const FitOptions& opt, bool sparse,
                            double project_seconds) {
  RecoveryRep rep;
  const auto t0 = Clock::now();
  const SfpcaModel model = sparse ? fit_sfpca_coeffs(coeffs, basis, opt)
                                  : mfpca_baseline(coeffs, basis, opt);
  const ScoreMatrix sc = scores(model, coeffs);
  const Tensor3 xhat = recover(model, sc);
  rep.seconds = project_seconds + elapsed(t0);
  rep.g_n = model.selection.retained_processes;
  rep.pairs = model.selection.size();
  const Tensor3 psi = eigenfunctions(model, truth.grid);
  const Vector mse = mse_eigenfunctions(psi, truth);
  rep.mse.assign(mse.data(), mse.data() + mse.size());
  rep.mrse = mrse(xhat, truth);
  return rep;
}

}  // namespace

void parallel_reps(std::size_t reps, std::size_t threads,
                   const std::function<void(std::size_t)>& work) {
  if (threads <= 1 || reps <= 1) {
    for (std::size_t i = 0; i < reps; ++i) work(i);
    return;
  }
  threads = std::min(threads, reps);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mu;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= reps) return;
        try {
          work(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

RecoveryExperimentResult run_recovery_experiment(const ExperimentConfig& cfg,
                                                 bool compare_mfpca,
                                                 std::size_t num_components) {
  if (cfg.replications < 1) throw InvalidArgument("experiment: replications must be >= 1");
  RecoveryExperimentResult out;
  out.ran_mfpca = compare_mfpca;
  out.sfpca.reps.resize(cfg.replications);
  if (compare_mfpca) out.mfpca.reps.resize(cfg.replications);

  parallel_reps(cfg.replications, cfg.threads, [&](std::size_t rep) {
    LqScenario sc = cfg.lq;
    sc.seed = derive_seed(cfg.seed, rep);
    const LqSample sample = generate_lq(sc);
    const BasisSystem basis = fit_basis(cfg, cfg.s_n, sample.data.grid);

    const auto t0 = Clock::now();
    const CoefficientTensor coeffs = project(sample.data, basis);
    const double project_seconds = elapsed(t0);

    FitOptions opt;
    opt.rho = cfg.rho;
    opt.alpha0 = cfg.alpha0;
    opt.noise_variance = cfg.noise_variance;
    opt.fve_level = cfg.fve_level;
    opt.num_components = cfg.r_n > 0 ? std::optional<std::size_t>(cfg.r_n)
                                     : std::optional<std::size_t>(num_components);

    out.sfpca.reps[rep] =
        evaluate_method(coeffs, basis, sample.truth, opt, /*sparse=*/true, project_seconds);
    out.sfpca.reps[rep].rep = rep;
    if (compare_mfpca) {
      out.mfpca.reps[rep] = evaluate_method(coeffs, basis, sample.truth, opt,
                                            /*sparse=*/false, project_seconds);
      out.mfpca.reps[rep].rep = rep;
    }
  });

  summarize(&out.sfpca, num_components);
  if (compare_mfpca) summarize(&out.mfpca, num_components);
  return out;
}

ClassificationExperimentResult run_classification_experiment(
    const ExperimentConfig& cfg, const std::vector<std::size_t>& r_list) {
  if (cfg.replications < 1) throw InvalidArgument("experiment: replications must be >= 1");
  if (r_list.empty()) throw InvalidArgument("experiment: empty component list");
  ClassificationExperimentResult out;
  out.r_list = r_list;
  out.sfpca.resize(cfg.replications);
  out.mfpca.resize(cfg.replications);
  const std::size_t max_r = *std::max_element(r_list.begin(), r_list.end());

  // Reference rank for the scalar complexity fields (the headline column).
  std::size_t ref_ri = 0;
  for (std::size_t ri = 0; ri < r_list.size(); ++ri)
    if (r_list[ri] == 5) ref_ri = ri;

  parallel_reps(cfg.replications, cfg.threads, [&](std::size_t rep) {
    ClassScenario sc = cfg.cls;
    sc.base.seed = derive_seed(cfg.seed, rep);
    const ClassSample sample = generate_class(sc);

    // Tune (rho, s_n) on the training set only, once per rank; the CV sweep
    // shares fold fits across ranks so the table costs a single pass.
    TuningGrid tgrid;
    tgrid.rhos = cfg.tune_rhos;
    tgrid.s_ns = cfg.tune_sns;
    tgrid.r_ns = r_list;
    tgrid.folds = cfg.folds;
    tgrid.objective = TuningObjective::kMisclassificationRate;
    tgrid.basis = cfg.basis;
    tgrid.bspline_degree = cfg.bspline_degree;
    tgrid.alpha0 = cfg.alpha0;
    const TuningReport tune = cv_supervised(sample.train, tgrid, sc.base.seed);

    std::vector<const TuningRow*> best_by_r(r_list.size(), nullptr);
    for (const TuningRow& row : tune.table) {
      for (std::size_t ri = 0; ri < r_list.size(); ++ri) {
        if (row.r_n != r_list[ri]) continue;
        const TuningRow* cur = best_by_r[ri];
        if (!cur || row.mean < cur->mean ||
            (row.mean == cur->mean && row.mean_gn < cur->mean_gn))
          best_by_r[ri] = &row;
      }
    }

    auto classify_with = [&](const SfpcaModel& model, const ScoreMatrix& train_scores,
                             const ScoreMatrix& test_scores, std::size_t want_r) {
      const std::size_t r = std::min(want_r, model.rank());
      if (r == 0) {
        // Degenerate zero model: majority-class prediction.
        std::size_t ones = 0;
        for (int lab : *sample.train.labels) ones += static_cast<std::size_t>(lab == 1);
        const int majority = 2 * ones > sample.train.labels->size() ? 1 : 0;
        std::vector<int> pred(sample.test.labels->size(), majority);
        return misclassification_rate(pred, *sample.test.labels);
      }
      ScoreMatrix tr{train_scores.scores.leftCols(static_cast<Eigen::Index>(r))};
      ScoreMatrix te{test_scores.scores.leftCols(static_cast<Eigen::Index>(r))};
      const LdaModel lda = lda_fit(tr, *sample.train.labels);
      return misclassification_rate(lda_predict(lda, te), *sample.test.labels);
    };
    auto relevant_kept = [&](const SfpcaModel& model) {
      bool kept = true;
      for (std::size_t j = 0; j < sc.kappa; ++j)
        kept &= model.selection.counts[j] > 0;
      return kept;
    };

    // sFPCA: refit once per distinct winning (rho, s_n), truncate per rank.
    {
      ClassificationRep& dest = out.sfpca[rep];
      dest.rep = rep;
      dest.error_by_r.assign(r_list.size(), 0.0);
      dest.rho_by_r.assign(r_list.size(), 0.0);
      dest.g_n_by_r.assign(r_list.size(), 0);
      struct Fitted {
        double rho;
        std::size_t s_n;
        SfpcaModel model;
        ScoreMatrix train_scores, test_scores;
        bool relevant;
      };
      std::vector<Fitted> cache;
      for (std::size_t ri = 0; ri < r_list.size(); ++ri) {
        const TuningRow* row = best_by_r[ri];
        if (!row) throw NumericError("experiment: tuning produced no row for a rank");
        Fitted* hit = nullptr;
        for (auto& f : cache)
          if (f.rho == row->rho && f.s_n == row->s_n) hit = &f;
        if (!hit) {
          const BasisSystem basis = fit_basis(cfg, row->s_n, sample.train.grid);
          const CoefficientTensor train_coeffs = project(sample.train, basis);
          FitOptions opt;
          opt.rho = row->rho;
          opt.alpha0 = cfg.alpha0;
          opt.num_components = max_r;
          Fitted f;
          f.rho = row->rho;
          f.s_n = row->s_n;
          f.model = fit_sfpca_coeffs(train_coeffs, basis, opt);
          f.train_scores = scores(f.model, train_coeffs);
          f.test_scores = score_dataset(f.model, sample.test);
          f.relevant = relevant_kept(f.model);
          cache.push_back(std::move(f));
          hit = &cache.back();
        }
        dest.error_by_r[ri] =
            classify_with(hit->model, hit->train_scores, hit->test_scores, r_list[ri]);
        dest.rho_by_r[ri] = hit->rho;
        dest.g_n_by_r[ri] = hit->model.selection.retained_processes;
        if (ri == ref_ri) {
          dest.tuned_rho = hit->rho;
          dest.g_n = hit->model.selection.retained_processes;
          dest.relevant_retained = hit->relevant;
        }
      }
    }

    // Full baseline: quantile-free, so one fit at the configured s_n serves
    // every rank by truncation.
    {
      ClassificationRep& dest = out.mfpca[rep];
      dest.rep = rep;
      dest.error_by_r.assign(r_list.size(), 0.0);
      dest.rho_by_r.assign(r_list.size(), 0.0);
      dest.g_n_by_r.assign(r_list.size(), 0);
      const BasisSystem basis = fit_basis(cfg, cfg.s_n, sample.train.grid);
      const CoefficientTensor train_coeffs = project(sample.train, basis);
      FitOptions opt;
      opt.alpha0 = cfg.alpha0;
      opt.num_components = max_r;
      const SfpcaModel model = mfpca_baseline(train_coeffs, basis, opt);
      const ScoreMatrix train_scores = scores(model, train_coeffs);
      const ScoreMatrix test_scores = score_dataset(model, sample.test);
      dest.g_n = model.selection.retained_processes;
      dest.relevant_retained = relevant_kept(model);
      for (std::size_t ri = 0; ri < r_list.size(); ++ri) {
        dest.error_by_r[ri] = classify_with(model, train_scores, test_scores, r_list[ri]);
        dest.g_n_by_r[ri] = model.selection.retained_processes;
      }
    }
  });

  out.sfpca_error_mean.assign(r_list.size(), 0.0);
  out.sfpca_error_sd.assign(r_list.size(), 0.0);
  out.mfpca_error_mean.assign(r_list.size(), 0.0);
  out.mfpca_error_sd.assign(r_list.size(), 0.0);
  for (std::size_t ri = 0; ri < r_list.size(); ++ri) {
    std::vector<double> se, me;
    for (const auto& r : out.sfpca) se.push_back(r.error_by_r[ri]);
    for (const auto& r : out.mfpca) me.push_back(r.error_by_r[ri]);
    mean_sd(se, &out.sfpca_error_mean[ri], &out.sfpca_error_sd[ri]);
    mean_sd(me, &out.mfpca_error_mean[ri], &out.mfpca_error_sd[ri]);
  }
  std::vector<double> gns;
  double dummy;
  std::size_t kept = 0;
  for (const auto& r : out.sfpca) {
    gns.push_back(static_cast<double>(r.g_n));
    kept += static_cast<std::size_t>(r.relevant_retained);
  }
  mean_sd(gns, &out.sfpca_gn_mean, &dummy);
  out.relevant_retained_rate =
      static_cast<double>(kept) / static_cast<double>(out.sfpca.size());
  return out;
}

std::vector<BenchCell> run_bench(
    const ExperimentConfig& cfg,
    const std::vector<std::pair<std::size_t, std::size_t>>& cells) {
  if (cells.empty()) throw InvalidArgument("bench: no (p, s_n) cells");
  std::vector<BenchCell> out;
  for (const auto& [p, s_n] : cells) {
    BenchCell cell;
    cell.p = p;
    cell.s_n = s_n;
    double s_total = 0.0, m_total = 0.0;
    for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
      LqScenario sc = cfg.lq;
      sc.p = p;
      sc.seed = derive_seed(cfg.seed, rep);
      const LqSample sample = generate_lq(sc);
      const BasisSystem basis = fit_basis(cfg, s_n, sample.data.grid);
      FitOptions opt;
      opt.rho = cfg.rho;
      opt.alpha0 = cfg.alpha0;
      opt.fve_level = cfg.fve_level;
      if (cfg.r_n > 0) opt.num_components = cfg.r_n;

      // Full recovery, sparse: projection through reconstruction.
      auto t0 = Clock::now();
      {
        const CoefficientTensor coeffs = project(sample.data, basis);
        const SfpcaModel model = fit_sfpca_coeffs(coeffs, basis, opt);
        const ScoreMatrix sc_m = scores(model, coeffs);
        const Tensor3 xhat = recover(model, sc_m);
        (void)xhat;
      }
      s_total += elapsed(t0);

      t0 = Clock::now();
      {
        const CoefficientTensor coeffs = project(sample.data, basis);
        const SfpcaModel model = mfpca_baseline(coeffs, basis, opt);
        const ScoreMatrix sc_m = scores(model, coeffs);
        const Tensor3 xhat = recover(model, sc_m);
        (void)xhat;
      }
      m_total += elapsed(t0);
    }
    cell.sfpca_seconds = s_total / static_cast<double>(cfg.replications);
    cell.mfpca_seconds = m_total / static_cast<double>(cfg.replications);
    cell.ratio = cell.sfpca_seconds > 0.0 ? cell.mfpca_seconds / cell.sfpca_seconds
                                          : std::numeric_limits<double>::infinity();
    out.push_back(cell);
  }
  return out;
}

}  // namespace sfpca
