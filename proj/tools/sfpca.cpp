// sfpca: command-line front end for sparse multivariate functional PCA.
//
// Subcommands: simulate, fit, recover, classify, tune, experiment, bench.
// Exit codes: 0 ok, 2 config/argument error, 3 data/parse error,
// 4 numerical failure, 5 I/O error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sfpca/classify.hpp"
#include "sfpca/config.hpp"
#include "sfpca/experiment.hpp"
#include "sfpca/io.hpp"
#include "sfpca/rng.hpp"
#include "sfpca/threshold.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace sfpca;

namespace {

// Flag values that override the config file when the user supplies them.
struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> rho;
  std::optional<std::size_t> s_n;
  std::optional<std::size_t> r_n;
  std::optional<double> alpha0;
  std::optional<std::string> basis;
  std::optional<std::string> method;
  std::optional<std::size_t> reps;
  std::optional<std::string> out;
  std::optional<std::size_t> threads;
  std::optional<std::string> scenario;
};

void add_common_flags(CLI::App* cmd, Overrides* ov) {
  cmd->add_option("--config", ov->config_path, "Config file (INI-style)");
  cmd->add_option("--seed", ov->seed, "Master RNG seed");
  cmd->add_option("--rho", ov->rho, "Quantile level for the noise estimate");
  cmd->add_option("--sn", ov->s_n, "Basis size");
  cmd->add_option("--rn", ov->r_n, "Number of components (0: FVE rule)");
  cmd->add_option("--alpha0", ov->alpha0, "Threshold constant (default 4)");
  cmd->add_option("--basis", ov->basis, "Basis kind: fourier or bspline")
      ->check(CLI::IsMember({"fourier", "bspline"}));
  cmd->add_option("--method", ov->method, "Fit method: sfpca or mfpca")
      ->check(CLI::IsMember({"sfpca", "mfpca"}));
  cmd->add_option("--reps", ov->reps, "Monte-Carlo replications");
  cmd->add_option("--out", ov->out, "Output directory");
  cmd->add_option("--threads", ov->threads,
                  "Worker threads (SFPCA_THREADS overrides)");
}

ExperimentConfig build_config(const Overrides& ov) {
  ExperimentConfig cfg;
  if (!ov.config_path.empty()) cfg = ExperimentConfig::from_file(ov.config_path);
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.rho) cfg.rho = *ov.rho;
  if (ov.s_n) cfg.s_n = *ov.s_n;
  if (ov.r_n) cfg.r_n = *ov.r_n;
  if (ov.alpha0) cfg.alpha0 = *ov.alpha0;
  if (ov.basis)
    cfg.basis = *ov.basis == "fourier" ? BasisKind::kFourier
                                       : BasisKind::kOrthonormalBSpline;
  if (ov.method) cfg.method = *ov.method == "mfpca" ? Method::kMfpca : Method::kSfpca;
  if (ov.scenario) {
    if (*ov.scenario == "lq") cfg.scenario = ScenarioType::kLq;
    else if (*ov.scenario == "class") cfg.scenario = ScenarioType::kClass;
    else throw ConfigError("scenario must be lq or class");
  }
  if (ov.reps) cfg.replications = *ov.reps;
  if (ov.out) cfg.out_dir = *ov.out;
  if (ov.threads) cfg.threads = *ov.threads;
  if (const char* env = std::getenv("SFPCA_THREADS")) {
    try {
      std::size_t used = 0;
      const long long t = std::stoll(env, &used);
      if (used != std::string(env).size() || t < 1) throw std::invalid_argument(env);
      cfg.threads = static_cast<std::size_t>(t);
    } catch (const std::exception&) {
      throw ConfigError("SFPCA_THREADS must be a positive integer");
    }
  }
  if (!(cfg.rho > 0.0 && cfg.rho < 1.0))
    throw ConfigError("rho must be in (0, 1)");
  return cfg;
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.out_dir);
  return (fs::path(cfg.out_dir) / name).string();
}

BasisSystem build_basis(const ExperimentConfig& cfg, const Grid& grid) {
  if (cfg.basis == BasisKind::kFourier) return make_fourier(cfg.s_n, grid);
  return make_orthonormal_bspline(cfg.s_n, cfg.bspline_degree, grid);
}

FitOptions fit_options(const ExperimentConfig& cfg) {
  FitOptions opt;
  opt.rho = cfg.rho;
  opt.alpha0 = cfg.alpha0;
  opt.noise_variance = cfg.noise_variance;
  opt.fve_level = cfg.fve_level;
  if (cfg.r_n > 0) opt.num_components = cfg.r_n;
  return opt;
}

SfpcaModel fit_by_method(const ExperimentConfig& cfg, const FunctionalDataset& data,
                         const BasisSystem& basis, FitTiming* timing) {
  if (cfg.method == Method::kMfpca) {
    const auto coeffs = project(data, basis);
    return mfpca_baseline(coeffs, basis, fit_options(cfg), timing);
  }
  return fit_sfpca(data, basis, fit_options(cfg), timing);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const ExperimentConfig& cfg) {
  if (cfg.lq.p == 0) throw InvalidArgument("simulate: p must be positive");
  const bool suffix = cfg.replications > 1;
  for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
    // Each replication gets its own stream derived from (seed, rep).
    const std::uint64_t rep_seed = derive_seed(cfg.seed, rep);
    char tag[32] = "";
    if (suffix) std::snprintf(tag, sizeof tag, "_rep%03zu", rep);
    if (cfg.scenario == ScenarioType::kClass) {
      ClassScenario sc = cfg.cls;
      sc.base.seed = rep_seed;
      const ClassSample sample = generate_class(sc);
      save_dataset(out_path(cfg, std::string("train") + tag + ".sfpc"), sample.train);
      save_dataset(out_path(cfg, std::string("test") + tag + ".sfpc"), sample.test);
      save_truth(out_path(cfg, std::string("truth") + tag + ".sfpc"), sample.truth);
      if (rep == 0)
        std::printf("simulate: class scenario n_train=%zu n_test=%zu p=%zu m=%zu kappa=%zu\n",
                    sc.n_train, sc.n_test, sc.base.p, sc.base.m, sc.kappa);
    } else if (cfg.scenario == ScenarioType::kLq) {
      LqScenario sc = cfg.lq;
      sc.seed = rep_seed;
      const LqSample sample = generate_lq(sc);
      save_dataset(out_path(cfg, std::string("dataset") + tag + ".sfpc"), sample.data);
      save_truth(out_path(cfg, std::string("truth") + tag + ".sfpc"), sample.truth);
      if (rep == 0) {
        const BasisSystem fb = make_fourier(std::min(sc.s, sc.m - 1), sample.data.grid);
        const CoefficientTensor coeffs = project(sample.data, fb);
        const EnergyProfile prof = energy_profile(coeffs.variances);
        std::printf("simulate: n=%zu p=%zu m=%zu s=%zu\n", sc.n, sc.p, sc.m, sc.s);
        std::printf("top energies:");
        for (Eigen::Index j = 0; j < std::min<Eigen::Index>(5, prof.sorted_energies.size()); ++j)
          std::printf(" %s", fmt(prof.sorted_energies[j]).c_str());
        std::printf("\n");
      }
    } else {
      throw InvalidArgument("simulate: scenario must be lq or class");
    }
  }
  std::printf("wrote %zu replication(s) to %s\n", cfg.replications, cfg.out_dir.c_str());
  return 0;
}

// --------------------------------------------------------------------- fit

int cmd_fit(const ExperimentConfig& cfg, const std::string& data_path,
            const std::string& model_name) {
  const FunctionalDataset data = load_dataset(data_path);
  const BasisSystem basis = build_basis(cfg, data.grid);
  FitTiming timing;
  const SfpcaModel model = fit_by_method(cfg, data, basis, &timing);
  const std::string model_path = out_path(cfg, model_name);
  save_model(model_path, model);

  json report;
  report["method"] = cfg.method == Method::kMfpca ? "mfpca" : "sfpca";
  report["n"] = data.n();
  report["p"] = data.p();
  report["m"] = data.m();
  report["sn"] = basis.size();
  report["rank"] = model.rank();
  report["retained_pairs"] = model.selection.size();
  report["retained_processes"] = model.selection.retained_processes;
  report["threshold_value"] = model.selection.threshold_value;
  report["empty_selection"] = model.empty_selection;
  report["counts"] = model.selection.counts;
  report["eigvals"] = std::vector<double>(model.eigvals.data(),
                                          model.eigvals.data() + model.eigvals.size());
  report["fve"] =
      std::vector<double>(model.fve.data(), model.fve.data() + model.fve.size());
  report["seconds"] = {{"project", timing.project_s},
                       {"threshold", timing.threshold_s},
                       {"eigen", timing.eigen_s},
                       {"total", timing.total_s}};
  write_text_atomic(out_path(cfg, "fit_report.json"), report.dump(2) + "\n");

  std::printf("fit: %s g_n=%zu pairs=%zu rank=%zu%s\n",
              report["method"].get<std::string>().c_str(),
              model.selection.retained_processes, model.selection.size(), model.rank(),
              model.empty_selection ? " (warning: empty selection, zero model)" : "");
  std::printf("model written to %s\n", model_path.c_str());
  return 0;
}

// ----------------------------------------------------------------- recover

int cmd_recover(const ExperimentConfig& cfg, const std::string& model_path,
                const std::string& data_path) {
  const SfpcaModel model = load_model(model_path);
  const FunctionalDataset data = load_dataset(data_path);
  const ScoreMatrix sc = score_dataset(model, data);
  std::optional<std::size_t> r;
  if (cfg.r_n > 0) r = cfg.r_n;
  const Tensor3 xhat = recover(model, sc, r);

  std::vector<TensorEntry> entries;
  TensorEntry rec;
  rec.name = "recovered";
  rec.dims = {xhat.dim0(), xhat.dim1(), xhat.dim2()};
  rec.f64.assign(xhat.data(), xhat.data() + xhat.size());
  entries.push_back(std::move(rec));
  TensorEntry scores_entry;
  scores_entry.name = "scores";
  scores_entry.dims = {static_cast<std::uint64_t>(sc.scores.rows()),
                       static_cast<std::uint64_t>(sc.scores.cols())};
  scores_entry.f64.resize(static_cast<std::size_t>(sc.scores.size()));
  for (Eigen::Index i = 0; i < sc.scores.rows(); ++i)
    for (Eigen::Index j = 0; j < sc.scores.cols(); ++j)
      scores_entry.f64[static_cast<std::size_t>(i * sc.scores.cols() + j)] =
          sc.scores(i, j);
  entries.push_back(std::move(scores_entry));
  const std::string path = out_path(cfg, "recovered.sfpc");
  write_container(path, entries);

  // Residual against the observations (noise floor included).
  const Vector& w = data.grid.quad_weights();
  double resid = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i)
    for (std::size_t j = 0; j < data.p(); ++j)
      resid +=
          ((data.y.fiber(i, j) - xhat.fiber(i, j)).array().square() * w.array()).sum();
  std::printf("recover: rank=%zu mean ||y - xhat||^2 = %s\n",
              r.value_or(model.rank()),
              fmt(resid / static_cast<double>(data.n())).c_str());
  std::printf("recovered trajectories written to %s\n", path.c_str());
  return 0;
}

// ---------------------------------------------------------------- classify

int cmd_classify(const ExperimentConfig& cfg, const std::string& train_path,
                 const std::string& test_path) {
  const FunctionalDataset train = load_dataset(train_path);
  const FunctionalDataset test = load_dataset(test_path);
  if (!train.labels) throw DataError("classify: training data has no labels");
  const BasisSystem basis = build_basis(cfg, train.grid);
  ExperimentConfig fit_cfg = cfg;
  if (fit_cfg.r_n == 0) fit_cfg.r_n = 5;  // LDA needs a fixed score dimension
  const SfpcaModel model = fit_by_method(fit_cfg, train, basis, nullptr);
  if (model.rank() == 0)
    throw NumericError("classify: model has no components (empty selection?)");

  const ScoreMatrix train_scores =
      scores(model, project_with_means(train, model.basis, model.means));
  const ScoreMatrix test_scores = score_dataset(model, test);
  const LdaModel lda = lda_fit(train_scores, *train.labels);
  const std::vector<int> pred = lda_predict(lda, test_scores);

  std::string csv = "subject,predicted\n";
  for (std::size_t i = 0; i < pred.size(); ++i)
    csv += std::to_string(i) + "," + std::to_string(pred[i]) + "\n";
  const std::string path = out_path(cfg, "predictions.csv");
  write_text_atomic(path, csv);

  std::printf("classify: rank=%zu g_n=%zu\n", model.rank(),
              model.selection.retained_processes);
  if (test.labels) {
    const double rate = misclassification_rate(pred, *test.labels);
    std::printf("test misclassification rate: %.4f\n", rate);
  }
  std::printf("predictions written to %s\n", path.c_str());
  return 0;
}

// -------------------------------------------------------------------- tune

int cmd_tune(const ExperimentConfig& cfg, const std::string& data_path,
             const std::string& objective) {
  const FunctionalDataset data = load_dataset(data_path);
  TuningGrid grid;
  grid.rhos = cfg.tune_rhos;
  grid.s_ns = cfg.tune_sns;
  grid.r_ns = cfg.tune_rns;
  grid.folds = cfg.folds;
  grid.basis = cfg.basis;
  grid.bspline_degree = cfg.bspline_degree;
  grid.alpha0 = cfg.alpha0;

  bool supervised;
  if (objective == "auto") supervised = data.labels.has_value();
  else if (objective == "classify") supervised = true;
  else supervised = false;
  grid.objective = supervised ? TuningObjective::kMisclassificationRate
                              : TuningObjective::kRecoveryError;

  const TuningReport report = supervised ? cv_supervised(data, grid, cfg.seed)
                                         : cv_unsupervised(data, grid, cfg.seed);

  std::string csv = "rho,sn,rn,mean,sd,mean_gn\n";
  for (const TuningRow& row : report.table)
    csv += fmt(row.rho) + "," + std::to_string(row.s_n) + "," + std::to_string(row.r_n) +
           "," + fmt(row.mean) + "," + fmt(row.sd) + "," + fmt(row.mean_gn) + "\n";
  const std::string path = out_path(cfg, "tuning.csv");
  write_text_atomic(path, csv);

  const TuningRow& best = report.table[report.best];
  std::printf("tune (%s, %zu-fold): best rho=%s sn=%zu rn=%zu mean=%s sd=%s gn=%s\n",
              supervised ? "classification" : "recovery", grid.folds, fmt(best.rho).c_str(),
              best.s_n, best.r_n, fmt(best.mean).c_str(), fmt(best.sd).c_str(),
              fmt(best.mean_gn).c_str());
  std::printf("full table written to %s\n", path.c_str());
  return 0;
}

// -------------------------------------------------------------- experiment

int cmd_experiment(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) throw InvalidArgument("experiment: replications must be >= 1");
  const bool single = cfg.replications == 1;
  const auto sd_str = [&](double sd) { return single ? std::string("NA") : fmt(sd); };

  if (cfg.scenario == ScenarioType::kClass) {
    std::vector<std::size_t> r_list{2, 5, 8, 12, 15};
    if (cfg.r_n > 0) r_list = {cfg.r_n};
    const ClassificationExperimentResult res =
        run_classification_experiment(cfg, r_list);

    std::string csv = "rep,method,tuned_rho,gn,relevant_retained";
    for (std::size_t r : r_list) csv += ",err_r" + std::to_string(r);
    csv += "\n";
    auto dump_rows = [&](const std::vector<ClassificationRep>& rows, const char* method) {
      for (const auto& row : rows) {
        csv += std::to_string(row.rep) + "," + method + "," + fmt(row.tuned_rho) + "," +
               std::to_string(row.g_n) + "," + (row.relevant_retained ? "1" : "0");
        for (double e : row.error_by_r) csv += "," + fmt(e);
        csv += "\n";
      }
    };
    dump_rows(res.sfpca, "sfpca");
    dump_rows(res.mfpca, "mfpca");
    const std::string path = out_path(cfg, "experiment_results.csv");
    write_text_atomic(path, csv);

    std::printf("classification experiment: %zu replications\n", cfg.replications);
    for (std::size_t ri = 0; ri < r_list.size(); ++ri)
      std::printf("  r=%zu  sfpca %.4f (%s)   mfpca %.4f (%s)\n", r_list[ri],
                  res.sfpca_error_mean[ri], sd_str(res.sfpca_error_sd[ri]).c_str(),
                  res.mfpca_error_mean[ri], sd_str(res.mfpca_error_sd[ri]).c_str());
    std::printf("  mean g_n=%.2f, relevant processes retained in %.0f%% of runs\n",
                res.sfpca_gn_mean, 100.0 * res.relevant_retained_rate);
    std::printf("per-replication table written to %s\n", path.c_str());
    return 0;
  }

  if (cfg.scenario != ScenarioType::kLq)
    throw InvalidArgument("experiment: scenario must be lq or class");

  const std::size_t n_components = cfg.r_n > 0 ? cfg.r_n : 4;
  const RecoveryExperimentResult res =
      run_recovery_experiment(cfg, /*compare_mfpca=*/true, n_components);

  std::string csv = "rep,method";
  for (std::size_t k = 1; k <= n_components; ++k) csv += ",mse" + std::to_string(k);
  csv += ",mrse,gn,pairs,seconds\n";
  auto dump_rows = [&](const MethodSummary& s, const char* method) {
    for (const auto& row : s.reps) {
      csv += std::to_string(row.rep) + "," + method;
      for (std::size_t k = 0; k < n_components; ++k)
        csv += "," + (k < row.mse.size() ? fmt(row.mse[k]) : std::string("NA"));
      csv += "," + fmt(row.mrse) + "," + std::to_string(row.g_n) + "," +
             std::to_string(row.pairs) + "," + fmt(row.seconds) + "\n";
    }
  };
  dump_rows(res.sfpca, "sfpca");
  dump_rows(res.mfpca, "mfpca");
  const std::string path = out_path(cfg, "experiment_results.csv");
  write_text_atomic(path, csv);

  std::printf("recovery experiment: %zu replications, %zu components\n",
              cfg.replications, n_components);
  for (std::size_t k = 0; k < n_components; ++k)
    std::printf("  mse psi_%zu  sfpca %.4f (%s)   mfpca %.4f (%s)\n", k + 1,
                res.sfpca.mse_mean[k], sd_str(res.sfpca.mse_sd[k]).c_str(),
                res.mfpca.mse_mean[k], sd_str(res.mfpca.mse_sd[k]).c_str());
  std::printf("  mrse       sfpca %.4f (%s)   mfpca %.4f (%s)\n", res.sfpca.mrse_mean,
              sd_str(res.sfpca.mrse_sd).c_str(), res.mfpca.mrse_mean,
              sd_str(res.mfpca.mrse_sd).c_str());
  std::printf("  mean g_n=%.2f  mean seconds sfpca=%.3f mfpca=%.3f\n", res.sfpca.gn_mean,
              res.sfpca.seconds_mean, res.mfpca.seconds_mean);
  std::printf("per-replication table written to %s\n", path.c_str());
  return 0;
}

// ------------------------------------------------------------------- bench

int cmd_bench(const ExperimentConfig& cfg, std::vector<std::size_t> ps,
              std::vector<std::size_t> sns) {
  if (ps.empty()) ps = {100, 200};
  if (sns.empty()) sns = {14};
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t p : ps)
    for (std::size_t s_n : sns) cells.emplace_back(p, s_n);

  const std::vector<BenchCell> table = run_bench(cfg, cells);
  std::string csv = "p,sn,sfpca_seconds,mfpca_seconds,ratio\n";
  std::printf("%6s %6s %14s %14s %8s\n", "p", "sn", "sfpca (s)", "mfpca (s)", "ratio");
  for (const BenchCell& cell : table) {
    std::printf("%6zu %6zu %14.3f %14.3f %8.2f\n", cell.p, cell.s_n, cell.sfpca_seconds,
                cell.mfpca_seconds, cell.ratio);
    csv += std::to_string(cell.p) + "," + std::to_string(cell.s_n) + "," +
           fmt(cell.sfpca_seconds) + "," + fmt(cell.mfpca_seconds) + "," +
           fmt(cell.ratio) + "\n";
  }
  const std::string path = out_path(cfg, "bench.csv");
  write_text_atomic(path, csv);
  std::printf("timing table written to %s\n", path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse multivariate functional principal component analysis"};
  app.require_subcommand(1);

  Overrides ov;
  std::string data_path, model_path, train_path, test_path;
  std::string model_name = "model.sfpm";
  std::string objective = "auto";
  std::vector<std::size_t> bench_p, bench_sn;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Generate synthetic datasets (per-replication derived seeds)");
  add_common_flags(simulate, &ov);
  simulate->add_option("--scenario", ov.scenario, "Generator: lq or class")
      ->check(CLI::IsMember({"lq", "class"}));

  CLI::App* fit = app.add_subcommand("fit", "Fit a model to a dataset file");
  add_common_flags(fit, &ov);
  fit->add_option("--data", data_path, "Input dataset (.sfpc or .csv)")->required();
  fit->add_option("--model-name", model_name, "Output model file name");

  CLI::App* recover_cmd =
      app.add_subcommand("recover", "Reconstruct trajectories with a fitted model");
  add_common_flags(recover_cmd, &ov);
  recover_cmd->add_option("--model", model_path, "Fitted model file")->required();
  recover_cmd->add_option("--data", data_path, "Dataset to reconstruct")->required();

  CLI::App* classify =
      app.add_subcommand("classify", "Fit on labeled training data and classify test data");
  add_common_flags(classify, &ov);
  classify->add_option("--train", train_path, "Labeled training dataset")->required();
  classify->add_option("--test", test_path, "Test dataset")->required();

  CLI::App* tune = app.add_subcommand("tune", "Cross-validated hyperparameter sweep");
  add_common_flags(tune, &ov);
  tune->add_option("--data", data_path, "Input dataset")->required();
  tune->add_option("--objective", objective, "auto, recovery, or classify")
      ->check(CLI::IsMember({"auto", "recovery", "classify"}));

  CLI::App* experiment =
      app.add_subcommand("experiment", "Monte-Carlo study (recovery or classification)");
  add_common_flags(experiment, &ov);
  experiment->add_option("--scenario", ov.scenario, "Generator: lq or class")
      ->check(CLI::IsMember({"lq", "class"}));

  CLI::App* bench =
      app.add_subcommand("bench", "Wall-time comparison across (p, sn) cells");
  add_common_flags(bench, &ov);
  bench->add_option("--p", bench_p, "Process counts (comma-separated)")
      ->delimiter(',');
  bench->add_option("--sn-list", bench_sn, "Basis sizes (comma-separated)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const ExperimentConfig cfg = build_config(ov);
    if (simulate->parsed()) return cmd_simulate(cfg);
    if (fit->parsed()) {
      if (data_path.size() > 4 && data_path.substr(data_path.size() - 4) == ".csv") {
        const FunctionalDataset data = import_csv(data_path);
        const std::string converted = out_path(cfg, "imported.sfpc");
        save_dataset(converted, data);
        return cmd_fit(cfg, converted, model_name);
      }
      return cmd_fit(cfg, data_path, model_name);
    }
    if (recover_cmd->parsed()) return cmd_recover(cfg, model_path, data_path);
    if (classify->parsed()) return cmd_classify(cfg, train_path, test_path);
    if (tune->parsed()) return cmd_tune(cfg, data_path, objective);
    if (experiment->parsed()) return cmd_experiment(cfg);
    if (bench->parsed()) return cmd_bench(cfg, bench_p, bench_sn);
    std::fprintf(stderr, "no subcommand given\n");
    return 2;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 4;
  }
}
