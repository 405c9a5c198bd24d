#include "sfpca/tuning.hpp"

#include <algorithm>
#include <cmath>

#include "sfpca/rng.hpp"

namespace sfpca {

namespace {

FunctionalDataset subset(const FunctionalDataset& data, const std::vector<std::size_t>& idx) {
  FunctionalDataset out;
  out.grid = data.grid;
  out.y = Tensor3(idx.size(), data.p(), data.m());
  if (data.labels) out.labels = std::vector<int>(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.y.slice(i) = data.y.slice(idx[i]);
    if (data.labels) (*out.labels)[i] = (*data.labels)[idx[i]];
  }
  return out;
}

void shuffle_indices(std::vector<std::size_t>* idx, HashRng* rng) {
  for (std::size_t i = idx->size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng->next_below(i));
    std::swap((*idx)[i - 1], (*idx)[j]);
  }
}

struct FoldData {
  FunctionalDataset train;
  FunctionalDataset heldout;
};

std::vector<FoldData> split_folds(const FunctionalDataset& data,
                                  const std::vector<std::size_t>& assign, std::size_t k) {
  std::vector<FoldData> out(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> tr, ho;
    for (std::size_t i = 0; i < assign.size(); ++i)
      (assign[i] == f ? ho : tr).push_back(i);
    out[f].train = subset(data, tr);
    out[f].heldout = subset(data, ho);
  }
  return out;
}

BasisSystem make_basis(const TuningGrid& grid, std::size_t s_n, const Grid& g) {
  if (grid.basis == BasisKind::kFourier) return make_fourier(s_n, g);
  return make_orthonormal_bspline(s_n, grid.bspline_degree, g);
}

// Mean held-out ||y - xhat||^2_H at truncation rank r.
double recovery_objective(const SfpcaModel& model, const FunctionalDataset& heldout,
                          std::size_t r) {
  const ScoreMatrix sc = score_dataset(model, heldout);
  const Tensor3 xhat = recover(model, sc, r);
  const Vector& w = heldout.grid.quad_weights();
  double total = 0.0;
  for (std::size_t i = 0; i < heldout.n(); ++i)
    for (std::size_t j = 0; j < heldout.p(); ++j)
      total += ((heldout.y.fiber(i, j) - xhat.fiber(i, j)).array().square() * w.array())
                   .sum();
  return total / static_cast<double>(heldout.n());
}

double classify_objective(const SfpcaModel& model, const FunctionalDataset& train,
                          const FunctionalDataset& heldout, std::size_t r) {
  const std::vector<int>& truth = *heldout.labels;
  const std::size_t avail = std::min(r, model.rank());
  if (avail == 0) {
    // Zero model: no scores to discriminate on; predict the training majority.
    std::size_t ones = 0;
    for (int lab : *train.labels) ones += static_cast<std::size_t>(lab == 1);
    const int majority = 2 * ones > train.labels->size() ? 1 : 0;
    std::vector<int> pred(truth.size(), majority);
    return misclassification_rate(pred, truth);
  }
  ScoreMatrix tr_scores = scores(model, project_with_means(train, model.basis, model.means));
  ScoreMatrix ho_scores = score_dataset(model, heldout);
  tr_scores.scores = tr_scores.scores.leftCols(static_cast<Eigen::Index>(avail)).eval();
  ho_scores.scores = ho_scores.scores.leftCols(static_cast<Eigen::Index>(avail)).eval();
  const LdaModel lda = lda_fit(tr_scores, *train.labels);
  return misclassification_rate(lda_predict(lda, ho_scores), truth);
}

TuningReport run_cv(const FunctionalDataset& data, const TuningGrid& grid,
                    std::uint64_t seed, bool supervised,
                    const std::vector<std::size_t>* fold_assignment) {
  data.validate();
  if (grid.folds < 2) throw InvalidArgument("tuning: need at least 2 folds");
  if (grid.rhos.empty() || grid.s_ns.empty() || grid.r_ns.empty())
    throw InvalidArgument("tuning: empty configuration grid");
  for (double rho : grid.rhos)
    if (!(rho > 0.0 && rho < 1.0))
      throw InvalidArgument("tuning: rho values must be in (0, 1)");
  if (data.n() < grid.folds)
    throw InsufficientData("tuning: fewer subjects than folds");
  if (supervised && !data.labels)
    throw InvalidArgument("tuning: supervised objective requires labels");
  if (fold_assignment) {
    if (fold_assignment->size() != data.n())
      throw InvalidArgument("tuning: fold assignment length mismatch");
    for (std::size_t f : *fold_assignment)
      if (f >= grid.folds) throw InvalidArgument("tuning: fold id out of range");
  }

  const std::vector<std::size_t> assign =
      fold_assignment
          ? *fold_assignment
          : make_folds(data.n(), grid.folds, seed, supervised ? &*data.labels : nullptr);
  const std::vector<FoldData> folds = split_folds(data, assign, grid.folds);
  const std::size_t max_r = *std::max_element(grid.r_ns.begin(), grid.r_ns.end());

  TuningReport report;
  for (std::size_t s_n : grid.s_ns) {
    const BasisSystem basis = make_basis(grid, s_n, data.grid);
    for (double rho : grid.rhos) {
      // One fit per fold at the largest rank; smaller ranks truncate.
      std::vector<double> gn(grid.folds);
      Matrix obj(static_cast<Eigen::Index>(grid.folds),
                 static_cast<Eigen::Index>(grid.r_ns.size()));
      for (std::size_t f = 0; f < grid.folds; ++f) {
        FitOptions opt;
        opt.rho = rho;
        opt.alpha0 = grid.alpha0;
        opt.num_components = max_r;
        const SfpcaModel model = fit_sfpca(folds[f].train, basis, opt);
        gn[f] = static_cast<double>(model.selection.retained_processes);
        for (std::size_t ri = 0; ri < grid.r_ns.size(); ++ri) {
          const std::size_t r = grid.r_ns[ri];
          obj(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(ri)) =
              supervised
                  ? classify_objective(model, folds[f].train, folds[f].heldout, r)
                  : recovery_objective(model, folds[f].heldout, r);
        }
      }
      for (std::size_t ri = 0; ri < grid.r_ns.size(); ++ri) {
        TuningRow row;
        row.rho = rho;
        row.s_n = s_n;
        row.r_n = grid.r_ns[ri];
        const auto col = obj.col(static_cast<Eigen::Index>(ri));
        row.mean = col.mean();
        row.sd = grid.folds > 1
                     ? std::sqrt((col.array() - row.mean).square().sum() /
                                 static_cast<double>(grid.folds - 1))
                     : 0.0;
        double g = 0.0;
        for (double v : gn) g += v;
        row.mean_gn = g / static_cast<double>(grid.folds);
        report.table.push_back(row);
      }
    }
  }

  report.best = 0;
  for (std::size_t i = 1; i < report.table.size(); ++i) {
    const TuningRow& a = report.table[i];
    const TuningRow& b = report.table[report.best];
    const bool better = a.mean < b.mean ||
                        (a.mean == b.mean && (a.mean_gn < b.mean_gn ||
                                              (a.mean_gn == b.mean_gn && a.r_n < b.r_n)));
    if (better) report.best = i;
  }
  return report;
}

}  // namespace

std::vector<std::size_t> make_folds(std::size_t n, std::size_t k, std::uint64_t seed,
                                    const std::vector<int>* labels) {
  if (k < 2) throw InvalidArgument("make_folds: need at least 2 folds");
  if (n < k) throw InsufficientData("make_folds: fewer subjects than folds");
  std::vector<std::size_t> assign(n);
  HashRng rng(seed, DrawTag::kFolds);
  if (!labels) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    shuffle_indices(&idx, &rng);
    for (std::size_t pos = 0; pos < n; ++pos) assign[idx[pos]] = pos % k;
    return assign;
  }
  if (labels->size() != n) throw InvalidArgument("make_folds: label length mismatch");
  // Stratified: deal each class round-robin so every fold sees every class.
  std::vector<int> classes;
  for (int lab : *labels)
    if (std::find(classes.begin(), classes.end(), lab) == classes.end())
      classes.push_back(lab);
  std::sort(classes.begin(), classes.end());
  for (int cls : classes) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if ((*labels)[i] == cls) members.push_back(i);
    if (members.size() < k)
      throw DataError("make_folds: class too small to appear in every fold");
    shuffle_indices(&members, &rng);
    for (std::size_t pos = 0; pos < members.size(); ++pos)
      assign[members[pos]] = pos % k;
  }
  return assign;
}

TuningReport cv_unsupervised(const FunctionalDataset& data, const TuningGrid& grid,
                             std::uint64_t seed,
                             const std::vector<std::size_t>* fold_assignment) {
  return run_cv(data, grid, seed, /*supervised=*/false, fold_assignment);
}

TuningReport cv_supervised(const FunctionalDataset& data, const TuningGrid& grid,
                           std::uint64_t seed,
                           const std::vector<std::size_t>* fold_assignment) {
  return run_cv(data, grid, seed, /*supervised=*/true, fold_assignment);
}

}  // namespace sfpca
