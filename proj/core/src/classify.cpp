#include "sfpca/classify.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace sfpca {

LdaModel lda_fit(const ScoreMatrix& sc, const std::vector<int>& labels) {
  const Eigen::Index n = sc.scores.rows();
  const Eigen::Index r = sc.scores.cols();
  if (labels.size() != static_cast<std::size_t>(n))
    throw InvalidArgument("lda_fit: label count does not match score rows");
  if (r == 0) throw InvalidArgument("lda_fit: no score components");

  Eigen::Index n0 = 0, n1 = 0;
  for (int lab : labels) {
    if (lab == 0) ++n0;
    else if (lab == 1) ++n1;
    else throw InvalidArgument("lda_fit: labels must be 0 or 1");
  }
  if (n0 == 0 || n1 == 0)
    throw InvalidArgument("lda_fit: both classes must be present");

  LdaModel model;
  model.class_means = Matrix::Zero(2, r);
  for (Eigen::Index i = 0; i < n; ++i)
    model.class_means.row(labels[static_cast<std::size_t>(i)]) += sc.scores.row(i);
  model.class_means.row(0) /= static_cast<double>(n0);
  model.class_means.row(1) /= static_cast<double>(n1);

  Matrix pooled = Matrix::Zero(r, r);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector d =
        (sc.scores.row(i) - model.class_means.row(labels[static_cast<std::size_t>(i)]))
            .transpose();
    pooled.noalias() += d * d.transpose();
  }
  if (n <= 2) throw InsufficientData("lda_fit: need more than 2 samples");
  pooled /= static_cast<double>(n - 2);
  model.pooled_covariance = 0.5 * (pooled + pooled.transpose());

  model.priors.resize(2);
  model.priors[0] = static_cast<double>(n0) / static_cast<double>(n);
  model.priors[1] = static_cast<double>(n1) / static_cast<double>(n);

  const double tr = model.pooled_covariance.trace();
  model.regularization = 1e-8 * std::max(tr / static_cast<double>(r), 1e-300);
  model.low_sample_warning = n <= r + 2;
  return model;
}

std::vector<int> lda_predict(const LdaModel& model, const ScoreMatrix& sc) {
  const Eigen::Index r = model.class_means.cols();
  if (sc.scores.cols() != r)
    throw InvalidArgument("lda_predict: score dimension does not match model");

  Matrix sigma = model.pooled_covariance;
  sigma.diagonal().array() += model.regularization;
  Eigen::LDLT<Matrix> ldlt(sigma);
  if (ldlt.info() != Eigen::Success)
    throw NumericError("lda_predict: pooled covariance factorization failed");

  // delta_c(x) = x' Sigma^-1 mu_c - mu_c' Sigma^-1 mu_c / 2 + log pi_c
  const Vector a0 = ldlt.solve(model.class_means.row(0).transpose());
  const Vector a1 = ldlt.solve(model.class_means.row(1).transpose());
  const double c0 = -0.5 * model.class_means.row(0).dot(a0) + std::log(model.priors[0]);
  const double c1 = -0.5 * model.class_means.row(1).dot(a1) + std::log(model.priors[1]);

  std::vector<int> pred(static_cast<std::size_t>(sc.scores.rows()));
  for (Eigen::Index i = 0; i < sc.scores.rows(); ++i) {
    const double d0 = sc.scores.row(i).dot(a0) + c0;
    const double d1 = sc.scores.row(i).dot(a1) + c1;
    pred[static_cast<std::size_t>(i)] = d1 > d0 ? 1 : 0;
  }
  return pred;
}

double misclassification_rate(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size())
    throw InvalidArgument("misclassification_rate: length mismatch");
  if (pred.empty()) throw InvalidArgument("misclassification_rate: empty input");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (pred[i] != truth[i]) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(pred.size());
}

}  // namespace sfpca
