#pragma once

#include <vector>

#include "sfpca/model.hpp"

namespace sfpca {

// Two-class linear discriminant analysis on component scores.
struct LdaModel {
  Matrix class_means;       // 2 x r
  Matrix pooled_covariance; // r x r, symmetric PSD (before ridge)
  Vector priors;            // length 2, sums to 1
  double regularization = 0.0;  // ridge added to the covariance diagonal
  bool low_sample_warning = false;  // n <= r + 2, covariance is poorly determined
};

// Pooled within-class covariance uses divisor n - 2; a relative ridge
// (1e-8 * trace / r) keeps the covariance invertible. Labels must be 0/1 with
// both classes present.
LdaModel lda_fit(const ScoreMatrix& sc, const std::vector<int>& labels);

// argmax of the two linear discriminant functions; ties go to class 0.
std::vector<int> lda_predict(const LdaModel& model, const ScoreMatrix& sc);

// Fraction of mismatched labels.
double misclassification_rate(const std::vector<int>& pred, const std::vector<int>& truth);

}  // namespace sfpca
