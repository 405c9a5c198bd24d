#include "sfpca/threshold.hpp"

#include <algorithm>
#include <cmath>

namespace sfpca {

Matrix sample_variances(const CoefficientTensor& coeffs) {
  if (coeffs.n() < 2)
    throw InsufficientData("sample_variances: need at least 2 subjects");
  const std::size_t n = coeffs.n(), p = coeffs.p(), s = coeffs.s();
  Matrix v = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(s));
  for (std::size_t i = 0; i < n; ++i) v.array() += coeffs.theta.slice(i).array().square();
  return v / static_cast<double>(n);
}

double noise_quantile(const Matrix& variances, double rho) {
  if (!(rho > 0.0 && rho < 1.0))
    throw InvalidArgument("noise_quantile: rho must be in (0, 1)");
  if (variances.size() == 0) throw InvalidArgument("noise_quantile: empty matrix");
  std::vector<double> v(variances.data(), variances.data() + variances.size());
  std::sort(v.begin(), v.end());
  // Linear interpolation between order statistics (the continuous convention):
  // h = (N - 1) rho, q = v[floor h] + frac * (v[floor h + 1] - v[floor h]).
  const double h = static_cast<double>(v.size() - 1) * rho;
  const std::size_t lo = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

double threshold_alpha(std::size_t n, std::size_t p, std::size_t s_n, double alpha0) {
  if (n < 1 || p < 1 || s_n < 1)
    throw InvalidArgument("threshold_alpha: n, p, s_n must be positive");
  if (!(alpha0 > 0.0)) throw InvalidArgument("threshold_alpha: alpha0 must be positive");
  return alpha0 * std::sqrt(std::log(static_cast<double>(p) * static_cast<double>(s_n)) /
                            static_cast<double>(n));
}

SelectionSet select(const Matrix& variances, double noise_level, double alpha_n) {
  if (noise_level < 0.0) throw InvalidArgument("select: noise level must be >= 0");
  const std::size_t p = static_cast<std::size_t>(variances.rows());
  const std::size_t s = static_cast<std::size_t>(variances.cols());
  SelectionSet out;
  out.counts.assign(p, 0);
  out.threshold_value = noise_level * (1.0 + alpha_n);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t l = 0; l < s; ++l) {
      if (variances(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) >=
          out.threshold_value) {
        out.pairs.emplace_back(j, l);
        ++out.counts[j];
      }
    }
  }
  for (std::size_t j = 0; j < p; ++j)
    if (out.counts[j] > 0) ++out.retained_processes;
  return out;
}

EnergyProfile energy_profile(const Matrix& variances) {
  EnergyProfile out;
  out.energies = variances.rowwise().sum();
  out.sorted_energies = out.energies;
  std::sort(out.sorted_energies.data(),
            out.sorted_energies.data() + out.sorted_energies.size(),
            std::greater<double>());
  return out;
}

}  // namespace sfpca
