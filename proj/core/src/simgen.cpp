#include "sfpca/simgen.hpp"

#include <algorithm>
#include <cmath>

#include "sfpca/eigensolve.hpp"
#include "sfpca/rng.hpp"

namespace sfpca {

namespace {

void check_scenario(const LqScenario& sc) {
  if (sc.n == 0 || sc.p == 0 || sc.m < 2 || sc.s == 0)
    throw InvalidArgument("generator: n, p, s must be positive and m >= 2");
  if (!(sc.q > 0.0 && sc.q < 2.0))
    throw InvalidArgument("generator: q must be in (0, 2)");
  if (!(sc.rho_ar >= 0.0 && sc.rho_ar < 1.0))
    throw InvalidArgument("generator: rho_ar must be in [0, 1)");
  if (!(sc.coef_var_scale > 0.0) || !(sc.coef_var_decay > 0.0))
    throw InvalidArgument("generator: coefficient variance parameters must be positive");
  if (sc.noise_sd < 0.0) throw InvalidArgument("generator: noise sd must be >= 0");
}

Vector coef_variances(const LqScenario& sc) {
  Vector v(static_cast<Eigen::Index>(sc.s));
  for (std::size_t l = 1; l <= sc.s; ++l)
    v[static_cast<Eigen::Index>(l - 1)] =
        sc.coef_var_scale * std::pow(static_cast<double>(l), -sc.coef_var_decay);
  return v;
}

// Population eigenstructure: Cov(theta_{. l}) = v_l M M', block-diagonal over
// l, so the eigenpairs are (v_l * mu_d, w_d (x) e_l) with (mu_d, w_d) the
// eigenpairs of M M'. Eigenfunction components: psi_j(t) = w_dj phi_l(t).
void population_truth(const LqScenario& sc, const Matrix& phi, std::size_t want,
                      GroundTruth* truth) {
  const Matrix m_mat = mixing_matrix(sc.p, sc.q, sc.rho_ar);
  const Matrix mmt = m_mat * m_mat.transpose();
  const EigenResult eig = eigh_top(mmt, sc.p);
  const Vector v = coef_variances(sc);

  struct Candidate {
    double value;
    std::size_t l, d;  // 0-based basis index and M M' eigen index
  };
  std::vector<Candidate> cands;
  cands.reserve(sc.s * sc.p);
  for (std::size_t l = 0; l < sc.s; ++l)
    for (std::size_t d = 0; d < sc.p; ++d)
      cands.push_back({v[static_cast<Eigen::Index>(l)] *
                           eig.eigvals[static_cast<Eigen::Index>(d)],
                       l, d});
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.l != b.l) return a.l < b.l;
    return a.d < b.d;
  });

  want = std::min(want, cands.size());
  const std::size_t m = static_cast<std::size_t>(phi.rows());
  truth->eigvals.resize(static_cast<Eigen::Index>(want));
  truth->eigfuns = Tensor3(want, sc.p, m);
  for (std::size_t k = 0; k < want; ++k) {
    const Candidate& c = cands[k];
    truth->eigvals[static_cast<Eigen::Index>(k)] = c.value;
    for (std::size_t j = 0; j < sc.p; ++j) {
      const double w =
          eig.eigvecs(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c.d));
      if (w == 0.0) continue;
      truth->eigfuns.fiber(k, j) = w * phi.col(static_cast<Eigen::Index>(c.l));
    }
  }
}

// One subject's mixed coefficient matrix Theta_i = M Theta~_i (p x s), with
// theta~ streams keyed by the global subject index.
Matrix draw_coefficients(const LqScenario& sc, const Matrix& m_mat, const Vector& sd,
                         std::uint64_t subject) {
  Matrix raw(static_cast<Eigen::Index>(sc.p), static_cast<Eigen::Index>(sc.s));
  for (std::size_t j = 0; j < sc.p; ++j)
    for (std::size_t l = 0; l < sc.s; ++l)
      raw(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) =
          sd[static_cast<Eigen::Index>(l)] *
          gaussian(sc.seed, DrawTag::kTheta, subject, j, l);
  return m_mat * raw;
}

void add_noise(const LqScenario& sc, std::uint64_t subject, Matrix* y_slice) {
  if (sc.noise_sd == 0.0) return;
  for (std::size_t j = 0; j < sc.p; ++j)
    for (std::size_t k = 0; k < static_cast<std::size_t>(y_slice->cols()); ++k)
      (*y_slice)(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) +=
          sc.noise_sd * gaussian(sc.seed, DrawTag::kNoise, subject, j, k);
}

}  // namespace

Matrix mixing_matrix(std::size_t p, double q, double rho_ar) {
  Matrix m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j) {
    const double amp = std::pow(static_cast<double>(j + 1), -1.0 / q);
    for (std::size_t jp = 0; jp < p; ++jp) {
      const double lag = static_cast<double>(j > jp ? j - jp : jp - j);
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(jp)) =
          amp * std::pow(rho_ar, lag);
    }
  }
  return m;
}

Matrix population_block_covariance(const LqScenario& sc, std::size_t l) {
  if (l < 1 || l > sc.s) throw InvalidArgument("population covariance: l out of range");
  const Matrix m_mat = mixing_matrix(sc.p, sc.q, sc.rho_ar);
  const double v =
      sc.coef_var_scale * std::pow(static_cast<double>(l), -sc.coef_var_decay);
  return v * (m_mat * m_mat.transpose());
}

LqSample generate_lq(const LqScenario& sc) {
  check_scenario(sc);
  LqSample out;
  Grid grid = Grid::linspace(sc.m);
  const BasisSystem phi_sys = make_fourier(sc.s, grid);
  const Matrix& phi = phi_sys.eval();  // m x s
  const Matrix m_mat = mixing_matrix(sc.p, sc.q, sc.rho_ar);
  const Vector sd = coef_variances(sc).array().sqrt();

  out.data.grid = grid;
  out.data.y = Tensor3(sc.n, sc.p, sc.m);
  out.truth.grid = grid;
  out.truth.x = Tensor3(sc.n, sc.p, sc.m);

  for (std::size_t i = 0; i < sc.n; ++i) {
    const Matrix theta = draw_coefficients(sc, m_mat, sd, i);
    Matrix x = theta * phi.transpose();  // p x m
    out.truth.x.slice(i) = x;
    add_noise(sc, i, &x);
    out.data.y.slice(i) = x;
  }
  population_truth(sc, phi, 20, &out.truth);
  return out;
}

ClassSample generate_class(const ClassScenario& sc) {
  check_scenario(sc.base);
  if (sc.kappa > sc.base.p)
    throw InvalidArgument("generator: kappa exceeds process count");
  if (sc.n_train < 2 || sc.n_test < 2)
    throw InvalidArgument("generator: need at least 2 train and test subjects");

  ClassSample out;
  Grid grid = Grid::linspace(sc.base.m);
  const BasisSystem phi_sys = make_fourier(sc.base.s, grid);
  const Matrix& phi = phi_sys.eval();
  const Matrix m_mat = mixing_matrix(sc.base.p, sc.base.q, sc.base.rho_ar);
  const Vector sd = coef_variances(sc.base).array().sqrt();

  out.truth.grid = grid;
  population_truth(sc.base, phi, 20, &out.truth);

  // Class-1 mean curves on processes j < kappa: weighted sum of the leading
  // population eigenfunction components, or of the first five basis
  // functions under the alternative reading.
  const std::size_t m = sc.base.m;
  Matrix mu1 = Matrix::Zero(static_cast<Eigen::Index>(sc.base.p),
                            static_cast<Eigen::Index>(m));
  const std::size_t n_terms = 5;
  for (std::size_t j = 0; j < sc.kappa; ++j) {
    for (std::size_t k = 0; k < n_terms; ++k) {
      if (sc.mean_from_eigenfunctions) {
        if (k >= out.truth.eigfuns.dim0()) break;
        mu1.row(static_cast<Eigen::Index>(j)) +=
            sc.mean_weights[k] * out.truth.eigfuns.fiber(k, j).transpose();
      } else {
        if (k >= sc.base.s) break;
        mu1.row(static_cast<Eigen::Index>(j)) +=
            sc.mean_weights[k] * phi.col(static_cast<Eigen::Index>(k)).transpose();
      }
    }
  }

  auto fill = [&](FunctionalDataset* ds, std::size_t count, std::uint64_t offset,
                  Tensor3* truth_x) {
    ds->grid = grid;
    ds->y = Tensor3(count, sc.base.p, m);
    ds->labels = std::vector<int>(count, 0);
    const std::size_t half = count / 2;
    for (std::size_t i = 0; i < count; ++i) {
      const int label = i < half ? 0 : 1;
      (*ds->labels)[i] = label;
      const Matrix theta = draw_coefficients(sc.base, m_mat, sd, offset + i);
      Matrix x = theta * phi.transpose();
      if (label == 1) x += mu1;
      if (truth_x) truth_x->slice(i) = x;
      add_noise(sc.base, offset + i, &x);
      ds->y.slice(i) = x;
    }
  };

  out.truth.x = Tensor3(sc.n_train, sc.base.p, m);
  fill(&out.train, sc.n_train, 0, &out.truth.x);
  fill(&out.test, sc.n_test, sc.n_train, nullptr);
  return out;
}

Vector mse_eigenfunctions(const Tensor3& est, const GroundTruth& truth) {
  if (est.dim1() != truth.eigfuns.dim1() || est.dim2() != truth.eigfuns.dim2())
    throw InvalidArgument("mse_eigenfunctions: shape mismatch with ground truth");
  const std::size_t r = std::min(est.dim0(), truth.eigfuns.dim0());
  const std::size_t p = est.dim1();
  const Vector& w = truth.grid.quad_weights();
  Vector out(static_cast<Eigen::Index>(r));
  for (std::size_t k = 0; k < r; ++k) {
    double dot = 0.0;
    for (std::size_t j = 0; j < p; ++j)
      dot += (truth.eigfuns.fiber(k, j).array() * est.fiber(k, j).array() * w.array())
                 .sum();
    const double sign = dot >= 0.0 ? 1.0 : -1.0;
    double err = 0.0;
    for (std::size_t j = 0; j < p; ++j)
      err += ((truth.eigfuns.fiber(k, j) - sign * est.fiber(k, j)).array().square() *
              w.array())
                 .sum();
    out[static_cast<Eigen::Index>(k)] = err;
  }
  return out;
}

double mrse(const Tensor3& recovered, const GroundTruth& truth, std::size_t* excluded) {
  if (recovered.dim0() != truth.x.dim0() || recovered.dim1() != truth.x.dim1() ||
      recovered.dim2() != truth.x.dim2())
    throw InvalidArgument("mrse: shape mismatch with ground truth");
  const std::size_t n = recovered.dim0(), p = recovered.dim1();
  const Vector& w = truth.grid.quad_weights();
  double total = 0.0;
  std::size_t used = 0, skipped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      num += ((truth.x.fiber(i, j) - recovered.fiber(i, j)).array().square() * w.array())
                 .sum();
      den += (truth.x.fiber(i, j).array().square() * w.array()).sum();
    }
    if (den > 0.0) {
      total += num / den;
      ++used;
    } else {
      ++skipped;
    }
  }
  if (excluded) *excluded = skipped;
  if (used == 0) throw InvalidArgument("mrse: every truth trajectory has zero norm");
  return total / static_cast<double>(used);
}

}  // namespace sfpca
