#include "sfpca/grid.hpp"

#include <algorithm>
#include <cmath>

namespace sfpca {

namespace {

bool spacing_uniform(const std::vector<double>& t) {
  if (t.size() < 2) return true;
  const double h = t[1] - t[0];
  for (std::size_t k = 2; k < t.size(); ++k) {
    if (std::abs((t[k] - t[k - 1]) - h) > 1e-12) return false;
  }
  return true;
}

}  // namespace

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw InvalidArgument("grid: no points");
  if (!std::is_sorted(points_.begin(), points_.end()))
    throw InvalidArgument("grid: points must be increasing");
  for (std::size_t k = 1; k < points_.size(); ++k) {
    if (points_[k] <= points_[k - 1])
      throw InvalidArgument("grid: points must be strictly increasing");
  }
  // Domain is [0, 1]; a negative first point would also flip the backward
  // quadrature weight negative.
  if (points_.front() < 0.0 || points_.back() > 1.0)
    throw InvalidArgument("grid: points must lie in [0, 1]");
  const std::size_t m = points_.size();
  uniform_ = spacing_uniform(points_);
  weights_.resize(static_cast<Eigen::Index>(m));
  if (uniform_) {
    weights_.setConstant(1.0 / static_cast<double>(m));
  } else {
    double prev = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      weights_[static_cast<Eigen::Index>(k)] = points_[k] - prev;
      prev = points_[k];
    }
  }
}

Grid Grid::regular(std::size_t m) {
  if (m == 0) throw InvalidArgument("grid: m must be positive");
  std::vector<double> t(m);
  for (std::size_t k = 0; k < m; ++k)
    t[k] = static_cast<double>(k + 1) / static_cast<double>(m);
  return Grid(std::move(t));
}

Grid Grid::linspace(std::size_t m) {
  if (m < 2) throw InvalidArgument("grid: linspace needs at least 2 points");
  std::vector<double> t(m);
  for (std::size_t k = 0; k < m; ++k)
    t[k] = static_cast<double>(k) / static_cast<double>(m - 1);
  return Grid(std::move(t));
}

double Grid::inner(const Vector& f, const Vector& g) const {
  if (f.size() != weights_.size() || g.size() != weights_.size())
    throw InvalidArgument("grid: vector length does not match grid size");
  return (f.array() * g.array() * weights_.array()).sum();
}

double Grid::norm2(const Vector& f) const { return inner(f, f); }

}  // namespace sfpca
