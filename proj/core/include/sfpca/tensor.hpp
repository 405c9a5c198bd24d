#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "sfpca/errors.hpp"

namespace sfpca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense rank-3 array, row-major with the last index fastest: entry (i, j, k)
// lives at ((i * d1) + j) * d2 + k. Used for subject x process x (grid|basis)
// blocks throughout.
class Tensor3 {
 public:
  Tensor3() : d0_(0), d1_(0), d2_(0) {}

  Tensor3(std::size_t d0, std::size_t d1, std::size_t d2)
      : d0_(d0), d1_(d1), d2_(d2), data_(d0 * d1 * d2, 0.0) {}

  std::size_t dim0() const { return d0_; }
  std::size_t dim1() const { return d1_; }
  std::size_t dim2() const { return d2_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * d1_ + j) * d2_ + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * d1_ + j) * d2_ + k];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  // The (i, j) fiber as a length-d2 vector view.
  Eigen::Map<const Vector> fiber(std::size_t i, std::size_t j) const {
    return Eigen::Map<const Vector>(data_.data() + (i * d1_ + j) * d2_,
                                    static_cast<Eigen::Index>(d2_));
  }
  Eigen::Map<Vector> fiber(std::size_t i, std::size_t j) {
    return Eigen::Map<Vector>(data_.data() + (i * d1_ + j) * d2_,
                              static_cast<Eigen::Index>(d2_));
  }

  // Slice i as a d1 x d2 row-major matrix view.
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
  slice(std::size_t i) const {
    return {data_.data() + i * d1_ * d2_, static_cast<Eigen::Index>(d1_),
            static_cast<Eigen::Index>(d2_)};
  }
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
  slice(std::size_t i) {
    return {data_.data() + i * d1_ * d2_, static_cast<Eigen::Index>(d1_),
            static_cast<Eigen::Index>(d2_)};
  }

  // Whole tensor flattened to d0 x (d1*d2), subjects as rows.
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
  flat_rows() const {
    return {data_.data(), static_cast<Eigen::Index>(d0_),
            static_cast<Eigen::Index>(d1_ * d2_)};
  }
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
  flat_rows() {
    return {data_.data(), static_cast<Eigen::Index>(d0_),
            static_cast<Eigen::Index>(d1_ * d2_)};
  }

 private:
  std::size_t d0_, d1_, d2_;
  std::vector<double> data_;
};

}  // namespace sfpca
