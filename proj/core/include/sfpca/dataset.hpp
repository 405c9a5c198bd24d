#pragma once

#include <optional>
#include <vector>

#include "sfpca/grid.hpp"
#include "sfpca/tensor.hpp"

namespace sfpca {

// Discretely observed multivariate functional data: n subjects, p processes,
// m grid points, plus optional class labels (0/1) for supervised work.
struct FunctionalDataset {
  Tensor3 y;  // n x p x m observed values
  Grid grid;
  std::optional<std::vector<int>> labels;  // length n when present

  std::size_t n() const { return y.dim0(); }
  std::size_t p() const { return y.dim1(); }
  std::size_t m() const { return y.dim2(); }

  void validate() const {
    if (y.dim2() != grid.size())
      throw InvalidArgument("dataset: tensor grid axis does not match grid size");
    if (labels && labels->size() != y.dim0())
      throw InvalidArgument("dataset: label count does not match subject count");
  }
};

}  // namespace sfpca
