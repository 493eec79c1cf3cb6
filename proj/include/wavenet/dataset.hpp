#pragma once

#include <span>
#include <vector>

#include "wavenet/tensor.hpp"

namespace wavenet {

/// Labeled single-channel signals, shape (N, 1, T).
struct Dataset {
  Tensor3 x;
  std::vector<int> y;
  double sample_rate = 1.0;

  std::size_t size() const { return y.size(); }
  std::size_t length() const { return x.t; }

  /// Copies the listed rows into a new batch.
  Dataset subset(std::span<const std::size_t> rows) const;
};

Dataset make_dataset_from_rows(const std::vector<std::vector<double>>& rows, std::vector<int> labels,
                               double sample_rate);

}  // namespace wavenet
