#pragma once

#include <span>
#include <vector>

#include "wavenet/model.hpp"
#include "wavenet/patch.hpp"

namespace wavenet {

/// Rank-1 wave-confidence map: values[i * side + j] = row_probs[i] * col_probs[j].
struct ConfidenceMap {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> row_probs;  // P(wave | horizontal slice i)
  std::vector<double> col_probs;  // P(wave | vertical slice j)
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

ConfidenceMap outer_confidence(std::span<const double> row_probs, std::span<const double> col_probs);

/// Runs every row and column slice of the patch through the model (eval mode)
/// and forms the outer product of the softmax wave probabilities.
ConfidenceMap confidence_map(Model& model, const LabeledPatch& patch);

}  // namespace wavenet
