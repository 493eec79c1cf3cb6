#include "wavenet/confmap.hpp"

#include "wavenet/error.hpp"
#include "wavenet/imagery.hpp"

namespace wavenet {

ConfidenceMap outer_confidence(std::span<const double> row_probs, std::span<const double> col_probs) {
  ConfidenceMap m;
  m.rows = row_probs.size();
  m.cols = col_probs.size();
  m.row_probs.assign(row_probs.begin(), row_probs.end());
  m.col_probs.assign(col_probs.begin(), col_probs.end());
  m.values.resize(m.rows * m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) m.values[i * m.cols + j] = row_probs[i] * col_probs[j];
  return m;
}

ConfidenceMap confidence_map(Model& model, const LabeledPatch& patch) {
  if (patch.side != model.spec.input_length)
    throw ContractError("confidence_map: patch side " + std::to_string(patch.side) + " does not match model input length " +
                        std::to_string(model.spec.input_length));
  if (model.spec.num_classes <= static_cast<std::size_t>(kWaveLabel))
    throw ContractError("confidence_map: model has no wave class");
  const auto slices = slice_patch(patch);
  Tensor3 x(slices.size(), 1, patch.side);
  for (std::size_t i = 0; i < slices.size(); ++i) std::copy(slices[i].begin(), slices[i].end(), x.row(i, 0).begin());
  const auto probs = softmax(model.forward(x, Mode::eval));
  std::vector<double> r(patch.side);
  std::vector<double> c(patch.side);
  for (std::size_t i = 0; i < patch.side; ++i) {
    r[i] = probs[i][kWaveLabel];
    c[i] = probs[patch.side + i][kWaveLabel];
  }
  return outer_confidence(r, c);
}

}  // namespace wavenet
