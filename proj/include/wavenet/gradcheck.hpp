#pragma once

#include <string>
#include <vector>

#include "wavenet/dataset.hpp"
#include "wavenet/model.hpp"

namespace wavenet {

struct ParamCheck {
  std::string name;
  std::size_t size = 0;
  std::size_t compared = 0;  // elements where |analytic| + |numeric| > floor
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;  // at worst_index
  double numeric = 0.0;
};

struct GradcheckReport {
  std::vector<ParamCheck> params;
  double max_rel_error = 0.0;
  std::string worst_param;
};

/// Compares backprop gradients of the mean cross-entropy against central
/// differences for every trainable scalar (frozen wavelet parameters are not
/// listed). Batch norm runs on batch statistics. The model is not modified.
/// rel = |a - n| / max(|a|, |n|), taken where |a| + |n| > floor.
GradcheckReport gradcheck(const Model& model, const Dataset& batch, double step = 1e-5, double floor = 1e-8);

}  // namespace wavenet
