#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wavenet/layers.hpp"

namespace wavenet {

struct AdamConfig {
  double lr_wavelet = 0.1;   // group 0: every wavelet f and w
  double lr_network = 1e-4;  // group 1: all other parameters
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  double lr(ParamGroup g) const { return g == ParamGroup::wavelet ? lr_wavelet : lr_network; }
};

/// Bias-corrected Adam with one learning rate per parameter group.
///
/// Moment buffers are matched to parameters by position, so the parameter
/// list passed to step() must enumerate the same arrays in the same order
/// every call.
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {});

  /// Throws NumericError (leaving every parameter untouched) if any gradient
  /// is non-finite.
  void step(std::span<const ParamView> params);

  std::int64_t steps() const { return t_; }
  const AdamConfig& config() const { return cfg_; }
  const std::vector<std::vector<double>>& first_moment() const { return m_; }
  const std::vector<std::vector<double>>& second_moment() const { return v_; }

 private:
  AdamConfig cfg_;
  std::int64_t t_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

}  // namespace wavenet
