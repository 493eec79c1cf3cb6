#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wavenet {

/// Dense rank-3 array laid out (batch, channels, time), time fastest.
///
/// Flattening a sample to a feature vector is channel-major by construction:
/// feature index = channel * time + step.
struct Tensor3 {
  std::size_t n = 0;
  std::size_t c = 0;
  std::size_t t = 0;
  std::vector<double> data;

  Tensor3() = default;
  Tensor3(std::size_t batch, std::size_t channels, std::size_t time, double fill = 0.0)
      : n(batch), c(channels), t(time), data(batch * channels * time, fill) {}

  double& operator()(std::size_t b, std::size_t ch, std::size_t k) { return data[(b * c + ch) * t + k]; }
  double operator()(std::size_t b, std::size_t ch, std::size_t k) const { return data[(b * c + ch) * t + k]; }

  std::span<double> row(std::size_t b, std::size_t ch) { return {data.data() + (b * c + ch) * t, t}; }
  std::span<const double> row(std::size_t b, std::size_t ch) const { return {data.data() + (b * c + ch) * t, t}; }

  std::span<double> sample(std::size_t b) { return {data.data() + b * c * t, c * t}; }
  std::span<const double> sample(std::size_t b) const { return {data.data() + b * c * t, c * t}; }

  std::size_t features() const { return c * t; }
  bool same_shape(const Tensor3& o) const { return n == o.n && c == o.c && t == o.t; }
};

}  // namespace wavenet
