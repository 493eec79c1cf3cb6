#pragma once

// Differentiable building blocks with explicit forward/backward passes.
//
// Each layer caches what its backward pass needs during forward, so one
// instance serves one forward/backward pair at a time. Gradients accumulate
// into the layer's grad buffers until zero_grad().

#include "wavenet/random.hpp"
#include <span>
#include <string>
#include <vector>

#include "wavenet/cwt_kernels.hpp"
#include "wavenet/morlet.hpp"
#include "wavenet/tensor.hpp"

namespace wavenet {

enum class Mode { train, eval };

/// Optimizer group: wavelet (f, w) parameters or everything else.
enum class ParamGroup { wavelet = 0, network = 1 };

/// Mutable handle to one parameter array and its gradient buffer.
struct ParamView {
  std::string name;
  std::span<double> value;
  std::span<double> grad;
  ParamGroup group;
};


/// Complex Morlet filter bank producing per-filter magnitude responses.
class WaveletLayer {
 public:
  WaveletLayer() = default;
  WaveletLayer(std::vector<MorletParams> filters, double sample_rate);

  /// (n, 1, T) -> (n, F, T). Throws InvariantError if any filter left the clip box.
  Tensor3 forward(const Tensor3& x, Mode mode);
  Tensor3 backward(const Tensor3& upstream, bool need_input_grad);
  void params(std::vector<ParamView>& out, const std::string& prefix);
  void zero_grad();

  std::vector<MorletParams> filters;
  double sample_rate = 1.0;
  double eps_mag = kMagnitudeEps;
  bool parallel = true;
  std::vector<double> grad_f;
  std::vector<double> grad_w;

 private:
  Tensor3 input_;
  std::vector<SampledKernel> bank_;
  kernels::BankCache cache_;
};

/// Per-channel normalization over (batch x time) positions, then gamma/beta.
class BatchNorm1d {
 public:
  BatchNorm1d() = default;
  explicit BatchNorm1d(std::size_t channels);

  Tensor3 forward(const Tensor3& x, Mode mode);
  Tensor3 backward(const Tensor3& upstream, bool need_input_grad);
  void params(std::vector<ParamView>& out, const std::string& prefix);
  void zero_grad();

  std::vector<double> gamma;
  std::vector<double> beta;
  std::vector<double> running_mean;
  std::vector<double> running_var;
  double eps = 1e-5;
  double momentum = 0.1;
  std::vector<double> grad_gamma;
  std::vector<double> grad_beta;

 private:
  Mode mode_ = Mode::train;
  Tensor3 xhat_;
  std::vector<double> inv_std_;
};

/// y = W x + b on the flattened (channel-major) sample; output shape (n, 1, out).
class Dense {
 public:
  Dense() = default;
  Dense(std::size_t in, std::size_t out);
  void init_uniform(Rng& rng);

  Tensor3 forward(const Tensor3& x, Mode mode);
  Tensor3 backward(const Tensor3& upstream, bool need_input_grad);
  void params(std::vector<ParamView>& out, const std::string& prefix);
  void zero_grad();

  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weight;  // row-major (out, in)
  std::vector<double> bias;
  std::vector<double> grad_weight;
  std::vector<double> grad_bias;

 private:
  Tensor3 input_;
};

class Tanh {
 public:
  Tensor3 forward(const Tensor3& x, Mode mode);
  Tensor3 backward(const Tensor3& upstream, bool need_input_grad);
  void params(std::vector<ParamView>&, const std::string&) {}
  void zero_grad() {}

 private:
  Tensor3 output_;
};

/// Zero-padded same-length 1D convolution (cross-correlation) with bias.
class Conv1d {
 public:
  Conv1d() = default;
  Conv1d(std::size_t in_channels, std::size_t out_channels, std::size_t kernel);
  void init_uniform(Rng& rng);

  Tensor3 forward(const Tensor3& x, Mode mode);
  Tensor3 backward(const Tensor3& upstream, bool need_input_grad);
  void params(std::vector<ParamView>& out, const std::string& prefix);
  void zero_grad();

  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t kernel = 3;
  std::vector<double> weight;  // (out, in, kernel)
  std::vector<double> bias;
  std::vector<double> grad_weight;
  std::vector<double> grad_bias;

 private:
  Tensor3 input_;
};

/// Non-overlapping max pooling; a trailing remainder shorter than the width is dropped.
class MaxPool1d {
 public:
  MaxPool1d() = default;
  explicit MaxPool1d(std::size_t width) : width(width) {}

  Tensor3 forward(const Tensor3& x, Mode mode);
  Tensor3 backward(const Tensor3& upstream, bool need_input_grad);
  void params(std::vector<ParamView>&, const std::string&) {}
  void zero_grad() {}

  std::size_t width = 2;

 private:
  std::size_t in_t_ = 0;
  std::size_t in_c_ = 0;
  std::vector<std::size_t> argmax_;
};

/// Fixed per-feature standardization (x - mean) / std. Holds no trainable state.
class Standardize {
 public:
  Tensor3 forward(const Tensor3& x, Mode mode);
  Tensor3 backward(const Tensor3& upstream, bool need_input_grad);
  void params(std::vector<ParamView>&, const std::string&) {}
  void zero_grad() {}

  std::vector<double> mean;
  std::vector<double> std;
};

struct XentResult {
  double loss = 0.0;  // mean over the batch
  Tensor3 grad;       // d(mean loss)/d(logits)
};

/// Softmax cross-entropy on logits of shape (n, 1, classes).
XentResult softmax_xent(const Tensor3& logits, std::span<const int> targets);

/// Row-wise softmax of (n, 1, classes) logits.
std::vector<std::vector<double>> softmax(const Tensor3& logits);

}  // namespace wavenet
