#pragma once

#include <string>
#include <variant>
#include <vector>

#include "wavenet/layers.hpp"

namespace wavenet {

enum class ModelKind { wavenet, fcnet, convnet, banknet };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

/// Declarative description of one architecture.
struct ModelSpec {
  ModelKind kind = ModelKind::wavenet;
  std::size_t input_length = 205;
  std::size_t num_classes = 2;
  double sample_rate = 256.0;
  // Wavelet front end (wavenet, banknet).
  std::vector<double> filter_freqs;
  double filter_width = 10.0;
  bool train_f = true;
  bool train_w = false;
  // Dense tanh layers before the linear head.
  std::vector<std::size_t> hidden;
  // conv-net only.
  std::vector<std::size_t> conv_channels{4, 8};
  std::size_t conv_kernel = 3;
  std::size_t pool_width = 2;

  /// Throws ContractError on kind-specific inconsistencies.
  void validate() const;
};

using Layer = std::variant<WaveletLayer, BatchNorm1d, Dense, Tanh, Conv1d, MaxPool1d, Standardize>;

/// Sequential stack ending in a linear head that produces (n, 1, classes) logits.
class Model {
 public:
  ModelSpec spec;
  std::vector<Layer> layers;

  /// Runs layers [from, end). `from` > 0 feeds precomputed intermediate features.
  Tensor3 forward(const Tensor3& x, Mode mode, std::size_t from = 0);

  /// Backpropagates through layers [stop, end); layer `stop` skips its input gradient.
  void backward(const Tensor3& grad_logits, std::size_t stop = 0);

  /// Trainable parameters in a fixed order (layer order, then declaration order).
  std::vector<ParamView> params();
  void zero_grad();

  WaveletLayer* wavelet();
  const WaveletLayer* wavelet() const;
  Standardize* standardizer();

  /// First layer that training touches: past the frozen feature extractor for
  /// bank-net, 0 otherwise.
  std::size_t trainable_begin() const;

  void set_parallel(bool on);
};

Model build_model(const ModelSpec& spec, Rng& rng);

std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace wavenet
