#include "wavenet/model.hpp"

#include "wavenet/error.hpp"

namespace wavenet {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::wavenet: return "wavenet";
    case ModelKind::fcnet: return "fcnet";
    case ModelKind::convnet: return "convnet";
    case ModelKind::banknet: return "banknet";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "wavenet") return ModelKind::wavenet;
  if (name == "fcnet") return ModelKind::fcnet;
  if (name == "convnet") return ModelKind::convnet;
  if (name == "banknet") return ModelKind::banknet;
  throw ContractError("unknown model kind '" + name + "' (expected wavenet|fcnet|convnet|banknet)");
}

void ModelSpec::validate() const {
  if (input_length == 0) throw ContractError("model spec: input_length must be positive");
  if (num_classes < 2) throw ContractError("model spec: need at least two classes");
  for (auto h : hidden)
    if (h == 0) throw ContractError("model spec: hidden layer of size 0");
  const bool uses_wavelets = kind == ModelKind::wavenet || kind == ModelKind::banknet;
  if (uses_wavelets) {
    if (filter_freqs.empty()) throw ContractError("model spec: " + to_string(kind) + " needs at least one filter");
    if (!(sample_rate > 0.0)) throw ContractError("model spec: sample_rate must be positive");
    for (double f : filter_freqs) {
      MorletParams p{f, filter_width};
      if (!p.in_clip_box()) throw ContractError("model spec: initial filter outside the clip box");
    }
  }
  if (kind == ModelKind::banknet && (train_f || train_w))
    throw ContractError("model spec: banknet filters must be frozen");
  if (kind == ModelKind::convnet) {
    if (conv_channels.empty()) throw ContractError("model spec: convnet needs conv layers");
    if (conv_kernel % 2 == 0) throw ContractError("model spec: conv kernel must be odd");
    std::size_t t = input_length;
    for (std::size_t i = 0; i < conv_channels.size(); ++i) t /= pool_width;
    if (t == 0) throw ContractError("model spec: input too short for the pooling stack");
  }
}

namespace {

std::size_t add_dense_stack(Model& m, std::size_t features, Rng& rng) {
  for (auto h : m.spec.hidden) {
    Dense d(features, h);
    d.init_uniform(rng);
    m.layers.emplace_back(std::move(d));
    m.layers.emplace_back(Tanh{});
    features = h;
  }
  Dense head(features, m.spec.num_classes);
  head.init_uniform(rng);
  m.layers.emplace_back(std::move(head));
  return features;
}

WaveletLayer make_bank(const ModelSpec& spec) {
  std::vector<MorletParams> filters;
  for (double f : spec.filter_freqs) filters.push_back({f, spec.filter_width, spec.train_f, spec.train_w});
  return WaveletLayer(std::move(filters), spec.sample_rate);
}

}  // namespace

Model build_model(const ModelSpec& spec, Rng& rng) {
  spec.validate();
  Model m;
  m.spec = spec;
  const std::size_t T = spec.input_length;
  switch (spec.kind) {
    case ModelKind::wavenet: {
      const std::size_t F = spec.filter_freqs.size();
      m.layers.emplace_back(make_bank(spec));
      m.layers.emplace_back(BatchNorm1d(F));
      add_dense_stack(m, F * T, rng);
      break;
    }
    case ModelKind::banknet: {
      const std::size_t F = spec.filter_freqs.size();
      m.layers.emplace_back(make_bank(spec));
      Standardize s;
      s.mean.assign(F * T, 0.0);
      s.std.assign(F * T, 1.0);
      m.layers.emplace_back(std::move(s));
      add_dense_stack(m, F * T, rng);
      break;
    }
    case ModelKind::fcnet:
      add_dense_stack(m, T, rng);
      break;
    case ModelKind::convnet: {
      std::size_t channels = 1;
      std::size_t t = T;
      for (auto out : spec.conv_channels) {
        Conv1d c(channels, out, spec.conv_kernel);
        c.init_uniform(rng);
        m.layers.emplace_back(std::move(c));
        m.layers.emplace_back(Tanh{});
        m.layers.emplace_back(MaxPool1d(spec.pool_width));
        channels = out;
        t /= spec.pool_width;
      }
      Dense head(channels * t, spec.num_classes);
      head.init_uniform(rng);
      m.layers.emplace_back(std::move(head));
      break;
    }
  }
  return m;
}

Tensor3 Model::forward(const Tensor3& x, Mode mode, std::size_t from) {
  if (from == 0 && (x.c != 1 || x.t != spec.input_length))
    throw ContractError("model: expected input (n, 1, " + std::to_string(spec.input_length) + "), got (" +
                        std::to_string(x.n) + ", " + std::to_string(x.c) + ", " + std::to_string(x.t) + ")");
  Tensor3 h = x;
  for (std::size_t i = from; i < layers.size(); ++i)
    h = std::visit([&](auto& layer) { return layer.forward(h, mode); }, layers[i]);
  return h;
}

void Model::backward(const Tensor3& grad_logits, std::size_t stop) {
  Tensor3 g = grad_logits;
  for (std::size_t i = layers.size(); i-- > stop;) {
    const bool need_input = i > stop;
    g = std::visit([&](auto& layer) { return layer.backward(g, need_input); }, layers[i]);
  }
}

std::vector<ParamView> Model::params() {
  std::vector<ParamView> out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string prefix = "layer" + std::to_string(i) + ".";
    std::visit([&](auto& layer) { layer.params(out, prefix); }, layers[i]);
  }
  return out;
}

void Model::zero_grad() {
  for (auto& l : layers) std::visit([](auto& layer) { layer.zero_grad(); }, l);
}

WaveletLayer* Model::wavelet() {
  return layers.empty() ? nullptr : std::get_if<WaveletLayer>(&layers.front());
}

const WaveletLayer* Model::wavelet() const {
  return layers.empty() ? nullptr : std::get_if<WaveletLayer>(&layers.front());
}

Standardize* Model::standardizer() {
  return layers.size() < 2 ? nullptr : std::get_if<Standardize>(&layers[1]);
}

std::size_t Model::trainable_begin() const { return spec.kind == ModelKind::banknet ? 2 : 0; }

void Model::set_parallel(bool on) {
  if (auto* w = wavelet()) w->parallel = on;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < count; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return v;
}

}  // namespace wavenet
