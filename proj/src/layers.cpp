#include "wavenet/layers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wavenet/error.hpp"

namespace wavenet {

namespace {

std::span<double> one(double& v) { return {&v, 1}; }

void fill_uniform(std::vector<double>& v, double bound, Rng& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (auto& x : v) x = dist(rng);
}

}  // namespace

// ---------------------------------------------------------------- WaveletLayer

WaveletLayer::WaveletLayer(std::vector<MorletParams> filters_in, double rate)
    : filters(std::move(filters_in)), sample_rate(rate) {
  if (filters.empty()) throw ContractError("WaveletLayer needs at least one filter");
  if (!(sample_rate > 0.0)) throw DomainError("WaveletLayer: sample_rate must be positive");
  zero_grad();
}

Tensor3 WaveletLayer::forward(const Tensor3& x, Mode) {
  for (std::size_t j = 0; j < filters.size(); ++j) {
    if (!filters[j].in_clip_box())
      throw InvariantError("wavelet filter " + std::to_string(j) + " outside the clip box (f=" +
                           std::to_string(filters[j].f) + ", w=" + std::to_string(filters[j].w) + ")");
  }
  if (x.t == 0) throw DomainError("WaveletLayer: empty signal");
  // Taps further than T-1 from the center never overlap the signal.
  const std::size_t cap = x.t - 1;
  bank_.clear();
  bank_.reserve(filters.size());
  for (const auto& p : filters) bank_.push_back(sample_kernel(p, sample_rate, kDefaultTruncSigmas, cap));
  input_ = x;
  if (parallel)
    kernels::bank_forward_parallel(x, bank_, eps_mag, cache_);
  else
    kernels::bank_forward_serial(x, bank_, eps_mag, cache_);
  return cache_.out;
}

Tensor3 WaveletLayer::backward(const Tensor3& upstream, bool need_input_grad) {
  if (bank_.empty()) throw ContractError("WaveletLayer::backward without a forward pass");
  kernels::BankGrads g;
  if (parallel)
    kernels::bank_backward_parallel(input_, bank_, cache_, upstream, need_input_grad, g);
  else
    kernels::bank_backward_serial(input_, bank_, cache_, upstream, need_input_grad, g);

  for (std::size_t j = 0; j < filters.size(); ++j) {
    const auto& p = filters[j];
    if (!p.f_trainable && !p.w_trainable) continue;
    const auto d = kernel_partials(p, sample_rate, kDefaultTruncSigmas, bank_[j].half);
    double df = 0.0;
    double dw = 0.0;
    for (std::size_t k = 0; k < bank_[j].size(); ++k) {
      df += g.re[j][k] * d.re_df[k] + g.im[j][k] * d.im_df[k];
      dw += g.re[j][k] * d.re_dw[k] + g.im[j][k] * d.im_dw[k];
    }
    if (p.f_trainable) grad_f[j] += df;
    if (p.w_trainable) grad_w[j] += dw;
  }
  return need_input_grad ? std::move(g.x) : Tensor3{};
}

void WaveletLayer::params(std::vector<ParamView>& out, const std::string& prefix) {
  grad_f.resize(filters.size(), 0.0);
  grad_w.resize(filters.size(), 0.0);
  for (std::size_t j = 0; j < filters.size(); ++j) {
    const std::string id = prefix + "filter" + std::to_string(j);
    if (filters[j].f_trainable) out.push_back({id + ".f", one(filters[j].f), one(grad_f[j]), ParamGroup::wavelet});
    if (filters[j].w_trainable) out.push_back({id + ".w", one(filters[j].w), one(grad_w[j]), ParamGroup::wavelet});
  }
}

void WaveletLayer::zero_grad() {
  grad_f.assign(filters.size(), 0.0);
  grad_w.assign(filters.size(), 0.0);
}

// ---------------------------------------------------------------- BatchNorm1d

BatchNorm1d::BatchNorm1d(std::size_t channels)
    : gamma(channels, 1.0),
      beta(channels, 0.0),
      running_mean(channels, 0.0),
      running_var(channels, 1.0),
      grad_gamma(channels, 0.0),
      grad_beta(channels, 0.0) {}

Tensor3 BatchNorm1d::forward(const Tensor3& x, Mode mode) {
  if (x.c != gamma.size()) throw ContractError("BatchNorm1d: channel count mismatch");
  mode_ = mode;
  const std::size_t count = x.n * x.t;
  if (mode == Mode::train && count < 2)
    throw DomainError("BatchNorm1d: train mode needs at least two values per channel");

  xhat_ = Tensor3(x.n, x.c, x.t);
  inv_std_.assign(x.c, 0.0);
  Tensor3 y(x.n, x.c, x.t);
  for (std::size_t ch = 0; ch < x.c; ++ch) {
    double mean = 0.0;
    double var = 0.0;
    if (mode == Mode::train) {
      for (std::size_t b = 0; b < x.n; ++b)
        for (double v : x.row(b, ch)) mean += v;
      mean /= static_cast<double>(count);
      for (std::size_t b = 0; b < x.n; ++b)
        for (double v : x.row(b, ch)) var += (v - mean) * (v - mean);
      var /= static_cast<double>(count);
      const double unbiased = var * static_cast<double>(count) / static_cast<double>(count - 1);
      running_mean[ch] = (1.0 - momentum) * running_mean[ch] + momentum * mean;
      running_var[ch] = (1.0 - momentum) * running_var[ch] + momentum * unbiased;
    } else {
      mean = running_mean[ch];
      var = running_var[ch];
    }
    const double inv = 1.0 / std::sqrt(var + eps);
    inv_std_[ch] = inv;
    for (std::size_t b = 0; b < x.n; ++b) {
      for (std::size_t k = 0; k < x.t; ++k) {
        const double h = (x(b, ch, k) - mean) * inv;
        xhat_(b, ch, k) = h;
        y(b, ch, k) = gamma[ch] * h + beta[ch];
      }
    }
  }
  return y;
}

Tensor3 BatchNorm1d::backward(const Tensor3& g, bool need_input_grad) {
  if (!g.same_shape(xhat_)) throw ContractError("BatchNorm1d::backward: shape mismatch");
  const double count = static_cast<double>(g.n * g.t);
  Tensor3 dx = need_input_grad ? Tensor3(g.n, g.c, g.t) : Tensor3{};
  for (std::size_t ch = 0; ch < g.c; ++ch) {
    double sum_g = 0.0;
    double sum_gh = 0.0;
    for (std::size_t b = 0; b < g.n; ++b) {
      for (std::size_t k = 0; k < g.t; ++k) {
        sum_g += g(b, ch, k);
        sum_gh += g(b, ch, k) * xhat_(b, ch, k);
      }
    }
    grad_beta[ch] += sum_g;
    grad_gamma[ch] += sum_gh;
    if (!need_input_grad) continue;
    const double scale = gamma[ch] * inv_std_[ch];
    for (std::size_t b = 0; b < g.n; ++b) {
      for (std::size_t k = 0; k < g.t; ++k) {
        if (mode_ == Mode::train)
          dx(b, ch, k) = scale * (g(b, ch, k) - sum_g / count - xhat_(b, ch, k) * sum_gh / count);
        else
          dx(b, ch, k) = scale * g(b, ch, k);
      }
    }
  }
  return dx;
}

void BatchNorm1d::params(std::vector<ParamView>& out, const std::string& prefix) {
  out.push_back({prefix + "gamma", gamma, grad_gamma, ParamGroup::network});
  out.push_back({prefix + "beta", beta, grad_beta, ParamGroup::network});
}

void BatchNorm1d::zero_grad() {
  grad_gamma.assign(gamma.size(), 0.0);
  grad_beta.assign(beta.size(), 0.0);
}

// ---------------------------------------------------------------- Dense

Dense::Dense(std::size_t in_features, std::size_t out_features)
    : in(in_features),
      out(out_features),
      weight(in_features * out_features, 0.0),
      bias(out_features, 0.0),
      grad_weight(in_features * out_features, 0.0),
      grad_bias(out_features, 0.0) {
  if (in == 0 || out == 0) throw ContractError("Dense: zero-sized layer");
}

void Dense::init_uniform(Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  fill_uniform(weight, bound, rng);
  fill_uniform(bias, bound, rng);
}

Tensor3 Dense::forward(const Tensor3& x, Mode) {
  if (x.features() != in)
    throw ContractError("Dense: expected " + std::to_string(in) + " features, got " + std::to_string(x.features()));
  input_ = x;
  Tensor3 y(x.n, 1, out);
  for (std::size_t b = 0; b < x.n; ++b) {
    const auto xs = x.sample(b);
    for (std::size_t o = 0; o < out; ++o) {
      const double* w = weight.data() + o * in;
      double s = bias[o];
      for (std::size_t i = 0; i < in; ++i) s += w[i] * xs[i];
      y(b, 0, o) = s;
    }
  }
  return y;
}

Tensor3 Dense::backward(const Tensor3& g, bool need_input_grad) {
  if (g.n != input_.n || g.features() != out) throw ContractError("Dense::backward: shape mismatch");
  Tensor3 dx = need_input_grad ? Tensor3(input_.n, input_.c, input_.t) : Tensor3{};
  for (std::size_t b = 0; b < g.n; ++b) {
    const auto xs = input_.sample(b);
    for (std::size_t o = 0; o < out; ++o) {
      const double go = g(b, 0, o);
      grad_bias[o] += go;
      double* gw = grad_weight.data() + o * in;
      for (std::size_t i = 0; i < in; ++i) gw[i] += go * xs[i];
      if (need_input_grad) {
        const double* w = weight.data() + o * in;
        auto dxs = dx.sample(b);
        for (std::size_t i = 0; i < in; ++i) dxs[i] += w[i] * go;
      }
    }
  }
  return dx;
}

void Dense::params(std::vector<ParamView>& out_params, const std::string& prefix) {
  out_params.push_back({prefix + "weight", weight, grad_weight, ParamGroup::network});
  out_params.push_back({prefix + "bias", bias, grad_bias, ParamGroup::network});
}

void Dense::zero_grad() {
  std::fill(grad_weight.begin(), grad_weight.end(), 0.0);
  std::fill(grad_bias.begin(), grad_bias.end(), 0.0);
}

// ---------------------------------------------------------------- Tanh

Tensor3 Tanh::forward(const Tensor3& x, Mode) {
  output_ = x;
  for (auto& v : output_.data) v = std::tanh(v);
  return output_;
}

Tensor3 Tanh::backward(const Tensor3& g, bool need_input_grad) {
  if (!g.same_shape(output_)) throw ContractError("Tanh::backward: shape mismatch");
  if (!need_input_grad) return {};
  Tensor3 dx = g;
  for (std::size_t i = 0; i < dx.data.size(); ++i) dx.data[i] *= 1.0 - output_.data[i] * output_.data[i];
  return dx;
}

// ---------------------------------------------------------------- Conv1d

Conv1d::Conv1d(std::size_t in_ch, std::size_t out_ch, std::size_t k)
    : in_channels(in_ch),
      out_channels(out_ch),
      kernel(k),
      weight(out_ch * in_ch * k, 0.0),
      bias(out_ch, 0.0),
      grad_weight(out_ch * in_ch * k, 0.0),
      grad_bias(out_ch, 0.0) {
  if (k % 2 == 0) throw ContractError("Conv1d: kernel size must be odd");
  if (in_ch == 0 || out_ch == 0) throw ContractError("Conv1d: zero channels");
}

void Conv1d::init_uniform(Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_channels * kernel));
  fill_uniform(weight, bound, rng);
  fill_uniform(bias, bound, rng);
}

Tensor3 Conv1d::forward(const Tensor3& x, Mode) {
  if (x.c != in_channels) throw ContractError("Conv1d: input channel mismatch");
  input_ = x;
  const auto T = static_cast<long>(x.t);
  const auto pad = static_cast<long>(kernel / 2);
  Tensor3 y(x.n, out_channels, x.t);
  for (std::size_t b = 0; b < x.n; ++b) {
    for (std::size_t o = 0; o < out_channels; ++o) {
      auto yr = y.row(b, o);
      std::fill(yr.begin(), yr.end(), bias[o]);
      for (std::size_t i = 0; i < in_channels; ++i) {
        const auto xr = x.row(b, i);
        const double* w = weight.data() + (o * in_channels + i) * kernel;
        for (long tau = 0; tau < T; ++tau) {
          double s = 0.0;
          for (long k = 0; k < static_cast<long>(kernel); ++k) {
            const long src = tau + k - pad;
            if (src >= 0 && src < T) s += w[k] * xr[src];
          }
          yr[tau] += s;
        }
      }
    }
  }
  return y;
}

Tensor3 Conv1d::backward(const Tensor3& g, bool need_input_grad) {
  if (g.n != input_.n || g.c != out_channels || g.t != input_.t)
    throw ContractError("Conv1d::backward: shape mismatch");
  const auto T = static_cast<long>(g.t);
  const auto pad = static_cast<long>(kernel / 2);
  Tensor3 dx = need_input_grad ? Tensor3(input_.n, in_channels, input_.t) : Tensor3{};
  for (std::size_t b = 0; b < g.n; ++b) {
    for (std::size_t o = 0; o < out_channels; ++o) {
      const auto gr = g.row(b, o);
      for (long tau = 0; tau < T; ++tau) grad_bias[o] += gr[tau];
      for (std::size_t i = 0; i < in_channels; ++i) {
        const auto xr = input_.row(b, i);
        const std::size_t base = (o * in_channels + i) * kernel;
        for (long k = 0; k < static_cast<long>(kernel); ++k) {
          double s = 0.0;
          for (long tau = 0; tau < T; ++tau) {
            const long src = tau + k - pad;
            if (src >= 0 && src < T) s += gr[tau] * xr[src];
          }
          grad_weight[base + k] += s;
        }
        if (need_input_grad) {
          auto dxr = dx.row(b, i);
          for (long tau = 0; tau < T; ++tau) {
            for (long k = 0; k < static_cast<long>(kernel); ++k) {
              const long src = tau + k - pad;
              if (src >= 0 && src < T) dxr[src] += weight[base + k] * gr[tau];
            }
          }
        }
      }
    }
  }
  return dx;
}

void Conv1d::params(std::vector<ParamView>& out, const std::string& prefix) {
  out.push_back({prefix + "weight", weight, grad_weight, ParamGroup::network});
  out.push_back({prefix + "bias", bias, grad_bias, ParamGroup::network});
}

void Conv1d::zero_grad() {
  std::fill(grad_weight.begin(), grad_weight.end(), 0.0);
  std::fill(grad_bias.begin(), grad_bias.end(), 0.0);
}

// ---------------------------------------------------------------- MaxPool1d

Tensor3 MaxPool1d::forward(const Tensor3& x, Mode) {
  if (width == 0) throw ContractError("MaxPool1d: zero width");
  const std::size_t out_t = x.t / width;
  if (out_t == 0) throw ContractError("MaxPool1d: input shorter than the pooling width");
  in_t_ = x.t;
  in_c_ = x.c;
  Tensor3 y(x.n, x.c, out_t);
  argmax_.assign(y.data.size(), 0);
  for (std::size_t b = 0; b < x.n; ++b) {
    for (std::size_t ch = 0; ch < x.c; ++ch) {
      const auto xr = x.row(b, ch);
      for (std::size_t p = 0; p < out_t; ++p) {
        std::size_t best = p * width;
        for (std::size_t k = best + 1; k < (p + 1) * width; ++k)
          if (xr[k] > xr[best]) best = k;
        y(b, ch, p) = xr[best];
        argmax_[(b * x.c + ch) * out_t + p] = best;
      }
    }
  }
  return y;
}

Tensor3 MaxPool1d::backward(const Tensor3& g, bool need_input_grad) {
  if (g.data.size() != argmax_.size() || g.c != in_c_) throw ContractError("MaxPool1d::backward: shape mismatch");
  if (!need_input_grad) return {};
  Tensor3 dx(g.n, g.c, in_t_);
  for (std::size_t b = 0; b < g.n; ++b)
    for (std::size_t ch = 0; ch < g.c; ++ch)
      for (std::size_t p = 0; p < g.t; ++p)
        dx(b, ch, argmax_[(b * g.c + ch) * g.t + p]) += g(b, ch, p);
  return dx;
}

// ---------------------------------------------------------------- Standardize

Tensor3 Standardize::forward(const Tensor3& x, Mode) {
  if (mean.size() != x.features() || std.size() != x.features())
    throw ContractError("Standardize: feature count mismatch");
  Tensor3 y = x;
  for (std::size_t b = 0; b < x.n; ++b) {
    auto s = y.sample(b);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = (s[i] - mean[i]) / std[i];
  }
  return y;
}

Tensor3 Standardize::backward(const Tensor3& g, bool need_input_grad) {
  if (!need_input_grad) return {};
  if (g.features() != std.size()) throw ContractError("Standardize::backward: shape mismatch");
  Tensor3 dx = g;
  for (std::size_t b = 0; b < g.n; ++b) {
    auto s = dx.sample(b);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] /= std[i];
  }
  return dx;
}

// ---------------------------------------------------------------- loss

std::vector<std::vector<double>> softmax(const Tensor3& logits) {
  std::vector<std::vector<double>> probs(logits.n);
  for (std::size_t b = 0; b < logits.n; ++b) {
    const auto z = logits.sample(b);
    const double zmax = *std::max_element(z.begin(), z.end());
    auto& p = probs[b];
    p.resize(z.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) sum += p[k] = std::exp(z[k] - zmax);
    for (auto& v : p) v /= sum;
  }
  return probs;
}

XentResult softmax_xent(const Tensor3& logits, std::span<const int> targets) {
  const std::size_t classes = logits.features();
  if (classes < 2) throw ContractError("softmax_xent: need at least two classes");
  if (targets.size() != logits.n) throw ContractError("softmax_xent: target count mismatch");
  if (logits.n == 0) throw DomainError("softmax_xent: empty batch");

  XentResult r;
  r.grad = Tensor3(logits.n, 1, classes);
  const double inv_n = 1.0 / static_cast<double>(logits.n);
  for (std::size_t b = 0; b < logits.n; ++b) {
    const int y = targets[b];
    if (y < 0 || static_cast<std::size_t>(y) >= classes)
      throw ContractError("softmax_xent: target " + std::to_string(y) + " out of range");
    const auto z = logits.sample(b);
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - zmax);
    const double log_sum = std::log(sum);
    r.loss += -(z[y] - zmax - log_sum);
    for (std::size_t k = 0; k < classes; ++k) {
      const double p = std::exp(z[k] - zmax - log_sum);
      r.grad(b, 0, k) = (p - (static_cast<int>(k) == y ? 1.0 : 0.0)) * inv_n;
    }
  }
  r.loss *= inv_n;
  return r;
}

}  // namespace wavenet
