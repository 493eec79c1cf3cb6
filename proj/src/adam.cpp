#include "wavenet/adam.hpp"

#include <cmath>
#include <string>

#include "wavenet/error.hpp"

namespace wavenet {

Adam::Adam(AdamConfig cfg) : cfg_(cfg) {
  if (cfg_.lr_wavelet < 0.0 || cfg_.lr_network < 0.0) throw DomainError("Adam: negative learning rate");
}

void Adam::step(std::span<const ParamView> params) {
  if (m_.empty()) {
    for (const auto& p : params) {
      m_.emplace_back(p.value.size(), 0.0);
      v_.emplace_back(p.value.size(), 0.0);
    }
  }
  if (m_.size() != params.size()) throw ContractError("Adam: parameter list changed between steps");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].value.size() != m_[i].size() || params[i].grad.size() != m_[i].size())
      throw ContractError("Adam: parameter '" + params[i].name + "' changed shape");
    for (std::size_t k = 0; k < params[i].grad.size(); ++k) {
      if (!std::isfinite(params[i].grad[k]))
        throw NumericError("Adam: non-finite gradient in '" + params[i].name + "'[" + std::to_string(k) + "]");
    }
  }

  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double lr = cfg_.lr(params[i].group);
    auto& m = m_[i];
    auto& v = v_[i];
    for (std::size_t k = 0; k < m.size(); ++k) {
      const double g = params[i].grad[k];
      m[k] = cfg_.beta1 * m[k] + (1.0 - cfg_.beta1) * g;
      v[k] = cfg_.beta2 * v[k] + (1.0 - cfg_.beta2) * g * g;
      const double mhat = m[k] / bc1;
      const double vhat = v[k] / bc2;
      params[i].value[k] -= lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

}  // namespace wavenet
