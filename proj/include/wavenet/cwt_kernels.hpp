#pragma once

// Hot loops of the wavelet transform layer.
//
// Every batched kernel comes in two flavours with identical arithmetic: a
// serial reference and an OpenMP version. The parallel versions only split
// work across independent outputs and keep every reduction in the serial
// order, so both produce bitwise-identical results.

#include <span>
#include <vector>

#include "wavenet/morlet.hpp"
#include "wavenet/tensor.hpp"

namespace wavenet::kernels {

/// c_re[tau] = sum_k x[tau+k] re_k, c_im[tau] = -sum_k x[tau+k] im_k (conjugated
/// kernel), out = sqrt(c_re^2 + c_im^2 + eps). Zero padding outside the signal.
void correlate_magnitude(std::span<const double> x, const SampledKernel& kernel, double eps,
                         std::span<double> c_re, std::span<double> c_im, std::span<double> out);

/// Adds dL/d(re_k) and dL/d(im_k) for one signal given upstream dL/d(out).
void accumulate_kernel_grad(std::span<const double> x, std::span<const double> c_re,
                            std::span<const double> c_im, std::span<const double> out,
                            std::span<const double> upstream, std::size_t half,
                            std::span<double> grad_re, std::span<double> grad_im);

/// Adds dL/dx for one signal given upstream dL/d(out).
void accumulate_input_grad(std::span<const double> c_re, std::span<const double> c_im,
                           std::span<const double> out, std::span<const double> upstream,
                           const SampledKernel& kernel, std::span<double> grad_x);

struct BankCache {
  Tensor3 c_re;
  Tensor3 c_im;
  Tensor3 out;
};

/// Gradients w.r.t. the sampled taps of each filter, summed over the batch,
/// plus the optional input gradient.
struct BankGrads {
  std::vector<std::vector<double>> re;
  std::vector<std::vector<double>> im;
  Tensor3 x;
};

/// x has shape (n, 1, T); the cache receives (n, F, T) tensors.
void bank_forward_serial(const Tensor3& x, std::span<const SampledKernel> bank, double eps,
                         BankCache& cache);
void bank_forward_parallel(const Tensor3& x, std::span<const SampledKernel> bank, double eps,
                           BankCache& cache);

void bank_backward_serial(const Tensor3& x, std::span<const SampledKernel> bank,
                          const BankCache& cache, const Tensor3& upstream, bool need_input_grad,
                          BankGrads& grads);
void bank_backward_parallel(const Tensor3& x, std::span<const SampledKernel> bank,
                            const BankCache& cache, const Tensor3& upstream, bool need_input_grad,
                            BankGrads& grads);

}  // namespace wavenet::kernels
