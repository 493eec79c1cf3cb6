#include "wavenet/cwt_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "wavenet/error.hpp"

namespace wavenet::kernels {

namespace {

using isize = std::ptrdiff_t;

void check_bank_input(const Tensor3& x, std::span<const SampledKernel> bank) {
  if (x.c != 1) throw ContractError("wavelet bank expects a single input channel");
  if (x.t == 0 || x.n == 0) throw DomainError("wavelet bank: empty input");
  if (bank.empty()) throw ContractError("wavelet bank: no filters");
}

void prepare_cache(const Tensor3& x, std::size_t filters, BankCache& cache) {
  if (cache.out.n != x.n || cache.out.c != filters || cache.out.t != x.t) {
    cache.c_re = Tensor3(x.n, filters, x.t);
    cache.c_im = Tensor3(x.n, filters, x.t);
    cache.out = Tensor3(x.n, filters, x.t);
  }
}

void prepare_grads(const Tensor3& x, std::span<const SampledKernel> bank, bool need_input_grad,
                   BankGrads& grads) {
  grads.re.resize(bank.size());
  grads.im.resize(bank.size());
  for (std::size_t j = 0; j < bank.size(); ++j) {
    grads.re[j].assign(bank[j].size(), 0.0);
    grads.im[j].assign(bank[j].size(), 0.0);
  }
  grads.x = need_input_grad ? Tensor3(x.n, 1, x.t) : Tensor3{};
}

void check_upstream(const BankCache& cache, const Tensor3& upstream) {
  if (!upstream.same_shape(cache.out)) throw ContractError("wavelet bank backward: upstream shape mismatch");
}

void forward_one(const Tensor3& x, std::span<const SampledKernel> bank, double eps, BankCache& cache,
                 std::size_t b, std::size_t j) {
  correlate_magnitude(x.row(b, 0), bank[j], eps, cache.c_re.row(b, j), cache.c_im.row(b, j),
                      cache.out.row(b, j));
}

void kernel_grad_one(const Tensor3& x, const SampledKernel& kernel, const BankCache& cache,
                     const Tensor3& upstream, std::size_t j, BankGrads& grads) {
  for (std::size_t b = 0; b < x.n; ++b) {
    accumulate_kernel_grad(x.row(b, 0), cache.c_re.row(b, j), cache.c_im.row(b, j),
                           cache.out.row(b, j), upstream.row(b, j), kernel.half, grads.re[j],
                           grads.im[j]);
  }
}

void input_grad_one(std::span<const SampledKernel> bank, const BankCache& cache,
                    const Tensor3& upstream, std::size_t b, BankGrads& grads) {
  for (std::size_t j = 0; j < bank.size(); ++j) {
    accumulate_input_grad(cache.c_re.row(b, j), cache.c_im.row(b, j), cache.out.row(b, j),
                          upstream.row(b, j), bank[j], grads.x.row(b, 0));
  }
}

}  // namespace

void correlate_magnitude(std::span<const double> x, const SampledKernel& kernel, double eps,
                         std::span<double> c_re, std::span<double> c_im, std::span<double> out) {
  const auto n = static_cast<isize>(x.size());
  const auto half = static_cast<isize>(kernel.half);
  const double* re = kernel.re.data() + half;
  const double* im = kernel.im.data() + half;
  for (isize tau = 0; tau < n; ++tau) {
    const isize lo = std::max(-half, -tau);
    const isize hi = std::min(half, n - 1 - tau);
    double sr = 0.0;
    double si = 0.0;
    for (isize k = lo; k <= hi; ++k) {
      sr += x[tau + k] * re[k];
      si += x[tau + k] * im[k];
    }
    c_re[tau] = sr;
    c_im[tau] = -si;
    out[tau] = std::sqrt(sr * sr + si * si + eps);
  }
}

void accumulate_kernel_grad(std::span<const double> x, std::span<const double> c_re,
                            std::span<const double> c_im, std::span<const double> out,
                            std::span<const double> upstream, std::size_t half_width,
                            std::span<double> grad_re, std::span<double> grad_im) {
  const auto n = static_cast<isize>(x.size());
  const auto half = static_cast<isize>(half_width);
  std::vector<double> a(x.size());
  std::vector<double> b(x.size());
  for (isize tau = 0; tau < n; ++tau) {
    const double g = upstream[tau] / out[tau];
    a[tau] = g * c_re[tau];
    b[tau] = g * c_im[tau];
  }
  for (isize k = -half; k <= half; ++k) {
    const isize lo = std::max<isize>(0, -k);
    const isize hi = std::min(n, n - k);
    double sr = 0.0;
    double si = 0.0;
    for (isize tau = lo; tau < hi; ++tau) {
      sr += a[tau] * x[tau + k];
      si += b[tau] * x[tau + k];
    }
    grad_re[k + half] += sr;
    grad_im[k + half] -= si;
  }
}

void accumulate_input_grad(std::span<const double> c_re, std::span<const double> c_im,
                           std::span<const double> out, std::span<const double> upstream,
                           const SampledKernel& kernel, std::span<double> grad_x) {
  const auto n = static_cast<isize>(out.size());
  const auto half = static_cast<isize>(kernel.half);
  const double* re = kernel.re.data() + half;
  const double* im = kernel.im.data() + half;
  std::vector<double> a(out.size());
  std::vector<double> b(out.size());
  for (isize tau = 0; tau < n; ++tau) {
    const double g = upstream[tau] / out[tau];
    a[tau] = g * c_re[tau];
    b[tau] = g * c_im[tau];
  }
  // x[u] meets kernel tap d = u - tau at lag tau.
  for (isize u = 0; u < n; ++u) {
    const isize lo = std::max<isize>(-half, u - (n - 1));
    const isize hi = std::min<isize>(half, u);
    double s = 0.0;
    for (isize d = lo; d <= hi; ++d) s += a[u - d] * re[d] - b[u - d] * im[d];
    grad_x[u] += s;
  }
}

void bank_forward_serial(const Tensor3& x, std::span<const SampledKernel> bank, double eps,
                         BankCache& cache) {
  check_bank_input(x, bank);
  prepare_cache(x, bank.size(), cache);
  for (std::size_t b = 0; b < x.n; ++b)
    for (std::size_t j = 0; j < bank.size(); ++j) forward_one(x, bank, eps, cache, b, j);
}

void bank_forward_parallel(const Tensor3& x, std::span<const SampledKernel> bank, double eps,
                           BankCache& cache) {
  check_bank_input(x, bank);
  prepare_cache(x, bank.size(), cache);
  const auto n = static_cast<long>(x.n);
  const auto f = static_cast<long>(bank.size());
#pragma omp parallel for collapse(2) schedule(static)
  for (long b = 0; b < n; ++b)
    for (long j = 0; j < f; ++j) forward_one(x, bank, eps, cache, b, j);
}

void bank_backward_serial(const Tensor3& x, std::span<const SampledKernel> bank,
                          const BankCache& cache, const Tensor3& upstream, bool need_input_grad,
                          BankGrads& grads) {
  check_upstream(cache, upstream);
  prepare_grads(x, bank, need_input_grad, grads);
  for (std::size_t j = 0; j < bank.size(); ++j) kernel_grad_one(x, bank[j], cache, upstream, j, grads);
  if (need_input_grad)
    for (std::size_t b = 0; b < x.n; ++b) input_grad_one(bank, cache, upstream, b, grads);
}

void bank_backward_parallel(const Tensor3& x, std::span<const SampledKernel> bank,
                            const BankCache& cache, const Tensor3& upstream, bool need_input_grad,
                            BankGrads& grads) {
  check_upstream(cache, upstream);
  prepare_grads(x, bank, need_input_grad, grads);
  const auto f = static_cast<long>(bank.size());
  // One thread owns each filter's accumulator; batch order inside stays serial.
#pragma omp parallel for schedule(dynamic)
  for (long j = 0; j < f; ++j) kernel_grad_one(x, bank[j], cache, upstream, j, grads);
  if (need_input_grad) {
    const auto n = static_cast<long>(x.n);
#pragma omp parallel for schedule(static)
    for (long b = 0; b < n; ++b) input_grad_one(bank, cache, upstream, b, grads);
  }
}

}  // namespace wavenet::kernels
