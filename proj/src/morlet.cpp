#include "wavenet/morlet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wavenet/cwt_kernels.hpp"
#include "wavenet/error.hpp"

namespace wavenet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_rate(double sample_rate, double trunc_sigmas) {
  if (!(sample_rate > 0.0)) throw DomainError("sample_rate must be positive");
  if (!(trunc_sigmas > 0.0)) throw DomainError("trunc_sigmas must be positive");
}

// (s_t (2 pi)^(-1/2))^(-1/2) = (2 pi)^(1/4) / sqrt(s_t)
double amplitude(double s_t) { return std::pow(kTwoPi, 0.25) / std::sqrt(s_t); }

}  // namespace

DerivedWidths derived_widths(const MorletParams& p) {
  if (!(p.f > 0.0) || !(p.w > 0.0)) throw DomainError("Morlet f and w must be positive");
  const double s_f = p.f / p.w;
  return {s_f, 1.0 / (kTwoPi * s_f)};
}

double SampledKernel::energy() const {
  double e = 0.0;
  for (std::size_t k = 0; k < size(); ++k) e += re[k] * re[k] + im[k] * im[k];
  return e * dt;
}

std::size_t kernel_half_width(const MorletParams& p, double sample_rate, double trunc_sigmas,
                              std::optional<std::size_t> max_half) {
  require_rate(sample_rate, trunc_sigmas);
  const auto widths = derived_widths(p);
  auto half = static_cast<std::size_t>(std::ceil(trunc_sigmas * widths.s_t * sample_rate));
  if (max_half) half = std::min(half, *max_half);
  return half;
}

SampledKernel sample_kernel(const MorletParams& p, double sample_rate, double trunc_sigmas,
                            std::optional<std::size_t> max_half) {
  const std::size_t half = kernel_half_width(p, sample_rate, trunc_sigmas, max_half);
  const double s_t = derived_widths(p).s_t;
  const double a = amplitude(s_t);

  SampledKernel k;
  k.dt = 1.0 / sample_rate;
  k.half = half;
  const std::size_t len = 2 * half + 1;
  k.t.resize(len);
  k.re.resize(len);
  k.im.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    const double t = (static_cast<double>(i) - static_cast<double>(half)) * k.dt;
    const double env = a * std::exp(-t * t / (2.0 * s_t * s_t));
    const double phase = kTwoPi * p.f * t;
    k.t[i] = t;
    k.re[i] = env * std::cos(phase);
    k.im[i] = env * std::sin(phase);
  }
  // Pin exact symmetry; cos/sin of +-phase can differ in the last ulp.
  for (std::size_t i = 0; i < half; ++i) {
    const std::size_t m = len - 1 - i;
    k.re[m] = k.re[i];
    k.im[m] = -k.im[i];
  }
  k.im[half] = 0.0;
  return k;
}

KernelPartials kernel_partials(const MorletParams& p, double sample_rate, double trunc_sigmas,
                               std::optional<std::size_t> max_half) {
  const std::size_t half = kernel_half_width(p, sample_rate, trunc_sigmas, max_half);
  const double s_t = derived_widths(p).s_t;
  const double a = amplitude(s_t);
  const double dt = 1.0 / sample_rate;

  // psi = A(s_t) G(t, s_t) e^{i 2 pi f t}. With u = t / s_t,
  //   d(A G)/d(s_t) * s_t = A G (u^2 - 1/2),
  //   d(s_t)/df = -s_t / f,  d(s_t)/dw = s_t / w.
  const std::size_t len = 2 * half + 1;
  KernelPartials out;
  out.re_df.resize(len);
  out.im_df.resize(len);
  out.re_dw.resize(len);
  out.im_dw.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    const double t = (static_cast<double>(i) - static_cast<double>(half)) * dt;
    const double u = t / s_t;
    const double ag = a * std::exp(-0.5 * u * u);
    const double scale_term = ag * (u * u - 0.5);
    const double phase = kTwoPi * p.f * t;
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    out.re_df[i] = -scale_term / p.f * c - ag * kTwoPi * t * s;
    out.im_df[i] = -scale_term / p.f * s + ag * kTwoPi * t * c;
    out.re_dw[i] = scale_term / p.w * c;
    out.im_dw[i] = scale_term / p.w * s;
  }
  return out;
}

std::vector<double> cwt_magnitude(std::span<const double> signal, const SampledKernel& kernel,
                                  double eps_mag) {
  if (signal.empty()) throw DomainError("cwt_magnitude: empty signal");
  std::vector<double> c_re(signal.size());
  std::vector<double> c_im(signal.size());
  std::vector<double> out(signal.size());
  kernels::correlate_magnitude(signal, kernel, eps_mag, c_re, c_im, out);
  return out;
}

void clip_wavelet_params(std::span<MorletParams> filters) {
  for (auto& p : filters) {
    p.f = std::clamp(p.f, kFreqMin, kFreqMax);
    p.w = std::clamp(p.w, kWidthMin, kWidthMax);
  }
}

}  // namespace wavenet
