#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace wavenet {

// Admissible region for trainable wavelet parameters.
inline constexpr double kFreqMin = 0.5;
inline constexpr double kFreqMax = 30.0;
inline constexpr double kWidthMin = 4.0;
inline constexpr double kWidthMax = 15.0;

// Added under the square root of the magnitude so |c| stays differentiable at 0.
inline constexpr double kMagnitudeEps = 1e-12;
inline constexpr double kDefaultTruncSigmas = 4.0;

/// One complex Morlet filter: center frequency `f` (Hz) and width `w` (cycles).
struct MorletParams {
  double f = 1.0;
  double w = 10.0;
  bool f_trainable = true;
  bool w_trainable = false;

  bool in_clip_box() const {
    return f >= kFreqMin && f <= kFreqMax && w >= kWidthMin && w <= kWidthMax;
  }
};

/// Spectral and temporal standard deviations of a Morlet filter.
struct DerivedWidths {
  double s_f;  // Hz
  double s_t;  // seconds
};

/// Throws DomainError unless f > 0 and w > 0.
DerivedWidths derived_widths(const MorletParams& p);

/// Discrete kernel on the centered grid t_k = k * dt, k in [-half, half].
struct SampledKernel {
  double dt = 0.0;
  std::size_t half = 0;
  std::vector<double> t;
  std::vector<double> re;
  std::vector<double> im;

  std::size_t size() const { return t.size(); }
  double energy() const;
};

/// d(re)/df, d(im)/df, d(re)/dw, d(im)/dw on the grid of the matching SampledKernel.
struct KernelPartials {
  std::vector<double> re_df;
  std::vector<double> im_df;
  std::vector<double> re_dw;
  std::vector<double> im_dw;
};

/// Grid half-width ceil(trunc_sigmas * s_t * sample_rate), optionally capped.
///
/// The cap lets a layer drop taps that can never overlap a signal of known
/// length; the surviving samples are unchanged.
std::size_t kernel_half_width(const MorletParams& p, double sample_rate, double trunc_sigmas,
                              std::optional<std::size_t> max_half = std::nullopt);

/// Samples (s_t (2 pi)^(-1/2))^(-1/2) exp(i 2 pi f t) exp(-t^2 / (2 s_t^2)).
SampledKernel sample_kernel(const MorletParams& p, double sample_rate,
                            double trunc_sigmas = kDefaultTruncSigmas,
                            std::optional<std::size_t> max_half = std::nullopt);

/// Analytic partials of the sampled kernel, with s_t = w / (2 pi f) substituted
/// and the grid held fixed.
KernelPartials kernel_partials(const MorletParams& p, double sample_rate,
                               double trunc_sigmas = kDefaultTruncSigmas,
                               std::optional<std::size_t> max_half = std::nullopt);

/// |W x|(tau) for a single signal: zero-padded "same" cross-correlation with
/// the conjugated kernel, magnitude smoothed as sqrt(re^2 + im^2 + eps_mag).
std::vector<double> cwt_magnitude(std::span<const double> signal, const SampledKernel& kernel,
                                  double eps_mag = kMagnitudeEps);

void clip_wavelet_params(std::span<MorletParams> filters);

}  // namespace wavenet
