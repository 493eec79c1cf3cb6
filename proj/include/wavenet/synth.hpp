#pragma once

#include <cstdint>
#include <vector>

#include "wavenet/dataset.hpp"
#include "wavenet/patch.hpp"
#include "wavenet/random.hpp"

namespace wavenet {

inline constexpr int kClassA = 0;
inline constexpr int kClassB = 1;

/// Two-class benchmark: a background sinusoid plus a Gaussian-windowed event
/// whose frequency identifies the class, plus white noise.
struct SyntheticConfig {
  double sample_rate = 256.0;
  double duration = 0.80;
  double background_freq = 9.0;
  double freq_a = 5.0;
  double freq_b = 15.0;
  double sigma_env = 0.8;
  double noise_std = 0.5;       // training split
  double test_noise_std = 0.5;  // test split
  int n_train = 240;
  int n_test = 60;
  std::uint64_t seed = 0;

  /// round(duration * sample_rate), 205 at the defaults.
  std::size_t samples() const;
  void validate() const;
};

/// Random quantities drawn for one signal.
struct SignalDraws {
  double mu = 0.0;
  double phi0 = 0.0;
  double phi1 = 0.0;
};

struct LabeledSignal {
  std::vector<double> values;
  int label = kClassA;
  SignalDraws provenance;
};

/// 1 / (sigma sqrt(2 pi)) exp(-(t - mu)^2 / (2 sigma^2))
double event_envelope(double t, double mu, double sigma);

/// Noise-free signal for given draws; `event_gain` scales the event term
/// (0 leaves only the background).
std::vector<double> clean_signal(int label, const SyntheticConfig& cfg, const SignalDraws& draws,
                                 double event_gain = 1.0);

/// Draws mu ~ U[0, duration], phi0, phi1 ~ U[0, 2 pi], then i.i.d. N(0, noise_std) noise.
LabeledSignal generate_signal(int label, const SyntheticConfig& cfg, Rng& rng, double noise_std);
LabeledSignal generate_signal(int label, const SyntheticConfig& cfg, Rng& rng);

struct SyntheticSplits {
  std::vector<LabeledSignal> train;
  std::vector<LabeledSignal> test;
};

/// Balanced splits with alternating labels (A, B, A, B, ...), deterministic in cfg.seed.
SyntheticSplits make_dataset(const SyntheticConfig& cfg);

Dataset to_dataset(const std::vector<LabeledSignal>& signals, double sample_rate);

// ---- 2D stand-in for labeled satellite patches

struct ProxyConfig {
  std::size_t size = kPatchSide;
  double noise_std = 0.35;
  double min_wavelength = 4.0;   // px
  double max_wavelength = 40.0;  // px
  double max_ramp = 0.5;         // background slope amplitude across the patch
  int min_smooth_radius = 2;     // cloud moving-average radius, px
  int max_smooth_radius = 6;
};

struct WaveDraws {
  double wavelength = 16.0;  // px
  double orientation = 0.0;  // radians; 0 varies along columns of a row
  double phase = 0.0;
  double ramp_x = 0.0;
  double ramp_y = 0.0;
};

/// Plane wave + linear background + noise, rescaled to [0, 1].
LabeledPatch render_wave_patch(const ProxyConfig& cfg, const WaveDraws& draws, Rng& rng);

/// Wave (plane wave) or cloud (moving-average smoothed random field) patch in [0, 1].
LabeledPatch generate_proxy_patch(int label, const ProxyConfig& cfg, Rng& rng);

}  // namespace wavenet
