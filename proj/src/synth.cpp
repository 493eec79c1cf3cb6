#include "wavenet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wavenet/error.hpp"

namespace wavenet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void rescale_unit(std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double a = *lo;
  const double span = *hi - *lo;
  for (auto& x : v) x = span > 0.0 ? (x - a) / span : 0.0;
}

}  // namespace

std::size_t SyntheticConfig::samples() const {
  return static_cast<std::size_t>(std::lround(duration * sample_rate));
}

void SyntheticConfig::validate() const {
  if (!(sample_rate > 0.0) || !(duration > 0.0) || samples() == 0)
    throw DomainError("synthetic config: empty signal");
  if (!(sigma_env > 0.0)) throw DomainError("synthetic config: sigma_env must be positive");
  if (noise_std < 0.0 || test_noise_std < 0.0) throw DomainError("synthetic config: negative noise_std");
  if (n_train <= 0 || n_test <= 0 || n_train % 2 != 0 || n_test % 2 != 0)
    throw DomainError("synthetic config: split sizes must be positive and even");
}

double event_envelope(double t, double mu, double sigma) {
  const double z = (t - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(kTwoPi));
}

std::vector<double> clean_signal(int label, const SyntheticConfig& cfg, const SignalDraws& d,
                                 double event_gain) {
  if (label != kClassA && label != kClassB) throw ContractError("synthetic signal: label must be 0 or 1");
  const double f_event = label == kClassA ? cfg.freq_a : cfg.freq_b;
  std::vector<double> y(cfg.samples());
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double t = static_cast<double>(k) / cfg.sample_rate;
    y[k] = std::sin(kTwoPi * cfg.background_freq * t + d.phi0) +
           event_gain * event_envelope(t, d.mu, cfg.sigma_env) * std::sin(kTwoPi * f_event * t + d.phi1);
  }
  return y;
}

LabeledSignal generate_signal(int label, const SyntheticConfig& cfg, Rng& rng, double noise_std) {
  std::uniform_real_distribution<double> shift(0.0, cfg.duration);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  LabeledSignal s;
  s.label = label;
  s.provenance.mu = shift(rng);
  s.provenance.phi0 = phase(rng);
  s.provenance.phi1 = phase(rng);
  s.values = clean_signal(label, cfg, s.provenance);
  if (noise_std > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_std);
    for (auto& v : s.values) v += noise(rng);
  }
  return s;
}

LabeledSignal generate_signal(int label, const SyntheticConfig& cfg, Rng& rng) {
  return generate_signal(label, cfg, rng, cfg.noise_std);
}

SyntheticSplits make_dataset(const SyntheticConfig& cfg) {
  cfg.validate();
  Rng rng = make_rng(cfg.seed, Stream::data);
  SyntheticSplits out;
  out.train.reserve(cfg.n_train);
  out.test.reserve(cfg.n_test);
  for (int i = 0; i < cfg.n_train; ++i) out.train.push_back(generate_signal(i % 2, cfg, rng, cfg.noise_std));
  for (int i = 0; i < cfg.n_test; ++i) out.test.push_back(generate_signal(i % 2, cfg, rng, cfg.test_noise_std));
  return out;
}

Dataset to_dataset(const std::vector<LabeledSignal>& signals, double sample_rate) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  rows.reserve(signals.size());
  for (const auto& s : signals) {
    rows.push_back(s.values);
    labels.push_back(s.label);
  }
  return make_dataset_from_rows(rows, std::move(labels), sample_rate);
}

LabeledPatch render_wave_patch(const ProxyConfig& cfg, const WaveDraws& d, Rng& rng) {
  if (cfg.size < 8) throw DomainError("proxy patch: size must be at least 8");
  const std::size_t n = cfg.size;
  const double kx = std::cos(d.orientation) / d.wavelength;
  const double ky = std::sin(d.orientation) / d.wavelength;
  std::normal_distribution<double> noise(0.0, cfg.noise_std > 0.0 ? cfg.noise_std : 1.0);
  LabeledPatch p;
  p.side = n;
  p.label = kWaveLabel;
  p.pixels.resize(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double x = static_cast<double>(c);
      const double y = static_cast<double>(r);
      double v = std::sin(kTwoPi * (kx * x + ky * y) + d.phase);
      v += d.ramp_x * x / static_cast<double>(n) + d.ramp_y * y / static_cast<double>(n);
      if (cfg.noise_std > 0.0) v += noise(rng);
      p.pixels[r * n + c] = v;
    }
  }
  rescale_unit(p.pixels);
  return p;
}

LabeledPatch generate_proxy_patch(int label, const ProxyConfig& cfg, Rng& rng) {
  if (cfg.size < 8) throw DomainError("proxy patch: size must be at least 8");
  if (label == kWaveLabel) {
    std::uniform_real_distribution<double> wavelength(cfg.min_wavelength, cfg.max_wavelength);
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    std::uniform_real_distribution<double> ramp(-cfg.max_ramp, cfg.max_ramp);
    WaveDraws d;
    d.wavelength = wavelength(rng);
    d.orientation = angle(rng);
    d.phase = phase(rng);
    d.ramp_x = ramp(rng);
    d.ramp_y = ramp(rng);
    return render_wave_patch(cfg, d, rng);
  }
  if (label != kCloudLabel) throw ContractError("proxy patch: label must be wave (1) or cloud (0)");

  const std::size_t n = cfg.size;
  std::normal_distribution<double> white(0.0, 1.0);
  std::uniform_int_distribution<int> radius_dist(cfg.min_smooth_radius, cfg.max_smooth_radius);
  const int radius = radius_dist(rng);
  std::vector<double> field(n * n);
  for (auto& v : field) v = white(rng);

  // Separable moving average with edge clamping.
  const auto ni = static_cast<int>(n);
  auto blur = [&](const std::vector<double>& in, bool along_rows) {
    std::vector<double> out(in.size());
    for (int r = 0; r < ni; ++r) {
      for (int c = 0; c < ni; ++c) {
        double s = 0.0;
        for (int o = -radius; o <= radius; ++o) {
          const int rr = along_rows ? r : std::clamp(r + o, 0, ni - 1);
          const int cc = along_rows ? std::clamp(c + o, 0, ni - 1) : c;
          s += in[rr * n + cc];
        }
        out[r * n + c] = s / (2.0 * radius + 1.0);
      }
    }
    return out;
  };
  field = blur(blur(field, true), false);

  double var = 0.0;
  for (double v : field) var += v * v;
  const double scale = var > 0.0 ? 1.0 / std::sqrt(var / static_cast<double>(field.size())) : 1.0;
  std::normal_distribution<double> noise(0.0, cfg.noise_std > 0.0 ? cfg.noise_std : 1.0);
  for (auto& v : field) {
    v *= scale;
    if (cfg.noise_std > 0.0) v += noise(rng);
  }

  LabeledPatch p;
  p.side = n;
  p.label = kCloudLabel;
  p.pixels = std::move(field);
  rescale_unit(p.pixels);
  return p;
}

}  // namespace wavenet
