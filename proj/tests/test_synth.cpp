#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "wavenet/error.hpp"
#include "wavenet/synth.hpp"

using namespace wavenet;

TEST_CASE("synthetic signal basics") {
  SyntheticConfig cfg;
  CHECK(cfg.samples() == 205);
  Rng rng = make_rng(0, Stream::data);
  CHECK(generate_signal(kClassA, cfg, rng).values.size() == 205);
  CHECK(event_envelope(0.3, 0.3, 0.8) == doctest::Approx(0.498677).epsilon(1e-6));
}

TEST_CASE("zero event gain leaves the background only") {
  SyntheticConfig cfg;
  const SignalDraws d{0.4, 1.1, 2.2};
  for (int label : {kClassA, kClassB}) {
    const auto y = clean_signal(label, cfg, d, 0.0);
    for (std::size_t k = 0; k < y.size(); ++k) {
      const double t = k / 256.0;
      CHECK(y[k] == doctest::Approx(std::sin(2 * std::numbers::pi * 9.0 * t + 1.1)).epsilon(1e-14));
    }
  }
}

TEST_CASE("signal minus its noise matches the closed form") {
  SyntheticConfig cfg;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    for (int label : {kClassA, kClassB}) {
      const auto s = generate_signal(label, cfg, rng, 0.0);
      const double fe = label == kClassA ? 5.0 : 15.0;
      const auto& d = s.provenance;
      CHECK(d.mu >= 0.0);
      CHECK(d.mu <= 0.8);
      for (std::size_t k = 0; k < s.values.size(); ++k) {
        const double t = k / 256.0;
        const double env = std::exp(-0.5 * (t - d.mu) * (t - d.mu) / 0.64) / (0.8 * std::sqrt(oracle::kTwoPi));
        const double ref = std::sin(oracle::kTwoPi * 9.0 * t + d.phi0) + env * std::sin(oracle::kTwoPi * fe * t + d.phi1);
        CHECK(std::abs(s.values[k] - ref) < 1e-12);
      }
    }
  }
}

TEST_CASE("dataset splits are balanced and seeded") {
  SyntheticConfig cfg;
  cfg.seed = 3;
  const auto a = make_dataset(cfg);
  CHECK(a.train.size() == 240);
  CHECK(a.test.size() == 60);
  int ca = 0, ta = 0;
  for (const auto& s : a.train) ca += s.label == kClassA;
  for (const auto& s : a.test) ta += s.label == kClassA;
  CHECK(ca == 120);
  CHECK(ta == 30);

  const auto b = make_dataset(cfg);
  for (std::size_t i = 0; i < a.train.size(); ++i) CHECK(a.train[i].values == b.train[i].values);
  cfg.seed = 4;
  const auto c = make_dataset(cfg);
  CHECK(a.train[0].values != c.train[0].values);

  const Dataset ds = to_dataset(a.train, 256.0);
  CHECK(ds.x.n == 240);
  CHECK(ds.x.c == 1);
  CHECK(ds.x.t == 205);
  CHECK(ds.y[1] == kClassB);

  cfg.n_train = 7;
  CHECK_THROWS_AS(make_dataset(cfg), DomainError);
}

TEST_CASE("noise level matches the configured std") {
  SyntheticConfig cfg;
  Rng a(11);
  const auto noisy = generate_signal(kClassB, cfg, a, 0.5);
  const auto clean = clean_signal(kClassB, cfg, noisy.provenance);
  double ss = 0.0;
  for (std::size_t k = 0; k < clean.size(); ++k) ss += (noisy.values[k] - clean[k]) * (noisy.values[k] - clean[k]);
  CHECK(std::sqrt(ss / clean.size()) == doctest::Approx(0.5).epsilon(0.15));
}

TEST_CASE("proxy patches") {
  ProxyConfig cfg;
  for (int label : {kCloudLabel, kWaveLabel}) {
    Rng rng(5);
    const auto p = generate_proxy_patch(label, cfg, rng);
    CHECK(p.side == 128);
    CHECK(p.pixels.size() == 128u * 128u);
    CHECK(p.label == label);
    double lo = 1.0, hi = 0.0;
    for (double v : p.pixels) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(lo == 0.0);
    CHECK(hi == 1.0);
    Rng again(5);
    CHECK(generate_proxy_patch(label, cfg, again).pixels == p.pixels);
  }
  Rng rng(1);
  CHECK_THROWS_AS(generate_proxy_patch(2, cfg, rng), ContractError);
}

TEST_CASE("clean wave patch has its spectral peak at the wavelength") {
  ProxyConfig cfg;
  cfg.noise_std = 0.0;
  for (double wl : {4.0, 8.0, 16.0, 32.0}) {
    Rng rng(0);
    const auto p = render_wave_patch(cfg, {wl, 0.0, 0.3, 0.0, 0.0}, rng);
    std::vector<double> row(p.pixels.begin() + 64 * 128, p.pixels.begin() + 65 * 128);
    double mean = 0.0;
    for (double v : row) mean += v / 128.0;
    for (double& v : row) v -= mean;
    std::size_t best = 1;
    for (std::size_t k = 1; k <= 64; ++k)
      if (oracle::dft_magnitude(row, k) > oracle::dft_magnitude(row, best)) best = k;
    CHECK(best == static_cast<std::size_t>(128.0 / wl));
  }
}
