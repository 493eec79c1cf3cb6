#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wavenet/imagery.hpp"
#include "wavenet/io.hpp"
#include "wavenet/model.hpp"
#include "wavenet/synth.hpp"
#include "wavenet/train.hpp"

namespace wavenet {

struct ProxySetup {
  int train_wave = 20;
  int train_cloud = 20;
  int test_wave = 5;
  int test_cloud = 5;
  ProxyConfig patch;
};

/// Bundled hyperparameters. "simplified": the two-class synthetic benchmark;
/// "gw": the patch-slice pipeline (run on generated proxy patches).
struct Preset {
  std::string name;
  ModelSpec spec;
  TrainConfig train;
  SyntheticConfig synth;
  ProxySetup proxy;
};

Preset make_preset(const std::string& name, ModelKind kind);

/// Applies a JSON object of overrides (epochs, batch_size, lr0, lr1, shuffle,
/// eval_every, noise_std, test_noise_std, n_train, n_test, filter_freqs,
/// filter_width, train_f, train_w, hidden, conv_channels). Unknown keys throw.
void apply_overrides(Preset& preset, const json& overrides);

struct Splits {
  Dataset train;
  Dataset test;
};

/// Proxy patches for one seed: train patches from the data stream, held-out
/// test patches from the test-data stream.
struct ProxyPatches {
  std::vector<LabeledPatch> train;
  std::vector<LabeledPatch> test;
};
ProxyPatches generate_proxy_patches(const ProxySetup& setup, std::uint64_t seed);

/// Fresh data for one seed (synthetic signals or sliced proxy patches).
Splits generate_data(const Preset& preset, std::uint64_t seed);

struct TrialResult {
  Model model;
  TrainReport report;
};

/// Builds the preset model from `seed` and trains it on `data`.
TrialResult run_trial(const Preset& preset, std::uint64_t seed, const Splits& data);

struct TrialSummary {
  std::vector<std::uint64_t> seeds;
  std::vector<double> test_accuracy;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1)
};

TrialSummary summarize(const std::vector<std::uint64_t>& seeds, const std::vector<double>& accuracies);

}  // namespace wavenet
