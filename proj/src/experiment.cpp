#include "wavenet/experiment.hpp"

#include <cmath>
#include <numeric>

#include "wavenet/error.hpp"

namespace wavenet {

namespace {

void set_simplified(Preset& p, ModelKind kind) {
  p.synth = SyntheticConfig{};
  p.spec.kind = kind;
  p.spec.input_length = p.synth.samples();
  p.spec.sample_rate = p.synth.sample_rate;
  p.train.epochs = 700;
  p.train.batch_size = 0;
  switch (kind) {
    case ModelKind::wavenet:
      p.spec.filter_freqs = {8.0, 12.0};
      p.spec.hidden = {};
      break;
    case ModelKind::fcnet:
      p.spec.hidden = {10, 10};
      break;
    case ModelKind::convnet:
      break;
    case ModelKind::banknet:
      p.spec.filter_freqs = linspace(1.5, 25.0, 20);
      p.spec.hidden = {5};
      break;
  }
}

void set_gw(Preset& p, ModelKind kind) {
  p.spec.kind = kind;
  p.spec.input_length = kPatchSide;
  p.spec.sample_rate = kSliceSampleRate;
  p.train.epochs = 10;
  p.train.batch_size = 128;
  switch (kind) {
    case ModelKind::wavenet:
    case ModelKind::banknet:
      p.spec.filter_freqs = linspace(1.5, 25.0, 20);
      p.spec.hidden = {5};
      break;
    case ModelKind::fcnet:
      p.spec.hidden = {20, 20};
      break;
    case ModelKind::convnet:
      break;
  }
}

}  // namespace

Preset make_preset(const std::string& name, ModelKind kind) {
  Preset p;
  p.name = name;
  p.spec.filter_width = 10.0;
  p.spec.train_f = kind != ModelKind::banknet;
  p.spec.train_w = false;
  p.train.lr0 = 0.1;
  p.train.lr1 = 1e-4;
  if (name == "simplified")
    set_simplified(p, kind);
  else if (name == "gw")
    set_gw(p, kind);
  else
    throw ContractError("unknown preset '" + name + "' (expected simplified|gw)");
  return p;
}

void apply_overrides(Preset& p, const json& o) {
  if (!o.is_object()) throw FormatError("config: expected a JSON object");
  for (const auto& [key, value] : o.items()) {
    if (key == "epochs") p.train.epochs = value.get<int>();
    else if (key == "batch_size") p.train.batch_size = value.get<std::size_t>();
    else if (key == "lr0") p.train.lr0 = value.get<double>();
    else if (key == "lr1") p.train.lr1 = value.get<double>();
    else if (key == "shuffle") p.train.shuffle = value.get<bool>();
    else if (key == "eval_every") p.train.eval_every = value.get<int>();
    else if (key == "noise_std") p.synth.noise_std = value.get<double>();
    else if (key == "test_noise_std") p.synth.test_noise_std = value.get<double>();
    else if (key == "n_train") p.synth.n_train = value.get<int>();
    else if (key == "n_test") p.synth.n_test = value.get<int>();
    else if (key == "filter_freqs") p.spec.filter_freqs = value.get<std::vector<double>>();
    else if (key == "filter_width") p.spec.filter_width = value.get<double>();
    else if (key == "train_f") p.spec.train_f = value.get<bool>();
    else if (key == "train_w") p.spec.train_w = value.get<bool>();
    else if (key == "hidden") p.spec.hidden = value.get<std::vector<std::size_t>>();
    else if (key == "conv_channels") p.spec.conv_channels = value.get<std::vector<std::size_t>>();
    else if (key == "proxy_train_patches") p.proxy.train_wave = p.proxy.train_cloud = value.get<int>();
    else if (key == "proxy_test_patches") p.proxy.test_wave = p.proxy.test_cloud = value.get<int>();
    else if (key == "proxy_noise_std") p.proxy.patch.noise_std = value.get<double>();
    else throw FormatError("config: unknown key '" + key + "'");
  }
}

ProxyPatches generate_proxy_patches(const ProxySetup& setup, std::uint64_t seed) {
  ProxyPatches out;
  auto make = [&](Stream stream, int waves, int clouds, const std::string& split, std::vector<LabeledPatch>& dst) {
    Rng rng = make_rng(seed, stream);
    for (int i = 0; i < waves + clouds; ++i) {
      const bool wave = i < waves;
      LabeledPatch p = generate_proxy_patch(wave ? kWaveLabel : kCloudLabel, setup.patch, rng);
      const int idx = wave ? i : i - waves;
      char id[64];
      std::snprintf(id, sizeof id, "%s_%s_%03d", split.c_str(), wave ? "wave" : "cloud", idx);
      p.source_id = id;
      dst.push_back(std::move(p));
    }
  };
  make(Stream::data, setup.train_wave, setup.train_cloud, "train", out.train);
  make(Stream::test_data, setup.test_wave, setup.test_cloud, "test", out.test);
  return out;
}

Splits generate_data(const Preset& preset, std::uint64_t seed) {
  if (preset.name == "simplified") {
    SyntheticConfig cfg = preset.synth;
    cfg.seed = seed;
    const auto splits = make_dataset(cfg);
    return {to_dataset(splits.train, cfg.sample_rate), to_dataset(splits.test, cfg.sample_rate)};
  }
  const auto patches = generate_proxy_patches(preset.proxy, seed);
  Rng rng = make_rng(seed, Stream::slicing);
  Splits s;
  s.train = build_slice_dataset(patches.train, rng).data;
  s.test = build_slice_dataset(patches.test, rng).data;
  return s;
}

TrialResult run_trial(const Preset& preset, std::uint64_t seed, const Splits& data) {
  Rng init = make_rng(seed, Stream::init);
  TrialResult r{build_model(preset.spec, init), {}};
  TrainConfig cfg = preset.train;
  cfg.seed = seed;
  r.report = train(r.model, data.train, data.test, cfg);
  return r;
}

TrialSummary summarize(const std::vector<std::uint64_t>& seeds, const std::vector<double>& acc) {
  TrialSummary s;
  s.seeds = seeds;
  s.test_accuracy = acc;
  if (acc.empty()) return s;
  s.mean = std::accumulate(acc.begin(), acc.end(), 0.0) / static_cast<double>(acc.size());
  if (acc.size() > 1) {
    double ss = 0.0;
    for (double a : acc) ss += (a - s.mean) * (a - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(acc.size() - 1));
  }
  return s;
}

}  // namespace wavenet
