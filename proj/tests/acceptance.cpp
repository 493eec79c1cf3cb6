// Acceptance runner. Usage: acceptance [criterion ...] (default: all).
// Prints one PASS/FAIL line per criterion; exit status 1 if any failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "wavenet/confmap.hpp"
#include "wavenet/experiment.hpp"
#include "wavenet/gradcheck.hpp"
#include "wavenet/imagery.hpp"
#include "wavenet/train.hpp"

using namespace wavenet;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---- 1: gradients of every model kind

Dataset random_batch(std::size_t n, std::size_t len, double rate, std::size_t classes, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> rows(n, std::vector<double>(len));
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : rows[i]) v = g(rng);
    y[i] = static_cast<int>(i % classes);
  }
  return make_dataset_from_rows(rows, y, rate);
}

// With `resolvable`, every filter completes at least one period inside the
// signal; otherwise f spans the box interior regardless of the window.
ModelSpec random_spec(ModelKind kind, Rng& rng, bool resolvable) {
  std::uniform_int_distribution<std::size_t> len(16, 64), nf(1, 4), hid(0, 2), width(2, 6);
  std::uniform_real_distribution<double> w(5.0, 14.0);
  const double rates[] = {64.0, 128.0, 256.0};
  ModelSpec s;
  s.kind = kind;
  s.input_length = len(rng);
  s.sample_rate = rates[std::uniform_int_distribution<int>(0, 2)(rng)];
  const double f_lo = resolvable ? std::max(1.0, s.sample_rate / static_cast<double>(s.input_length)) : 1.0;
  std::uniform_real_distribution<double> f(f_lo, 28.0);
  s.num_classes = 2;
  const std::size_t layers = hid(rng);
  for (std::size_t i = 0; i < layers; ++i) s.hidden.push_back(width(rng));
  if (kind == ModelKind::wavenet || kind == ModelKind::banknet) {
    const std::size_t count = nf(rng);
    for (std::size_t i = 0; i < count; ++i) s.filter_freqs.push_back(f(rng));
    s.filter_width = w(rng);
    s.train_f = kind == ModelKind::wavenet;
    s.train_w = kind == ModelKind::wavenet;
  }
  if (kind == ModelKind::banknet && s.hidden.empty()) s.hidden = {5};
  return s;
}

struct SweepResult {
  double worst = 0.0;
  std::string where;
  std::size_t w_checks = 0;
};

SweepResult gradient_sweep(bool resolvable) {
  Rng rng = make_rng(2024, Stream::gradcheck);
  SweepResult out;
  for (ModelKind kind : {ModelKind::wavenet, ModelKind::fcnet, ModelKind::convnet, ModelKind::banknet}) {
    for (int trial = 0; trial < 20; ++trial) {
      const ModelSpec spec = random_spec(kind, rng, resolvable);
      Model m = build_model(spec, rng);
      const Dataset batch = random_batch(6, spec.input_length, spec.sample_rate, 2, rng);
      if (kind == ModelKind::banknet) {
        std::vector<MorletParams> filters = m.wavelet()->filters;
        const auto feats = bank_preprocess(batch.x, nullptr, filters, spec.sample_rate);
        m.standardizer()->mean = feats.mean;
        m.standardizer()->std = feats.std;
      }
      const auto r = gradcheck(m, batch, 1e-5);
      for (const auto& pc : r.params) out.w_checks += pc.name.ends_with(".w");
      if (r.max_rel_error > out.worst) {
        out.worst = r.max_rel_error;
        out.where = to_string(kind) + " trial " + std::to_string(trial) + " " + r.worst_param;
      }
    }
  }
  return out;
}

void criterion_gradients() {
  const auto t0 = Clock::now();
  const SweepResult r = gradient_sweep(true);
  const double secs = seconds_since(t0);
  // Reported only: filters longer than the window have near-zero w gradients
  // where central-difference roundoff dominates the relative error.
  const SweepResult unresolved = gradient_sweep(false);
  verdict(1, r.worst < 1e-4 && secs < 120.0 && r.w_checks > 0,
          "80 configs, max rel error " + fmt("%.3g", r.worst) + " (" + r.where + "), " +
              std::to_string(r.w_checks) + " w checks, " + fmt("%.1f", secs) +
              " s; without the one-period rule: " + fmt("%.3g", unresolved.worst) + " (" + unresolved.where + ")");
}

// ---- 2: layer forward vs naive inner product

void criterion_forward() {
  Rng rng(77);
  std::uniform_int_distribution<std::size_t> len(1, 256);
  std::uniform_real_distribution<double> f(kFreqMin, kFreqMax), w(kWidthMin, kWidthMax);
  const double rates[] = {64.0, 128.0, 256.0};
  double worst = 0.0;
  for (int pair = 0; pair < 100; ++pair) {
    const std::size_t T = len(rng);
    const double rate = rates[pair % 3];
    const double fi = f(rng), wi = w(rng);
    const auto x = oracle::random_vector(T, rng);
    WaveletLayer layer({{fi, wi}}, rate);
    Tensor3 in(1, 1, T);
    in.data = x;
    const Tensor3 y = layer.forward(in, Mode::eval);
    const long half = std::min<long>(oracle::half_width(fi, wi, rate), static_cast<long>(T) - 1);
    const auto ref = oracle::cwt_magnitude(x, fi, wi, rate, half, kMagnitudeEps);
    for (std::size_t i = 0; i < T; ++i) worst = std::max(worst, std::abs(y.data[i] - ref[i]));
  }
  verdict(2, worst < 1e-10, "100 pairs, max abs diff " + fmt("%.3g", worst));
}

// ---- 3: kernel energy

void criterion_energy() {
  double worst = 0.0;
  for (double f : {2.0, 5.0, 15.0, 25.0})
    for (double w : {4.0, 10.0, 15.0}) {
      const auto k = sample_kernel({f, w}, 256.0, 4.0);
      worst = std::max(worst, std::abs(k.energy() - std::numbers::pi * std::sqrt(2.0)));
    }
  verdict(3, worst < 1e-3, "12 kernels, max |E - pi sqrt 2| " + fmt("%.3g", worst));
}

// ---- 4, 5, 6: simplified experiment

bool near(double a, double b) { return std::abs(a - b) <= 0.5; }

void criterion_simplified() {
  std::vector<double> wave_acc, fc_acc;
  int good = 0, matched = 0;
  double slowest = 0.0;
  bool in_box = true;
  std::ostringstream detail4;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Preset p = make_preset("simplified", ModelKind::wavenet);
    p.train.eval_every = 50;
    const Splits data = generate_data(p, seed);
    const auto t0 = Clock::now();
    const auto trial = run_trial(p, seed, data);
    slowest = std::max(slowest, seconds_since(t0));
    const auto& r = trial.report;
    const double acc = r.final_test.accuracy;
    wave_acc.push_back(acc);
    for (std::size_t e = 0; e < r.f_trajectory.size(); ++e)
      for (std::size_t i = 0; i < r.f_trajectory[e].size(); ++i)
        in_box = in_box && MorletParams{r.f_trajectory[e][i], r.w_trajectory[e][i]}.in_clip_box();
    const auto& f = r.f_trajectory.back();
    if (acc >= 0.95) {
      ++good;
      if ((near(f[0], 5) && near(f[1], 15)) || (near(f[0], 15) && near(f[1], 5))) ++matched;
    }
    std::printf("  seed %llu: wavenet acc %.4f f = (%.3f, %.3f) %s\n", static_cast<unsigned long long>(seed), acc,
                f[0], f[1], r.status.c_str());

    Preset q = make_preset("simplified", ModelKind::fcnet);
    q.train.eval_every = 700;
    fc_acc.push_back(run_trial(q, seed, data).report.final_test.accuracy);
    std::printf("  seed %llu: fcnet acc %.4f\n", static_cast<unsigned long long>(seed), fc_acc.back());
    std::fflush(stdout);
  }
  detail4 << good << "/10 seeds acc >= 0.95, " << matched << " of them with f near {5, 15}, slowest seed "
          << fmt("%.1f", slowest) << " s";
  verdict(4, good >= 7 && 2 * matched >= good && slowest <= 300.0, detail4.str());

  const auto ws = summarize({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, wave_acc);
  const auto fs_ = summarize({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, fc_acc);
  verdict(5, ws.mean - fs_.mean >= 0.20,
          "wavenet " + fmt("%.4f", ws.mean) + " +- " + fmt("%.4f", ws.std) + " vs fcnet " + fmt("%.4f", fs_.mean) +
              " +- " + fmt("%.4f", fs_.std));
  verdict(6, in_box, "all recorded (f, w) inside [0.5, 30] x [4, 15]");
}

// ---- 7: proxy pipeline

void criterion_proxy() {
  std::vector<double> wave_acc, fc_acc;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Preset p = make_preset("gw", ModelKind::wavenet);
    const Splits data = generate_data(p, seed);
    wave_acc.push_back(run_trial(p, seed, data).report.final_test.accuracy);
    const Preset q = make_preset("gw", ModelKind::fcnet);
    fc_acc.push_back(run_trial(q, seed, data).report.final_test.accuracy);
    std::printf("  seed %llu: wavenet %.4f fcnet %.4f\n", static_cast<unsigned long long>(seed), wave_acc.back(),
                fc_acc.back());
    std::fflush(stdout);
  }
  const auto ws = summarize({0, 1, 2, 3, 4}, wave_acc);
  const auto fs_ = summarize({0, 1, 2, 3, 4}, fc_acc);
  verdict(7, ws.mean > fs_.mean, "wavenet " + fmt("%.4f", ws.mean) + " vs fcnet " + fmt("%.4f", fs_.mean));
}

// ---- 8: confidence map

void criterion_confmap() {
  const Preset p = make_preset("gw", ModelKind::wavenet);
  const Splits data = generate_data(p, 0);
  auto trial = run_trial(p, 0, data);
  const auto patches = generate_proxy_patches(p.proxy, 0);
  const LabeledPatch& patch = patches.test.front();
  const ConfidenceMap map = confidence_map(trial.model, patch);

  // Independent r and c: softmax wave probability of each slice.
  const auto slices = slice_patch(patch);
  std::vector<int> labels(slices.size(), 0);
  const Dataset ds = make_dataset_from_rows(slices, labels, kSliceSampleRate);
  const auto probs = softmax(trial.model.forward(ds.x, Mode::eval));
  Rng rng(8);
  std::uniform_int_distribution<std::size_t> cell(0, 127);
  double worst = 0.0;
  bool bounded = true;
  for (double v : map.values) bounded = bounded && v >= 0.0 && v <= 1.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t i = cell(rng), j = cell(rng);
    const double expect = probs[i][kWaveLabel] * probs[128 + j][kWaveLabel];
    worst = std::max(worst, std::abs(map.at(i, j) - expect));
  }
  verdict(8, worst <= 1e-15 && bounded, "100 cells, max |M - r c| " + fmt("%.3g", worst) +
                                            (bounded ? ", all values in [0, 1]" : ", values out of [0, 1]"));
}

// ---- 9: byte-identical train outputs

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void criterion_determinism() {
  const fs::path root = fs::temp_directory_path() / "wavenet_acceptance_det";
  fs::remove_all(root);
  bool ok = true;
  for (const char* run : {"a", "b"}) {
    const std::string out = (root / run).string();
    const char* argv[] = {"wavenet", "train", "--preset", "simplified", "--model", "wavenet", "--seed", "3", "--out",
                          out.c_str()};
    std::ostringstream sink, err;
    ok = ok && cli::dispatch(10, argv, sink, err) == 0;
  }
  std::string detail;
  for (const char* f : {"model.json", "report.json", "curves.csv"}) {
    const std::string a = slurp(root / "a" / f), b = slurp(root / "b" / f);
    const bool same = !a.empty() && a == b;
    ok = ok && same;
    detail += std::string(f) + (same ? " identical; " : " DIFFERS; ");
  }
  verdict(9, ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::stoi(argv[i]));
  auto want = [&](int id) { return wanted.empty() || wanted.count(id) > 0; };
  if (want(1)) criterion_gradients();
  if (want(2)) criterion_forward();
  if (want(3)) criterion_energy();
  if (want(4) || want(5) || want(6)) criterion_simplified();
  if (want(7)) criterion_proxy();
  if (want(8)) criterion_confmap();
  if (want(9)) criterion_determinism();
  return failures == 0 ? 0 : 1;
}
