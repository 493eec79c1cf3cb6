#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "wavenet/confmap.hpp"
#include "wavenet/error.hpp"
#include "wavenet/experiment.hpp"
#include "wavenet/gradcheck.hpp"
#include "wavenet/imagery.hpp"
#include "wavenet/io.hpp"

namespace wavenet::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::string config;
  std::string preset = "simplified";
};

void add_common(CLI::App* app, Common& c, bool needs_out) {
  app->add_option("--seed", c.seed, "Run seed");
  auto* out = app->add_option("--out", c.out, "Output directory");
  if (needs_out) out->required();
  app->add_option("--config", c.config, "JSON file of preset overrides");
  app->add_option("--preset", c.preset, "Hyperparameter preset")->check(CLI::IsMember({"simplified", "gw"}));
}

Preset resolve_preset(const Common& c, const std::string& model) {
  Preset p = make_preset(c.preset, parse_model_kind(model));
  if (!c.config.empty()) apply_overrides(p, read_json(c.config));
  return p;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  const auto dots = text.find("..");
  try {
    if (dots != std::string::npos) {
      const auto lo = std::stoull(text.substr(0, dots));
      const auto hi = std::stoull(text.substr(dots + 2));
      if (hi < lo) throw ContractError("seed range is empty: " + text);
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) seeds.push_back(std::stoull(item));
    }
  } catch (const std::logic_error&) {
    throw ContractError("bad seed list '" + text + "' (use 0..9 or 0,1,2)");
  }
  if (seeds.empty()) throw ContractError("no seeds given");
  return seeds;
}

double dataset_rate(const fs::path& dir, double fallback) {
  const fs::path manifest = dir / "manifest.json";
  if (!fs::exists(manifest)) return fallback;
  const json j = read_json(manifest);
  return j.value("sample_rate", fallback);
}

Splits load_splits(const fs::path& dir, double fallback_rate) {
  const double rate = dataset_rate(dir, fallback_rate);
  Splits s;
  s.train = read_dataset_csv(dir / "train.csv", rate);
  if (fs::exists(dir / "test.csv")) s.test = read_dataset_csv(dir / "test.csv", rate);
  return s;
}

json counts_json(const Dataset& d) {
  json c = json::object();
  for (int label : d.y) c[std::to_string(label)] = c.value(std::to_string(label), 0) + 1;
  return c;
}

int label_from_json(const json& v) {
  if (v.is_number_integer()) return v.get<int>();
  const auto s = v.get<std::string>();
  if (s == "wave") return kWaveLabel;
  if (s == "cloud") return kCloudLabel;
  throw FormatError("labels: unknown label '" + s + "'");
}

void write_report_files(const fs::path& dir, const TrialResult& r) {
  fs::create_directories(dir);
  save_model(dir / "model.json", r.model);
  write_json(dir / "report.json", report_to_json(r.report));
  write_curves_csv(dir / "curves.csv", r.report);
  write_json(dir / "timing.json", {{"wall_clock_seconds", r.report.wall_clock_seconds}});
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trainable complex-Morlet wavelet networks: data generation, training, evaluation"};
  app.require_subcommand(1);

  // synth
  Common synth_c;
  double noise_std = -1.0;
  double test_noise_std = -1.0;
  auto* synth = app.add_subcommand("synth", "Generate the two-class synthetic signal dataset");
  add_common(synth, synth_c, true);
  synth->add_option("--noise-std", noise_std, "Noise std for the training split");
  synth->add_option("--test-noise-std", test_noise_std, "Noise std for the test split");

  // proxy-patches
  Common proxy_c;
  int n_wave = 20, n_cloud = 20, n_test_wave = 5, n_test_cloud = 5;
  double proxy_noise = -1.0;
  auto* proxy = app.add_subcommand("proxy-patches", "Generate synthetic wave/cloud PGM patches and a label manifest");
  add_common(proxy, proxy_c, true);
  proxy->add_option("--n-wave", n_wave, "Training wave patches");
  proxy->add_option("--n-cloud", n_cloud, "Training cloud patches");
  proxy->add_option("--n-test-wave", n_test_wave, "Held-out wave patches");
  proxy->add_option("--n-test-cloud", n_test_cloud, "Held-out cloud patches");
  proxy->add_option("--noise-std", proxy_noise, "Pixel noise std before rescaling");

  // slice
  Common slice_c;
  std::string labels_path;
  auto* slice = app.add_subcommand("slice", "Slice labeled PGM patches into balanced 1D datasets");
  add_common(slice, slice_c, true);
  slice->add_option("--labels", labels_path, "JSON list of {path, label, split}")->required();

  // train
  Common train_c;
  std::string train_model = "wavenet";
  std::string train_data;
  std::optional<int> epochs;
  std::optional<std::size_t> batch_size;
  std::optional<double> lr0, lr1;
  std::optional<int> eval_every;
  auto* trn = app.add_subcommand("train", "Train one model");
  add_common(trn, train_c, true);
  trn->add_option("--model", train_model, "wavenet|fcnet|convnet|banknet");
  trn->add_option("--data", train_data, "Directory with train.csv/test.csv (generated from the preset if omitted)");
  trn->add_option("--epochs", epochs);
  trn->add_option("--batch-size", batch_size, "0 = full batch");
  trn->add_option("--lr0", lr0, "Learning rate of wavelet f, w");
  trn->add_option("--lr1", lr1, "Learning rate of all other parameters");
  trn->add_option("--eval-every", eval_every);

  // trials
  Common trials_c;
  std::string trials_model = "wavenet";
  std::string trials_data;
  std::string seeds_text = "0..9";
  auto* trials = app.add_subcommand("trials", "Train one model per seed and summarize test accuracy");
  add_common(trials, trials_c, true);
  trials->add_option("--model", trials_model, "wavenet|fcnet|convnet|banknet");
  trials->add_option("--data", trials_data, "Shared dataset directory (fresh data per seed if omitted)");
  trials->add_option("--seeds", seeds_text, "Seed range a..b or list a,b,c");

  // eval
  Common eval_c;
  std::string eval_model;
  std::string eval_data;
  auto* evl = app.add_subcommand("eval", "Evaluate a saved model on a dataset CSV");
  add_common(evl, eval_c, false);
  evl->add_option("--model", eval_model, "model.json")->required();
  evl->add_option("--data", eval_data, "Dataset CSV, or a directory containing test.csv")->required();

  // confmap
  Common conf_c;
  std::string conf_model;
  std::string conf_patch;
  auto* conf = app.add_subcommand("confmap", "Per-pixel wave confidence for one PGM patch");
  add_common(conf, conf_c, true);
  conf->add_option("--model", conf_model, "model.json")->required();
  conf->add_option("--patch", conf_patch, "PGM patch")->required();

  // gradcheck
  Common grad_c;
  std::string grad_model = "wavenet";
  std::size_t grad_batch = 8;
  double grad_step = 1e-5;
  double grad_tol = 1e-4;
  auto* grad = app.add_subcommand("gradcheck", "Compare backprop gradients with central differences");
  add_common(grad, grad_c, false);
  grad->add_option("--model", grad_model, "wavenet|fcnet|convnet|banknet");
  grad->add_option("--batch", grad_batch, "Batch size");
  grad->add_option("--step", grad_step, "Finite-difference step");
  grad->add_option("--tolerance", grad_tol, "Pass threshold on the max relative error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (*synth) {
      Preset p = make_preset("simplified", ModelKind::wavenet);
      if (!synth_c.config.empty()) apply_overrides(p, read_json(synth_c.config));
      SyntheticConfig cfg = p.synth;
      cfg.seed = synth_c.seed;
      if (noise_std >= 0.0) cfg.noise_std = noise_std;
      if (test_noise_std >= 0.0) cfg.test_noise_std = test_noise_std;
      const auto splits = make_dataset(cfg);
      const fs::path dir = synth_c.out;
      fs::create_directories(dir);
      const Dataset train = to_dataset(splits.train, cfg.sample_rate);
      const Dataset test = to_dataset(splits.test, cfg.sample_rate);
      write_dataset_csv(dir / "train.csv", train);
      write_dataset_csv(dir / "test.csv", test);
      auto draws = [](const std::vector<LabeledSignal>& v) {
        json a = json::array();
        for (const auto& s : v) a.push_back({s.provenance.mu, s.provenance.phi0, s.provenance.phi1});
        return a;
      };
      write_json(dir / "manifest.json",
                 {{"kind", "synthetic"},
                  {"seed", cfg.seed},
                  {"sample_rate", cfg.sample_rate},
                  {"samples", cfg.samples()},
                  {"config",
                   {{"duration", cfg.duration}, {"background_freq", cfg.background_freq}, {"freq_a", cfg.freq_a},
                    {"freq_b", cfg.freq_b}, {"sigma_env", cfg.sigma_env}, {"noise_std", cfg.noise_std},
                    {"test_noise_std", cfg.test_noise_std}, {"n_train", cfg.n_train}, {"n_test", cfg.n_test}}},
                  {"counts", {{"train", counts_json(train)}, {"test", counts_json(test)}}},
                  {"draws_mu_phi0_phi1", {{"train", draws(splits.train)}, {"test", draws(splits.test)}}}});
      out << "wrote " << train.size() << " train / " << test.size() << " test signals to " << dir.string() << "\n";
      return 0;
    }

    if (*proxy) {
      ProxySetup setup;
      setup.train_wave = n_wave;
      setup.train_cloud = n_cloud;
      setup.test_wave = n_test_wave;
      setup.test_cloud = n_test_cloud;
      if (proxy_noise >= 0.0) setup.patch.noise_std = proxy_noise;
      const auto patches = generate_proxy_patches(setup, proxy_c.seed);
      const fs::path dir = proxy_c.out;
      fs::create_directories(dir);
      json labels = json::array();
      auto emit = [&](const std::vector<LabeledPatch>& v, const char* split) {
        for (const auto& p : v) {
          const std::string file = p.source_id + ".pgm";
          write_pgm(dir / file, to_gray(p));
          labels.push_back({{"path", file}, {"label", p.label == kWaveLabel ? "wave" : "cloud"}, {"split", split}});
        }
      };
      emit(patches.train, "train");
      emit(patches.test, "test");
      write_json(dir / "labels.json", labels);
      out << "wrote " << labels.size() << " patches to " << dir.string() << "\n";
      return 0;
    }

    if (*slice) {
      const fs::path lp = labels_path;
      const json labels = read_json(lp);
      if (!labels.is_array()) throw FormatError("labels: expected a JSON array");
      std::vector<LabeledPatch> train_p, test_p;
      for (const auto& e : labels) {
        fs::path path = e.at("path").get<std::string>();
        if (path.is_relative()) path = lp.parent_path() / path;
        LabeledPatch p = load_patch(path, label_from_json(e.at("label")));
        p.source_id = e.at("path").get<std::string>();
        (e.value("split", std::string("train")) == "test" ? test_p : train_p).push_back(std::move(p));
      }
      Rng rng = make_rng(slice_c.seed, Stream::slicing);
      const fs::path dir = slice_c.out;
      fs::create_directories(dir);
      json manifest = {{"sample_rate", kSliceSampleRate},
                       {"seed", slice_c.seed},
                       {"slice_order", "per patch: rows (h) top-to-bottom, then columns (v) left-to-right"}};
      auto emit = [&](const std::vector<LabeledPatch>& v, const char* split) {
        if (v.empty()) return;
        const SliceDataset sd = build_slice_dataset(v, rng);
        write_dataset_csv(dir / (std::string(split) + ".csv"), sd.data);
        json recs = json::array();
        for (std::size_t i = 0; i < sd.manifest.size(); ++i)
          recs.push_back({{"patch", sd.manifest[i].patch_id},
                          {"orientation", std::string(1, sd.manifest[i].orientation)},
                          {"index", sd.manifest[i].index},
                          {"label", sd.data.y[i]}});
        manifest[split] = {{"counts", counts_json(sd.data)}, {"slices", recs}};
        out << split << ": " << sd.data.size() << " slices\n";
      };
      emit(train_p, "train");
      emit(test_p, "test");
      write_json(dir / "manifest.json", manifest);
      return 0;
    }

    if (*trn) {
      Preset p = resolve_preset(train_c, train_model);
      if (epochs) p.train.epochs = *epochs;
      if (batch_size) p.train.batch_size = *batch_size;
      if (lr0) p.train.lr0 = *lr0;
      if (lr1) p.train.lr1 = *lr1;
      if (eval_every) p.train.eval_every = *eval_every;
      const Splits data = train_data.empty() ? generate_data(p, train_c.seed) : load_splits(train_data, p.spec.sample_rate);
      p.spec.input_length = data.train.length();
      p.spec.sample_rate = data.train.sample_rate;
      const TrialResult r = run_trial(p, train_c.seed, data);
      write_report_files(train_c.out, r);
      out << to_string(p.spec.kind) << " seed " << train_c.seed << ": test accuracy "
          << format_double(r.report.final_test.accuracy) << " (" << r.report.status << ")\n";
      return r.report.status == "ok" ? 0 : 2;
    }

    if (*trials) {
      Preset p = resolve_preset(trials_c, trials_model);
      const auto seeds = parse_seeds(seeds_text);
      std::optional<Splits> shared;
      if (!trials_data.empty()) shared = load_splits(trials_data, p.spec.sample_rate);
      const fs::path dir = trials_c.out;
      fs::create_directories(dir);
      std::vector<double> acc;
      json runs = json::array();
      std::ofstream csv(dir / "trials.csv");
      csv << "seed,test_accuracy,test_precision_1,test_recall_0,test_recall_1,status\n";
      for (auto seed : seeds) {
        const Splits data = shared ? *shared : generate_data(p, seed);
        Preset ps = p;
        ps.spec.input_length = data.train.length();
        ps.spec.sample_rate = data.train.sample_rate;
        const TrialResult r = run_trial(ps, seed, data);
        write_report_files(dir / ("seed_" + std::to_string(seed)), r);
        const auto& m = r.report.final_test;
        acc.push_back(m.accuracy);
        runs.push_back({{"seed", seed}, {"status", r.report.status}, {"final_test", metrics_to_json(m)}});
        csv << seed << ',' << format_double(m.accuracy) << ',' << format_double(m.precision.at(1)) << ','
            << format_double(m.recall.at(0)) << ',' << format_double(m.recall.at(1)) << ',' << r.report.status << '\n';
        out << "seed " << seed << ": test accuracy " << format_double(m.accuracy) << "\n";
      }
      const TrialSummary s = summarize(seeds, acc);
      write_json(dir / "trials.json", {{"model", trials_model},
                                       {"preset", p.name},
                                       {"seeds", seeds},
                                       {"runs", runs},
                                       {"test_accuracy_mean", s.mean},
                                       {"test_accuracy_std", s.std}});
      out << "mean " << format_double(s.mean) << " std " << format_double(s.std) << "\n";
      return 0;
    }

    if (*evl) {
      Model m = load_model(eval_model);
      fs::path data_path = eval_data;
      if (fs::is_directory(data_path)) data_path /= "test.csv";
      const Dataset d = read_dataset_csv(data_path, m.spec.sample_rate);
      const json metrics = metrics_to_json(evaluate(m, d));
      out << metrics.dump(2) << "\n";
      if (!eval_c.out.empty()) {
        fs::create_directories(eval_c.out);
        write_json(fs::path(eval_c.out) / "metrics.json", metrics);
      }
      return 0;
    }

    if (*conf) {
      Model m = load_model(conf_model);
      const LabeledPatch patch = load_patch(conf_patch, kCloudLabel, m.spec.input_length);
      const ConfidenceMap map = confidence_map(m, patch);
      const fs::path dir = conf_c.out;
      fs::create_directories(dir);
      write_confidence_csv(dir / "confmap.csv", map);
      LabeledPatch img;
      img.side = map.rows;
      img.pixels = map.values;
      write_pgm(dir / "confmap.pgm", to_gray(img));
      const double peak = *std::max_element(map.values.begin(), map.values.end());
      write_json(dir / "confmap.json", {{"convention", "value[i][j] = row_probs[i] * col_probs[j]; i = image row "
                                                       "(horizontal slice), j = image column (vertical slice)"},
                                        {"rows", map.rows},
                                        {"cols", map.cols},
                                        {"row_probs", map.row_probs},
                                        {"col_probs", map.col_probs},
                                        {"max", peak}});
      out << "max confidence " << format_double(peak) << "\n";
      return 0;
    }

    if (*grad) {
      Preset p = resolve_preset(grad_c, grad_model);
      const Splits data = generate_data(p, grad_c.seed);
      std::vector<std::size_t> rows(std::min(grad_batch, data.train.size()));
      std::iota(rows.begin(), rows.end(), 0);
      const Dataset batch = data.train.subset(rows);
      Rng init = make_rng(grad_c.seed, Stream::init);
      const Model m = build_model(p.spec, init);
      const GradcheckReport r = gradcheck(m, batch, grad_step);
      for (const auto& pc : r.params)
        out << pc.name << ": max rel error " << format_double(pc.max_rel_error) << " over " << pc.compared << "/"
            << pc.size << " (worst [" << pc.worst_index << "] analytic " << format_double(pc.analytic)
            << ", numeric " << format_double(pc.numeric) << ")\n";
      out << "max relative error " << format_double(r.max_rel_error) << " (" << r.worst_param << ")\n";
      return r.max_rel_error < grad_tol ? 0 : 2;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace wavenet::cli
