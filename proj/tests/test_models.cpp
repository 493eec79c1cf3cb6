#include <cmath>
#include <limits>

#include "doctest.h"
#include "wavenet/confmap.hpp"
#include "wavenet/error.hpp"
#include "wavenet/experiment.hpp"
#include "wavenet/gradcheck.hpp"
#include "wavenet/io.hpp"
#include "wavenet/train.hpp"

using namespace wavenet;

namespace {

Preset small_simplified(ModelKind kind, int epochs = 5) {
  Preset p = make_preset("simplified", kind);
  p.synth.n_train = 24;
  p.synth.n_test = 12;
  p.train.epochs = epochs;
  return p;
}

template <class T>
bool holds(const Model& m, std::size_t i) {
  return std::holds_alternative<T>(m.layers.at(i));
}

}  // namespace

TEST_CASE("architectures") {
  Rng rng(0);
  {
    Model m = build_model(make_preset("simplified", ModelKind::wavenet).spec, rng);
    REQUIRE(m.layers.size() == 3);
    CHECK(holds<WaveletLayer>(m, 0));
    CHECK(holds<BatchNorm1d>(m, 1));
    CHECK(holds<Dense>(m, 2));
    CHECK(m.wavelet()->filters.size() == 2);
    CHECK(m.wavelet()->filters[0].f == 8.0);
    CHECK(m.wavelet()->filters[1].f == 12.0);
    CHECK(m.wavelet()->filters[0].w == 10.0);
    CHECK(std::get<Dense>(m.layers[2]).in == 410);
    CHECK(std::get<Dense>(m.layers[2]).out == 2);
    // f trainable, w frozen: 2 f + 2 gamma + 2 beta + head.
    std::size_t scalars = 0;
    for (const auto& p : m.params()) scalars += p.value.size();
    CHECK(scalars == 2 + 4 + 410 * 2 + 2);
  }
  {
    Model m = build_model(make_preset("gw", ModelKind::wavenet).spec, rng);
    REQUIRE(m.layers.size() == 5);
    CHECK(m.wavelet()->filters.size() == 20);
    CHECK(m.wavelet()->filters.front().f == 1.5);
    CHECK(m.wavelet()->filters.back().f == 25.0);
    CHECK(std::get<Dense>(m.layers[2]).out == 5);
    CHECK(holds<Tanh>(m, 3));
  }
  {
    Model m = build_model(make_preset("simplified", ModelKind::fcnet).spec, rng);
    REQUIRE(m.layers.size() == 5);
    CHECK(std::get<Dense>(m.layers[0]).in == 205);
    CHECK(std::get<Dense>(m.layers[0]).out == 10);
    CHECK(std::get<Dense>(m.layers[2]).out == 10);
    CHECK(m.trainable_begin() == 0);
  }
  {
    Model m = build_model(make_preset("gw", ModelKind::convnet).spec, rng);
    REQUIRE(m.layers.size() == 7);
    CHECK(std::get<Conv1d>(m.layers[0]).out_channels == 4);
    CHECK(std::get<Conv1d>(m.layers[3]).out_channels == 8);
    CHECK(std::get<Dense>(m.layers[6]).in == 8 * 32);
  }
  {
    Model m = build_model(make_preset("gw", ModelKind::banknet).spec, rng);
    CHECK(holds<Standardize>(m, 1));
    CHECK(m.trainable_begin() == 2);
    for (const auto& p : m.params()) CHECK(p.group == ParamGroup::network);
  }
  ModelSpec bad = make_preset("gw", ModelKind::banknet).spec;
  bad.train_f = true;
  CHECK_THROWS_AS(build_model(bad, rng), ContractError);
  ModelSpec empty = make_preset("simplified", ModelKind::wavenet).spec;
  empty.filter_freqs.clear();
  CHECK_THROWS_AS(build_model(empty, rng), ContractError);
  CHECK_THROWS_AS(parse_model_kind("resnet"), ContractError);
  CHECK(linspace(1.5, 25.0, 20)[19] == 25.0);
}

TEST_CASE("metrics") {
  // [true][pred] with class 1 as positive: TP=3, FP=1, FN=2, TN=4.
  const auto m = metrics_from_confusion({{4, 1}, {2, 3}});
  CHECK(m.accuracy == doctest::Approx(0.7));
  CHECK(m.precision[1] == doctest::Approx(0.75));
  CHECK(m.recall[1] == doctest::Approx(0.6));

  const auto perfect = metrics_from_confusion({{5, 0}, {0, 5}});
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.precision == std::vector<double>{1.0, 1.0});
  CHECK(perfect.recall == std::vector<double>{1.0, 1.0});

  const auto flipped = metrics_from_confusion({{0, 5}, {5, 0}});
  CHECK(flipped.accuracy == 0.0);

  const auto one_sided = metrics_from_confusion({{5, 0}, {5, 0}});
  CHECK(one_sided.precision[1] == 0.0);
  CHECK(one_sided.recall[1] == 0.0);
  CHECK_THROWS_AS(metrics_from_confusion({{0, 0}, {0, 0}}), DomainError);
}

TEST_CASE("training with zero epochs evaluates the initial model") {
  const Preset p = small_simplified(ModelKind::wavenet, 0);
  const Splits data = generate_data(p, 1);
  Rng rng = make_rng(1, Stream::init);
  Model fresh = build_model(p.spec, rng);
  const Metrics direct = evaluate(fresh, data.test);
  auto trial = run_trial(p, 1, data);
  CHECK(trial.report.epochs_completed == 0);
  CHECK(trial.report.f_trajectory.size() == 1);
  CHECK(trial.report.curves.size() == 1);
  CHECK(trial.report.final_test.loss == direct.loss);
  CHECK(trial.report.final_test.confusion == direct.confusion);
}

TEST_CASE("null optimizer keeps parameters and curves constant") {
  for (ModelKind kind : {ModelKind::fcnet, ModelKind::convnet, ModelKind::wavenet}) {
    Preset p = small_simplified(kind, 4);
    if (kind == ModelKind::convnet) p.spec = make_preset("simplified", ModelKind::convnet).spec;
    p.train.lr0 = 0.0;
    p.train.lr1 = 0.0;
    const Splits data = generate_data(p, 2);
    auto trial = run_trial(p, 2, data);
    Rng rng = make_rng(2, Stream::init);
    Model init = build_model(p.spec, rng);
    auto a = init.params();
    auto b = trial.model.params();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(std::equal(a[i].value.begin(), a[i].value.end(), b[i].value.begin()));
    // Batch-norm running statistics still move, so only BN-free curves are flat.
    if (kind != ModelKind::wavenet) {
      for (const auto& c : trial.report.curves) {
        CHECK(c.train_acc == trial.report.curves[0].train_acc);
        CHECK(c.test_loss == trial.report.curves[0].test_loss);
      }
    }
    for (const auto& f : trial.report.f_trajectory) CHECK(f == trial.report.f_trajectory[0]);
  }
}

TEST_CASE("training is deterministic and stays in the clip box") {
  Preset p = small_simplified(ModelKind::wavenet, 6);
  p.train.batch_size = 8;
  const Splits data = generate_data(p, 3);
  const auto a = run_trial(p, 3, data);
  const auto b = run_trial(p, 3, data);
  CHECK(report_to_json(a.report).dump() == report_to_json(b.report).dump());
  CHECK(model_to_json(a.model).dump() == model_to_json(b.model).dump());
  CHECK(a.report.f_trajectory.size() == 7);
  for (std::size_t e = 0; e < a.report.f_trajectory.size(); ++e)
    for (std::size_t i = 0; i < 2; ++i) {
      const MorletParams q{a.report.f_trajectory[e][i], a.report.w_trajectory[e][i]};
      CHECK(q.in_clip_box());
    }
  // Serial and parallel kernels give the same run.
  Rng rng = make_rng(3, Stream::init);
  Model m = build_model(p.spec, rng);
  m.set_parallel(false);
  TrainConfig cfg = p.train;
  cfg.seed = 3;
  const auto r = train(m, data.train, data.test, cfg);
  CHECK(report_to_json(r).dump() == report_to_json(a.report).dump());
}

TEST_CASE("non-finite data aborts with a diagnostic") {
  Preset p = small_simplified(ModelKind::fcnet, 3);
  Splits data = generate_data(p, 0);
  data.train.x.data[5] = std::numeric_limits<double>::quiet_NaN();
  const auto trial = run_trial(p, 0, data);
  CHECK(trial.report.status == "aborted");
  CHECK(!trial.report.diagnostic.empty());
  CHECK(trial.report.epochs_completed == 0);
}

TEST_CASE("bank preprocessing") {
  Preset p = small_simplified(ModelKind::banknet);
  const Splits data = generate_data(p, 4);
  std::vector<MorletParams> filters;
  for (double f : p.spec.filter_freqs) filters.push_back({f, p.spec.filter_width, false, false});
  const auto feats = bank_preprocess(data.train.x, &data.test.x, filters, 256.0);
  const std::size_t per = feats.train.features();
  REQUIRE(feats.mean.size() == per);
  for (std::size_t j = 0; j < per; ++j) {
    double s = 0.0;
    for (std::size_t b = 0; b < feats.train.n; ++b) s += feats.train.data[b * per + j];
    CHECK(std::abs(s / feats.train.n) < 1e-10);
  }
  // Raw features are the wavelet layer output.
  WaveletLayer layer(filters, 256.0);
  const Tensor3 raw = layer.forward(data.test.x, Mode::eval);
  for (std::size_t j = 0; j < 50; ++j)
    CHECK(feats.test.data[j] == doctest::Approx((raw.data[j] - feats.mean[j]) / feats.std[j]).epsilon(1e-12));
  // Standardizing the test split with its own statistics would give different values.
  const auto own = bank_preprocess(data.test.x, nullptr, filters, 256.0);
  CHECK(own.train.data != feats.test.data);
}

TEST_CASE("gradient checks") {
  SUBCASE("simplified wavenet, batch of 8") {
    const Preset p = make_preset("simplified", ModelKind::wavenet);
    const Splits data = generate_data(p, 0);
    Rng rng = make_rng(0, Stream::init);
    const Model m = build_model(p.spec, rng);
    std::vector<std::size_t> rows{0, 1, 2, 3, 4, 5, 6, 7};
    const auto r = gradcheck(m, data.train.subset(rows));
    CHECK(r.max_rel_error < 1e-4);
    for (const auto& pc : r.params) CHECK(!pc.name.ends_with(".w"));
  }
  SUBCASE("fc-net 2x10") {
    Preset p = make_preset("simplified", ModelKind::fcnet);
    p.synth.n_train = 16;
    p.synth.n_test = 2;
    const Splits data = generate_data(p, 0);
    Rng rng = make_rng(0, Stream::init);
    const Model m = build_model(p.spec, rng);
    // Worst entries are ~1e-6 gradients where central-difference roundoff
    // (eps * loss / step ~ 1e-11) alone is ~1e-5 relative.
    const auto r = gradcheck(m, data.train);
    CHECK(r.max_rel_error < 1e-5);
    for (const auto& pc : r.params) CHECK(std::abs(pc.analytic - pc.numeric) < 1e-10);
  }
}

TEST_CASE("confidence map") {
  const std::vector<double> r{1.0, 0.0};
  const std::vector<double> c{0.5, 1.0};
  const auto m = outer_confidence(r, c);
  CHECK(m.values == std::vector<double>{0.5, 1.0, 0.0, 0.0});

  Preset p = make_preset("gw", ModelKind::wavenet);
  Rng rng(1);
  Model model = build_model(p.spec, rng);
  const auto patches = generate_proxy_patches(p.proxy, 0);
  const auto cm = confidence_map(model, patches.test[0]);
  CHECK(cm.rows == 128);
  CHECK(cm.cols == 128);
  for (std::size_t i = 0; i < 128; i += 17)
    for (std::size_t j = 0; j < 128; j += 13) {
      CHECK(cm.at(i, j) == cm.row_probs[i] * cm.col_probs[j]);
      CHECK(cm.at(i, j) >= 0.0);
      CHECK(cm.at(i, j) <= 1.0);
    }
  LabeledPatch wrong;
  wrong.side = 64;
  wrong.pixels.assign(64 * 64, 0.0);
  CHECK_THROWS(confidence_map(model, wrong));
}

TEST_CASE("model json round trip reproduces evaluation") {
  for (ModelKind kind : {ModelKind::wavenet, ModelKind::fcnet, ModelKind::convnet, ModelKind::banknet}) {
    Preset p = small_simplified(kind, 3);
    const Splits data = generate_data(p, 5);
    auto trial = run_trial(p, 5, data);
    const json j = model_to_json(trial.model);
    Model back = model_from_json(json::parse(j.dump()));
    CHECK(model_to_json(back).dump() == j.dump());
    const Metrics a = evaluate(trial.model, data.test);
    const Metrics b = evaluate(back, data.test);
    CHECK(a.loss == b.loss);
    CHECK(a.confusion == b.confusion);
  }
}

TEST_CASE("presets and overrides") {
  Preset p = make_preset("gw", ModelKind::fcnet);
  CHECK(p.train.epochs == 10);
  CHECK(p.train.batch_size == 128);
  CHECK(p.spec.hidden == std::vector<std::size_t>{20, 20});
  apply_overrides(p, json{{"epochs", 3}, {"hidden", {7}}});
  CHECK(p.train.epochs == 3);
  CHECK(p.spec.hidden == std::vector<std::size_t>{7});
  CHECK_THROWS(apply_overrides(p, json{{"epohcs", 3}}));
  CHECK_THROWS(make_preset("full", ModelKind::fcnet));

  const auto s = summarize({0, 1, 2}, {0.5, 0.7, 0.9});
  CHECK(s.mean == doctest::Approx(0.7));
  CHECK(s.std == doctest::Approx(0.2));
}
