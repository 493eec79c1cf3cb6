#include "wavenet/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>

#include "wavenet/error.hpp"

namespace wavenet {

namespace {

constexpr std::size_t kEvalBatch = 512;

Tensor3 gather(const Tensor3& x, std::span<const std::size_t> rows) {
  Tensor3 out(rows.size(), x.c, x.t);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = x.sample(rows[i]);
    std::copy(src.begin(), src.end(), out.sample(i).begin());
  }
  return out;
}

int argmax(std::span<const double> z) {
  int best = 0;
  for (std::size_t k = 1; k < z.size(); ++k)
    if (z[k] > z[best]) best = static_cast<int>(k);
  return best;
}

void record_filters(const Model& model, std::vector<double>& f, std::vector<double>& w) {
  f.clear();
  w.clear();
  if (const auto* wl = model.wavelet()) {
    for (const auto& p : wl->filters) {
      f.push_back(p.f);
      w.push_back(p.w);
    }
  }
}

}  // namespace

Metrics metrics_from_confusion(const std::vector<std::vector<long>>& confusion) {
  Metrics m;
  m.confusion = confusion;
  const std::size_t k = confusion.size();
  long total = 0;
  long correct = 0;
  m.precision.assign(k, 0.0);
  m.recall.assign(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    long predicted = 0;
    long actual = 0;
    for (std::size_t o = 0; o < k; ++o) {
      predicted += confusion[o][c];
      actual += confusion[c][o];
      total += confusion[c][o];
    }
    correct += confusion[c][c];
    if (predicted > 0) m.precision[c] = static_cast<double>(confusion[c][c]) / static_cast<double>(predicted);
    if (actual > 0) m.recall[c] = static_cast<double>(confusion[c][c]) / static_cast<double>(actual);
  }
  if (total == 0) throw DomainError("metrics: empty confusion matrix");
  m.accuracy = static_cast<double>(correct) / static_cast<double>(total);
  return m;
}

std::vector<int> predict(Model& model, const Tensor3& x) {
  std::vector<int> out;
  out.reserve(x.n);
  for (std::size_t start = 0; start < x.n; start += kEvalBatch) {
    std::vector<std::size_t> rows(std::min(kEvalBatch, x.n - start));
    std::iota(rows.begin(), rows.end(), start);
    const Tensor3 logits = model.forward(gather(x, rows), Mode::eval);
    for (std::size_t b = 0; b < logits.n; ++b) out.push_back(argmax(logits.sample(b)));
  }
  return out;
}

Metrics evaluate(Model& model, const Dataset& data) {
  if (data.size() == 0) throw DomainError("evaluate: empty dataset");
  const std::size_t k = model.spec.num_classes;
  std::vector<std::vector<long>> confusion(k, std::vector<long>(k, 0));
  double loss_sum = 0.0;
  for (std::size_t start = 0; start < data.size(); start += kEvalBatch) {
    std::vector<std::size_t> rows(std::min(kEvalBatch, data.size() - start));
    std::iota(rows.begin(), rows.end(), start);
    const Tensor3 logits = model.forward(gather(data.x, rows), Mode::eval);
    std::vector<int> targets;
    for (auto r : rows) targets.push_back(data.y[r]);
    loss_sum += softmax_xent(logits, targets).loss * static_cast<double>(rows.size());
    for (std::size_t b = 0; b < logits.n; ++b) confusion[targets[b]][argmax(logits.sample(b))] += 1;
  }
  Metrics m = metrics_from_confusion(confusion);
  m.loss = loss_sum / static_cast<double>(data.size());
  return m;
}

BankFeatures bank_preprocess(const Tensor3& train, const Tensor3* test, const std::vector<MorletParams>& filters,
                             double sample_rate) {
  if (train.n == 0) throw DomainError("bank_preprocess: empty training set");
  WaveletLayer bank(filters, sample_rate);
  BankFeatures out;
  out.train = bank.forward(train, Mode::eval);
  const std::size_t nf = out.train.features();
  const double n = static_cast<double>(out.train.n);
  out.mean.assign(nf, 0.0);
  out.std.assign(nf, 0.0);
  for (std::size_t b = 0; b < out.train.n; ++b) {
    const auto s = out.train.sample(b);
    for (std::size_t i = 0; i < nf; ++i) out.mean[i] += s[i];
  }
  for (auto& m : out.mean) m /= n;
  for (std::size_t b = 0; b < out.train.n; ++b) {
    const auto s = out.train.sample(b);
    for (std::size_t i = 0; i < nf; ++i) out.std[i] += (s[i] - out.mean[i]) * (s[i] - out.mean[i]);
  }
  std::size_t clamped = 0;
  for (auto& sd : out.std) {
    sd = std::sqrt(sd / n);
    if (!(sd > 0.0)) {
      sd = 1.0;
      ++clamped;
    }
  }
  if (clamped > 0) std::cerr << "warning: bank_preprocess: " << clamped << " zero-variance feature(s), std set to 1\n";

  Standardize standardize;
  standardize.mean = out.mean;
  standardize.std = out.std;
  out.train = standardize.forward(out.train, Mode::eval);
  if (test != nullptr && test->n > 0) out.test = standardize.forward(bank.forward(*test, Mode::eval), Mode::eval);
  return out;
}

TrainReport train(Model& model, const Dataset& train_set, const Dataset& test_set, const TrainConfig& cfg) {
  if (cfg.epochs < 0) throw DomainError("train: epochs must be non-negative");
  if (cfg.eval_every <= 0) throw DomainError("train: eval_every must be positive");
  if (train_set.size() == 0) throw DomainError("train: empty training set");
  if (train_set.length() != model.spec.input_length || (test_set.size() > 0 && test_set.length() != model.spec.input_length))
    throw ContractError("train: dataset length does not match the model input length");

  const auto start_time = std::chrono::steady_clock::now();
  TrainReport report;
  report.model_kind = to_string(model.spec.kind);
  report.seed = cfg.seed;
  report.config = cfg;

  // Bank-net trains on frozen, precomputed features.
  const std::size_t first = model.trainable_begin();
  Tensor3 features;
  if (model.spec.kind == ModelKind::banknet) {
    auto* wl = model.wavelet();
    BankFeatures bank = bank_preprocess(train_set.x, nullptr, wl->filters, wl->sample_rate);
    model.standardizer()->mean = bank.mean;
    model.standardizer()->std = bank.std;
    features = std::move(bank.train);
  }
  const Tensor3& inputs = first > 0 ? features : train_set.x;

  auto snapshot = [&](int epoch) {
    CurvePoint p;
    p.epoch = epoch;
    const Metrics tr = evaluate(model, train_set);
    p.train_loss = tr.loss;
    p.train_acc = tr.accuracy;
    if (test_set.size() > 0) {
      const Metrics te = evaluate(model, test_set);
      p.test_loss = te.loss;
      p.test_acc = te.accuracy;
    }
    record_filters(model, p.f, p.w);
    report.curves.push_back(std::move(p));
  };
  auto record_trajectory = [&] {
    std::vector<double> f, w;
    record_filters(model, f, w);
    report.f_trajectory.push_back(std::move(f));
    report.w_trajectory.push_back(std::move(w));
  };

  record_trajectory();
  snapshot(0);

  Adam adam(AdamConfig{cfg.lr0, cfg.lr1});
  Rng shuffle_rng = make_rng(cfg.seed, Stream::shuffle);
  const std::size_t n = train_set.size();
  const std::size_t batch = cfg.batch_size == 0 ? n : std::min(cfg.batch_size, n);
  std::vector<std::size_t> order(n);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    if (cfg.shuffle) std::shuffle(order.begin(), order.end(), shuffle_rng);
    try {
      for (std::size_t start = 0; start < n; start += batch) {
        const std::span<const std::size_t> rows(order.data() + start, std::min(batch, n - start));
        std::vector<int> targets;
        targets.reserve(rows.size());
        for (auto r : rows) targets.push_back(train_set.y[r]);

        model.zero_grad();
        const Tensor3 logits = model.forward(gather(inputs, rows), Mode::train, first);
        const XentResult loss = softmax_xent(logits, targets);
        if (!std::isfinite(loss.loss))
          throw NumericError("non-finite training loss at epoch " + std::to_string(epoch));
        model.backward(loss.grad, first);
        auto params = model.params();
        adam.step(params);
        if (auto* wl = model.wavelet()) {
          clip_wavelet_params(wl->filters);
          for (const auto& p : wl->filters)
            if (!p.in_clip_box()) throw InvariantError("wavelet parameters left the clip box after clipping");
        }
      }
    } catch (const NumericError& e) {
      report.status = "aborted";
      report.diagnostic = e.what();
      break;
    }
    report.epochs_completed = epoch;
    record_trajectory();
    if (epoch % cfg.eval_every == 0 || epoch == cfg.epochs) snapshot(epoch);
  }

  report.final_train = evaluate(model, train_set);
  if (test_set.size() > 0) report.final_test = evaluate(model, test_set);
  report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  return report;
}

}  // namespace wavenet
