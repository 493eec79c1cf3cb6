#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wavenet/adam.hpp"
#include "wavenet/dataset.hpp"
#include "wavenet/model.hpp"

namespace wavenet {

struct TrainConfig {
  int epochs = 700;
  std::size_t batch_size = 0;  // 0 = full batch
  double lr0 = 0.1;            // wavelet f, w
  double lr1 = 1e-4;           // everything else
  std::uint64_t seed = 0;
  bool shuffle = true;
  int eval_every = 1;  // curves get a row every eval_every epochs, plus epoch 0 and the last
};

/// Confusion counts indexed [true class][predicted class] and derived metrics.
struct Metrics {
  double loss = 0.0;
  double accuracy = 0.0;
  std::vector<double> precision;  // per class; 0 when the class is never predicted
  std::vector<double> recall;     // per class; 0 when the class never occurs
  std::vector<std::vector<long>> confusion;
};

Metrics metrics_from_confusion(const std::vector<std::vector<long>>& confusion);

struct CurvePoint {
  int epoch = 0;
  double train_loss = 0.0;
  double test_loss = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  std::vector<double> f;
  std::vector<double> w;
};

struct TrainReport {
  std::string model_kind;
  std::uint64_t seed = 0;
  TrainConfig config;
  std::vector<CurvePoint> curves;
  // [epoch][filter], epoch 0 = initialization.
  std::vector<std::vector<double>> f_trajectory;
  std::vector<std::vector<double>> w_trajectory;
  Metrics final_train;
  Metrics final_test;
  int epochs_completed = 0;
  std::string status = "ok";  // "ok" | "aborted"
  std::string diagnostic;
  double wall_clock_seconds = 0.0;  // kept out of the serialized report
};

/// Argmax predictions (ties go to the lower class index), evaluated in eval mode.
std::vector<int> predict(Model& model, const Tensor3& x);

/// Loss, accuracy, per-class precision/recall and confusion counts in eval mode.
Metrics evaluate(Model& model, const Dataset& data);

struct BankFeatures {
  Tensor3 train;  // standardized (n, F, T)
  Tensor3 test;
  std::vector<double> mean;
  std::vector<double> std;
};

/// Frozen filter-bank magnitudes, standardized per feature with training-split
/// statistics only. A zero-variance feature gets std 1 and a warning on stderr.
BankFeatures bank_preprocess(const Tensor3& train, const Tensor3* test,
                             const std::vector<MorletParams>& filters, double sample_rate);

/// Mini-batch training: forward, loss, backward, Adam, clip. Deterministic in
/// cfg.seed. A non-finite loss or gradient stops training and returns the
/// report up to the last good epoch with status "aborted".
TrainReport train(Model& model, const Dataset& train_set, const Dataset& test_set, const TrainConfig& cfg);

}  // namespace wavenet
