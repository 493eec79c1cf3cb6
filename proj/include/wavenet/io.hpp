#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "wavenet/confmap.hpp"
#include "wavenet/dataset.hpp"
#include "wavenet/model.hpp"
#include "wavenet/train.hpp"

namespace wavenet {

using json = nlohmann::json;

/// %.17g: enough digits to round-trip any double.
std::string format_double(double v);

json spec_to_json(const ModelSpec& spec);
ModelSpec spec_from_json(const json& j);

json model_to_json(const Model& model);
Model model_from_json(const json& j);
void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

json config_to_json(const TrainConfig& cfg);
json metrics_to_json(const Metrics& m);
json report_to_json(const TrainReport& report);

/// epoch,train_loss,test_loss,train_acc,test_acc,f_1..f_F,w_1..w_F
void write_curves_csv(const std::filesystem::path& path, const TrainReport& report);

/// One row per signal: label, then the values.
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset_csv(const std::filesystem::path& path, double sample_rate);

void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

void write_confidence_csv(const std::filesystem::path& path, const ConfidenceMap& map);

}  // namespace wavenet
