#include "wavenet/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wavenet/error.hpp"

namespace wavenet {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot write " + path.string());
  return f;
}

template <class T>
std::vector<T> vec(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("model file: missing '") + key + "'");
  return j.at(key).get<std::vector<T>>();
}

json layer_to_json(const Layer& layer) {
  return std::visit(
      [](const auto& l) -> json {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, WaveletLayer>) {
          json f = json::array(), w = json::array(), ft = json::array(), wt = json::array();
          for (const auto& p : l.filters) {
            f.push_back(p.f);
            w.push_back(p.w);
            ft.push_back(p.f_trainable);
            wt.push_back(p.w_trainable);
          }
          return {{"type", "wavelet"}, {"sample_rate", l.sample_rate}, {"eps_mag", l.eps_mag},
                  {"f", f}, {"w", w}, {"f_trainable", ft}, {"w_trainable", wt}};
        } else if constexpr (std::is_same_v<L, BatchNorm1d>) {
          return {{"type", "batchnorm"}, {"gamma", l.gamma}, {"beta", l.beta}, {"running_mean", l.running_mean},
                  {"running_var", l.running_var}, {"eps", l.eps}, {"momentum", l.momentum}};
        } else if constexpr (std::is_same_v<L, Dense>) {
          return {{"type", "dense"}, {"in", l.in}, {"out", l.out}, {"weight", l.weight}, {"bias", l.bias}};
        } else if constexpr (std::is_same_v<L, Tanh>) {
          return {{"type", "tanh"}};
        } else if constexpr (std::is_same_v<L, Conv1d>) {
          return {{"type", "conv1d"}, {"in_channels", l.in_channels}, {"out_channels", l.out_channels},
                  {"kernel", l.kernel}, {"weight", l.weight}, {"bias", l.bias}};
        } else if constexpr (std::is_same_v<L, MaxPool1d>) {
          return {{"type", "maxpool"}, {"width", l.width}};
        } else {
          return {{"type", "standardize"}, {"mean", l.mean}, {"std", l.std}};
        }
      },
      layer);
}

Layer layer_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "wavelet") {
    const auto f = vec<double>(j, "f");
    const auto w = vec<double>(j, "w");
    const auto ft = vec<bool>(j, "f_trainable");
    const auto wt = vec<bool>(j, "w_trainable");
    if (w.size() != f.size() || ft.size() != f.size() || wt.size() != f.size())
      throw FormatError("model file: wavelet arrays differ in length");
    std::vector<MorletParams> filters;
    for (std::size_t i = 0; i < f.size(); ++i) filters.push_back({f[i], w[i], ft[i], wt[i]});
    WaveletLayer l(std::move(filters), j.at("sample_rate").get<double>());
    l.eps_mag = j.at("eps_mag").get<double>();
    return l;
  }
  if (type == "batchnorm") {
    BatchNorm1d l(vec<double>(j, "gamma").size());
    l.gamma = vec<double>(j, "gamma");
    l.beta = vec<double>(j, "beta");
    l.running_mean = vec<double>(j, "running_mean");
    l.running_var = vec<double>(j, "running_var");
    l.eps = j.at("eps").get<double>();
    l.momentum = j.at("momentum").get<double>();
    if (l.beta.size() != l.gamma.size() || l.running_mean.size() != l.gamma.size() || l.running_var.size() != l.gamma.size())
      throw FormatError("model file: batchnorm arrays differ in length");
    return l;
  }
  if (type == "dense") {
    Dense l(j.at("in").get<std::size_t>(), j.at("out").get<std::size_t>());
    l.weight = vec<double>(j, "weight");
    l.bias = vec<double>(j, "bias");
    if (l.weight.size() != l.in * l.out || l.bias.size() != l.out) throw FormatError("model file: dense shape mismatch");
    return l;
  }
  if (type == "tanh") return Tanh{};
  if (type == "conv1d") {
    Conv1d l(j.at("in_channels").get<std::size_t>(), j.at("out_channels").get<std::size_t>(), j.at("kernel").get<std::size_t>());
    l.weight = vec<double>(j, "weight");
    l.bias = vec<double>(j, "bias");
    if (l.weight.size() != l.in_channels * l.out_channels * l.kernel || l.bias.size() != l.out_channels)
      throw FormatError("model file: conv1d shape mismatch");
    return l;
  }
  if (type == "maxpool") return MaxPool1d(j.at("width").get<std::size_t>());
  if (type == "standardize") {
    Standardize l;
    l.mean = vec<double>(j, "mean");
    l.std = vec<double>(j, "std");
    if (l.mean.size() != l.std.size()) throw FormatError("model file: standardize arrays differ in length");
    return l;
  }
  throw FormatError("model file: unknown layer type '" + type + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json spec_to_json(const ModelSpec& s) {
  return {{"kind", to_string(s.kind)}, {"input_length", s.input_length}, {"num_classes", s.num_classes},
          {"sample_rate", s.sample_rate}, {"filter_freqs", s.filter_freqs}, {"filter_width", s.filter_width},
          {"train_f", s.train_f}, {"train_w", s.train_w}, {"hidden", s.hidden},
          {"conv_channels", s.conv_channels}, {"conv_kernel", s.conv_kernel}, {"pool_width", s.pool_width}};
}

ModelSpec spec_from_json(const json& j) {
  ModelSpec s;
  s.kind = parse_model_kind(j.at("kind").get<std::string>());
  s.input_length = j.at("input_length").get<std::size_t>();
  s.num_classes = j.at("num_classes").get<std::size_t>();
  s.sample_rate = j.at("sample_rate").get<double>();
  s.filter_freqs = j.at("filter_freqs").get<std::vector<double>>();
  s.filter_width = j.at("filter_width").get<double>();
  s.train_f = j.at("train_f").get<bool>();
  s.train_w = j.at("train_w").get<bool>();
  s.hidden = j.at("hidden").get<std::vector<std::size_t>>();
  s.conv_channels = j.at("conv_channels").get<std::vector<std::size_t>>();
  s.conv_kernel = j.at("conv_kernel").get<std::size_t>();
  s.pool_width = j.at("pool_width").get<std::size_t>();
  return s;
}

json model_to_json(const Model& model) {
  json layers = json::array();
  for (const auto& l : model.layers) layers.push_back(layer_to_json(l));
  return {{"format", "wavenet-model/1"},
          {"spec", spec_to_json(model.spec)},
          {"flatten_order", "channel-major"},
          {"sample_rate", model.spec.sample_rate},
          {"layers", layers}};
}

Model model_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "wavenet-model/1") throw FormatError("model file: unsupported format");
    if (j.at("flatten_order").get<std::string>() != "channel-major")
      throw FormatError("model file: unsupported flatten order");
    Model m;
    m.spec = spec_from_json(j.at("spec"));
    m.spec.validate();
    for (const auto& l : j.at("layers")) m.layers.push_back(layer_from_json(l));
    if (m.layers.empty() || !std::holds_alternative<Dense>(m.layers.back()))
      throw FormatError("model file: last layer must be the dense head");
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const Model& model) { write_json(path, model_to_json(model)); }

Model load_model(const std::filesystem::path& path) { return model_from_json(read_json(path)); }

json config_to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs}, {"batch_size", c.batch_size}, {"lr0", c.lr0}, {"lr1", c.lr1},
          {"seed", c.seed}, {"shuffle", c.shuffle}, {"eval_every", c.eval_every}};
}

json metrics_to_json(const Metrics& m) {
  return {{"loss", m.loss}, {"accuracy", m.accuracy}, {"precision", m.precision},
          {"recall", m.recall}, {"confusion", m.confusion}};
}

json report_to_json(const TrainReport& r) {
  json curves = json::array();
  for (const auto& p : r.curves)
    curves.push_back({{"epoch", p.epoch}, {"train_loss", p.train_loss}, {"test_loss", p.test_loss},
                      {"train_acc", p.train_acc}, {"test_acc", p.test_acc}});
  return {{"model_kind", r.model_kind},
          {"seed", r.seed},
          {"status", r.status},
          {"diagnostic", r.diagnostic},
          {"epochs_completed", r.epochs_completed},
          {"config", config_to_json(r.config)},
          {"final_train", metrics_to_json(r.final_train)},
          {"final_test", metrics_to_json(r.final_test)},
          {"curves", curves},
          {"f_trajectory", r.f_trajectory},
          {"w_trajectory", r.w_trajectory}};
}

void write_curves_csv(const std::filesystem::path& path, const TrainReport& report) {
  auto f = open_out(path);
  const std::size_t filters = report.f_trajectory.empty() ? 0 : report.f_trajectory.front().size();
  f << "epoch,train_loss,test_loss,train_acc,test_acc";
  for (std::size_t i = 1; i <= filters; ++i) f << ",f_" << i;
  for (std::size_t i = 1; i <= filters; ++i) f << ",w_" << i;
  f << '\n';
  for (const auto& p : report.curves) {
    f << p.epoch << ',' << format_double(p.train_loss) << ',' << format_double(p.test_loss) << ','
      << format_double(p.train_acc) << ',' << format_double(p.test_acc);
    for (double v : p.f) f << ',' << format_double(v);
    for (double v : p.w) f << ',' << format_double(v);
    f << '\n';
  }
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data) {
  auto f = open_out(path);
  for (std::size_t i = 0; i < data.size(); ++i) {
    f << data.y[i];
    for (double v : data.x.sample(i)) f << ',' << format_double(v);
    f << '\n';
  }
}

Dataset read_dataset_csv(const std::filesystem::path& path, double sample_rate) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot open dataset " + path.string());
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> values;
    bool first = true;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
      if (first) {
        labels.push_back(static_cast<int>(v));
        first = false;
      } else {
        values.push_back(v);
      }
    }
    if (values.empty()) throw FormatError(path.string() + ":" + std::to_string(line_no) + ": row has no values");
    if (!rows.empty() && values.size() != rows.front().size())
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": row length differs from the first row");
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw FormatError("dataset " + path.string() + " is empty");
  return make_dataset_from_rows(rows, std::move(labels), sample_rate);
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_confidence_csv(const std::filesystem::path& path, const ConfidenceMap& map) {
  auto f = open_out(path);
  for (std::size_t i = 0; i < map.rows; ++i) {
    for (std::size_t j = 0; j < map.cols; ++j) f << (j ? "," : "") << format_double(map.at(i, j));
    f << '\n';
  }
}

}  // namespace wavenet
