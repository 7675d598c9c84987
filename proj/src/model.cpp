#include "seisreg/model.hpp"

#include <json.hpp>

#include "seisreg/error.hpp"
#include "seisreg/formats.hpp"

namespace seisreg {

using nlohmann::json;

double TrainedModel::predict(std::span<const double> raw_inputs) const {
  double z[16];
  const std::size_t n = mlp.n_in;
  if (raw_inputs.size() != n || n > 16) {
    throw Error(ErrorKind::DimensionMismatch, "input width does not match model");
  }
  for (std::size_t c = 0; c < n; ++c) {
    z[c] = (raw_inputs[c] - input_stats.mean[c]) / input_stats.stddev[c];
  }
  return target_map.inverse(forward(mlp, std::span<const double>(z, n)));
}

std::string model_to_json(const TrainedModel& m) {
  json j;
  j["format"] = "seisreg-mlp";
  j["version"] = 1;
  j["layer_sizes"] = {m.mlp.n_in, m.mlp.n_hidden, 1};
  j["activations"] = {"tanh", "logistic"};
  j["weights"] = m.mlp.weights;
  j["input_stats"] = {{"mean", m.input_stats.mean}, {"std", m.input_stats.stddev}};
  j["target_band"] = {{"min", m.target_map.min},
                      {"max", m.target_map.max},
                      {"lo", m.target_map.lo},
                      {"hi", m.target_map.hi}};
  j["seed"] = m.seed;
  return j.dump(2) + "\n";
}

TrainedModel model_from_json(std::string_view text) {
  TrainedModel m;
  try {
    const json j = json::parse(text);
    if (j.at("format") != "seisreg-mlp" || j.at("version") != 1) {
      throw Error(ErrorKind::ConfigError, "not a seisreg-mlp v1 model");
    }
    const auto sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
    if (sizes.size() != 3 || sizes[2] != 1) {
      throw Error(ErrorKind::ConfigError, "model must have layer sizes [n_in, n_hidden, 1]");
    }
    m.mlp.n_in = sizes[0];
    m.mlp.n_hidden = sizes[1];
    m.mlp.weights = j.at("weights").get<std::vector<double>>();
    m.input_stats.mean = j.at("input_stats").at("mean").get<std::vector<double>>();
    m.input_stats.stddev = j.at("input_stats").at("std").get<std::vector<double>>();
    const auto& b = j.at("target_band");
    m.target_map = {b.at("min").get<double>(), b.at("max").get<double>(), b.at("lo").get<double>(),
                    b.at("hi").get<double>()};
    m.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed model JSON: ") + e.what());
  }
  if (m.mlp.weights.size() != MlpModel::weight_count(m.mlp.n_in, m.mlp.n_hidden) ||
      m.input_stats.mean.size() != m.mlp.n_in || m.input_stats.stddev.size() != m.mlp.n_in) {
    throw Error(ErrorKind::ConfigError, "model JSON sizes are inconsistent");
  }
  return m;
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
  write_file_text(path, model_to_json(model));
}

TrainedModel load_model(const std::filesystem::path& path) {
  return model_from_json(read_file_text(path));
}

}  // namespace seisreg
