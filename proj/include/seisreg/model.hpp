#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "seisreg/mlp.hpp"
#include "seisreg/resample.hpp"

namespace seisreg {

/// A trained network together with the normalization it was trained under.
struct TrainedModel {
  MlpModel mlp;
  ZScoreStats input_stats;
  MinMaxMap target_map;
  std::uint64_t seed = 0;

  /// z-score -> forward -> inverse min-max.
  double predict(std::span<const double> raw_inputs) const;
};

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(std::string_view text);

void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace seisreg
