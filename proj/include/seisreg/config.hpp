#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "seisreg/emdreg.hpp"
#include "seisreg/scg.hpp"
#include "seisreg/waveletreg.hpp"

namespace seisreg {

/// Flat `key = value` text. '#' starts a comment; later keys override earlier ones.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::string_view text);
/// Applies one `key=value` override.
void apply_override(KeyValues& kv, std::string_view assignment);
std::string format_key_values(const KeyValues& kv);

enum class RegMethod { none, avg9, ft, wd, emd };

std::string_view to_string(RegMethod m);
RegMethod reg_method_from_string(std::string_view s);

struct RunConfig {
  std::filesystem::path base_dir;  // relative paths resolve against this

  std::vector<std::string> volumes;     // predictor volumes, model input order
  std::vector<std::string> logs;        // LAS files
  std::vector<std::string> velocities;  // one time-depth table per log
  std::string target_curve = "SF";
  double log_dt_ms = 0.15;

  RegMethod method = RegMethod::ft;
  int avg_span = 9;
  double ft_zeta_max_hz = 0.0;  // 0 = derive from the reference predictor
  WdParams wd{"db4", 7, WdParams::default_truncation(7), BoundaryMode::symmetric, 0.05};
  SiftParams sift;
  int emd_p1 = 3;
  double gate_tolerance = 0.05;
  int mi_bins = 16;

  std::uint64_t split_seed = 7;
  std::size_t hidden = 10;
  std::uint64_t mlp_seed = 7;
  ScgParams scg{.max_iters = 500};

  double cc_threshold = 0.80;
  int max_attempts = 3;

  std::string out_dir;
  bool predict_volume = true;
  int median_window = 3;
  std::int32_t slice_inline = 0;  // 0 = no slice

  std::filesystem::path resolve(const std::string& p) const;
  void validate() const;
};

/// Unknown keys and malformed values raise ConfigError.
RunConfig run_config_from(const KeyValues& kv, const std::filesystem::path& base_dir);
/// Every key with its effective value, in key order.
KeyValues resolved_key_values(const RunConfig& cfg);

RunConfig load_run_config(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides = {});

}  // namespace seisreg
