#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "seisreg/formats.hpp"
#include "seisreg/resample.hpp"

namespace seisreg {

/// Layered sand/shale field on a regular survey grid. Times are two-way, in ms.
struct SynthFieldParams {
  std::size_t n_inlines = 24;
  std::size_t n_xlines = 24;
  std::int32_t first_inline = 120;
  std::int32_t first_xline = 200;
  std::size_t n_samples = 321;
  double t0_ms = 1790.0;
  double dt_ms = 2.0;

  int layer_count = 260;
  double mean_thickness_ms = 3.5;  // ~5 m at 3000 m/s
  double wavelet_hz = 30.0;        // Ricker peak frequency
  double smoothing_ms = 6.0;       // impedance response width (Gaussian sigma)
  double noise = 0.05;             // impedance noise and lateral value drift scale
  std::uint64_t seed = 7;

  double log_top_ms = 1800.0;
  double log_base_ms = 2400.0;
  double log_depth_step_m = 0.1;

  void validate() const;
};

struct SynthWell {
  std::string name;
  std::int32_t inline_no = 0;
  std::int32_t xline_no = 0;
  LasLog las;  // DEPT (m), SF
  VelocityProfile velocity;
};

struct SynthField {
  SynthFieldParams params;
  Volume sand_fraction;  // ground truth on the seismic grid
  Volume impedance;
  Volume amplitude;
  Volume frequency;
  std::vector<SynthWell> wells;
};

/// Deterministic in params (including the seed); traces are generated in parallel.
SynthField generate_field(const SynthFieldParams& params);

/// Writes the volumes (.svol), logs (.las), velocity tables (.csv) and a
/// field.cfg listing them into dir.
void write_field(const SynthField& field, const std::filesystem::path& dir);

/// Zero-phase Ricker wavelet value at time t (seconds).
double ricker(double t_s, double peak_hz);

}  // namespace seisreg
