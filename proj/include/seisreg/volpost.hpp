#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "seisreg/exec.hpp"
#include "seisreg/formats.hpp"
#include "seisreg/model.hpp"

namespace seisreg {

/// Applies the model voxel by voxel. Attribute order must match the model's
/// input order. A voxel is valid only if every attribute is valid there.
PredictionVolume predict_volume(const TrainedModel& model,
                                std::span<const SeismicVolume* const> attributes,
                                Exec exec = Exec::parallel);

struct MedianParams {
  int window = 3;             // odd edge length of the cubic window
  bool fill_missing = false;  // also assign masked centers from their valid neighbors
};

/// Replaces each voxel by the median of the valid in-bounds voxels of its
/// window. Even-sized sets take the lower median. Masked centers stay masked
/// unless fill_missing is set, in which case an all-masked window throws
/// EmptyNeighborhood.
PredictionVolume median_filter_3d(const PredictionVolume& volume, const MedianParams& params = {},
                                  Exec exec = Exec::parallel);

/// One inline as a CSV grid: a header row of sample times, then one row per
/// crossline. Masked voxels are written as empty cells.
std::string inline_slice_csv(const Volume& volume, std::int32_t inline_no);

}  // namespace seisreg
