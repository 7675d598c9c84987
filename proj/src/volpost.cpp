#include "seisreg/volpost.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <vector>

#include "seisreg/error.hpp"

namespace seisreg {

PredictionVolume predict_volume(const TrainedModel& model,
                                std::span<const SeismicVolume* const> attributes, Exec exec) {
  if (attributes.size() != model.mlp.n_in) {
    throw Error(ErrorKind::DimensionMismatch, "model expects " + std::to_string(model.mlp.n_in) +
                                                  " attribute volumes, got " +
                                                  std::to_string(attributes.size()));
  }
  const VolumeGeometry& g = attributes.front()->geometry;
  for (std::size_t a = 1; a < attributes.size(); ++a) {
    if (!(attributes[a]->geometry == g)) {
      throw Error(ErrorKind::GeometryMismatch,
                  "attribute volume " + std::to_string(a) + " differs in geometry from volume 0");
    }
  }

  PredictionVolume out(g, "sand_fraction");
  const std::size_t n_in = attributes.size();
  const std::size_t n_traces = g.n_inlines() * g.n_xlines();
  for_each_index(exec, static_cast<std::ptrdiff_t>(n_traces), [&](std::ptrdiff_t t) {
    std::vector<double> x(n_in);
    const std::size_t base = static_cast<std::size_t>(t) * g.n_samples;
    for (std::size_t s = 0; s < g.n_samples; ++s) {
      const std::size_t idx = base + s;
      bool ok = true;
      for (std::size_t a = 0; a < n_in && ok; ++a) {
        ok = attributes[a]->valid[idx] != 0;
        if (ok) x[a] = attributes[a]->data[idx];
      }
      if (!ok) continue;
      out.data[idx] = model.predict(x);
      out.valid[idx] = 1;
    }
  });
  return out;
}

PredictionVolume median_filter_3d(const PredictionVolume& volume, const MedianParams& params,
                                  Exec exec) {
  if (params.window < 1 || params.window % 2 == 0) {
    throw Error(ErrorKind::InvalidParameter, "median window must be odd and >= 1");
  }
  const auto& g = volume.geometry;
  const auto ni = static_cast<std::ptrdiff_t>(g.n_inlines());
  const auto nx = static_cast<std::ptrdiff_t>(g.n_xlines());
  const auto ns = static_cast<std::ptrdiff_t>(g.n_samples);
  const std::ptrdiff_t h = params.window / 2;

  PredictionVolume out(g, volume.attribute_name);
  // Errors cannot escape an OpenMP region; record the first bad voxel instead.
  std::ptrdiff_t empty_at = -1;

  for_each_index(exec, ni * nx, [&](std::ptrdiff_t t) {
    const std::ptrdiff_t il = t / nx, xl = t % nx;
    std::vector<double> buf;
    buf.reserve(static_cast<std::size_t>(params.window) * params.window * params.window);
    for (std::ptrdiff_t s = 0; s < ns; ++s) {
      const std::size_t center = volume.index(il, xl, s);
      if (!volume.valid[center] && !params.fill_missing) continue;
      buf.clear();
      for (std::ptrdiff_t a = std::max<std::ptrdiff_t>(0, il - h); a <= std::min(ni - 1, il + h); ++a) {
        for (std::ptrdiff_t b = std::max<std::ptrdiff_t>(0, xl - h); b <= std::min(nx - 1, xl + h); ++b) {
          const std::size_t row = volume.index(a, b, 0);
          for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(0, s - h); c <= std::min(ns - 1, s + h); ++c) {
            if (volume.valid[row + c]) buf.push_back(volume.data[row + c]);
          }
        }
      }
      if (buf.empty()) {
#pragma omp critical(seisreg_median_empty)
        if (empty_at < 0 || static_cast<std::ptrdiff_t>(center) < empty_at) {
          empty_at = static_cast<std::ptrdiff_t>(center);
        }
        continue;
      }
      const auto mid = buf.begin() + static_cast<std::ptrdiff_t>((buf.size() - 1) / 2);
      std::nth_element(buf.begin(), mid, buf.end());
      out.data[center] = *mid;
      out.valid[center] = 1;
    }
  });

  if (empty_at >= 0) {
    throw Error(ErrorKind::EmptyNeighborhood,
                "window around voxel " + std::to_string(empty_at) + " holds no valid samples");
  }
  return out;
}

std::string inline_slice_csv(const Volume& volume, std::int32_t inline_no) {
  const auto& g = volume.geometry;
  const auto il = g.inline_index(inline_no);
  if (!il) {
    throw Error(ErrorKind::InvalidParameter, "inline " + std::to_string(inline_no) +
                                                 " is not in the volume");
  }
  auto num = [](double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
  };
  std::ostringstream out;
  out << "xline";
  for (std::size_t s = 0; s < g.n_samples; ++s) {
    out << ',' << num(g.t0_ms + g.dt_ms * static_cast<double>(s));
  }
  out << '\n';
  for (std::size_t xl = 0; xl < g.n_xlines(); ++xl) {
    out << g.xlines[xl];
    for (std::size_t s = 0; s < g.n_samples; ++s) {
      out << ',';
      if (volume.is_valid(*il, xl, s)) out << num(volume.at(*il, xl, s));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace seisreg
