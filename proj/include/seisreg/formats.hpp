#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seisreg/series.hpp"

namespace seisreg {

// ---------------------------------------------------------------------------
// SEG-Y
// ---------------------------------------------------------------------------

/// Decodes one IBM System/360 hexadecimal float given as its big-endian bit
/// pattern: (-1)^s * 16^(e-64) * f/2^24. Exact for every pattern.
double ibm_to_ieee(std::uint32_t word);

/// 1-based trace-header byte positions of the inline and crossline numbers.
struct SegyLayout {
  int inline_byte = 189;
  int xline_byte = 193;
};

struct SegyBinaryHeader {
  int sample_interval_us = 0;
  int samples_per_trace = 0;
  int format_code = 0;
};

struct SegyTrace {
  std::array<std::uint8_t, 240> header_bytes{};
  std::int32_t inline_no = 0;
  std::int32_t xline_no = 0;
  std::int16_t delay_ms = 0;  // trace header bytes 109-110
  std::vector<double> samples;
};

struct SegyVolumeRaw {
  std::array<std::uint8_t, 3200> textual_header{};  // stored verbatim (EBCDIC or ASCII)
  SegyBinaryHeader binary_header;
  std::vector<SegyTrace> traces;
};

/// Parses a rev-1 big-endian SEG-Y image. Supports format codes 1 and 5.
SegyVolumeRaw parse_segy(std::span<const std::uint8_t> bytes, const SegyLayout& layout = {});

// ---------------------------------------------------------------------------
// Volumes
// ---------------------------------------------------------------------------

struct VolumeGeometry {
  std::vector<std::int32_t> inlines;  // sorted ascending
  std::vector<std::int32_t> xlines;   // sorted ascending
  double t0_ms = 0.0;
  double dt_ms = 2.0;
  std::size_t n_samples = 0;

  std::size_t n_inlines() const { return inlines.size(); }
  std::size_t n_xlines() const { return xlines.size(); }
  std::size_t n_voxels() const { return inlines.size() * xlines.size() * n_samples; }

  std::optional<std::size_t> inline_index(std::int32_t il) const;
  std::optional<std::size_t> xline_index(std::int32_t xl) const;

  bool operator==(const VolumeGeometry&) const = default;
};

/// Dense 3-D grid [inline][xline][sample] with a per-voxel validity mask.
/// Missing traces and voxels are flagged in `valid`; their data slots hold 0.
struct Volume {
  VolumeGeometry geometry;
  std::string attribute_name;
  std::vector<double> data;
  std::vector<std::uint8_t> valid;

  Volume() = default;
  Volume(VolumeGeometry geom, std::string name);

  std::size_t index(std::size_t il, std::size_t xl, std::size_t s) const {
    return (il * geometry.n_xlines() + xl) * geometry.n_samples + s;
  }
  double& at(std::size_t il, std::size_t xl, std::size_t s) { return data[index(il, xl, s)]; }
  double at(std::size_t il, std::size_t xl, std::size_t s) const { return data[index(il, xl, s)]; }
  bool is_valid(std::size_t il, std::size_t xl, std::size_t s) const {
    return valid[index(il, xl, s)] != 0;
  }

  /// Extracts one trace as a time series; empty optional when any sample is masked.
  std::optional<TimeSeries> trace(std::size_t il, std::size_t xl) const;

  bool operator==(const Volume&) const = default;
};

using SeismicVolume = Volume;
using PredictionVolume = Volume;

/// Dense grid over the Cartesian closure of the traces' inline and xline
/// numbers; absent traces are masked out.
SeismicVolume volume_from_traces(const SegyVolumeRaw& raw, std::string attribute_name = {});

// .svol store; layout documented in docs/format.md
std::vector<std::uint8_t> encode_svol(const Volume& volume);
Volume decode_svol(std::span<const std::uint8_t> bytes);
void write_svol(const std::filesystem::path& path, const Volume& volume);
Volume read_svol(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// LAS 2.0
// ---------------------------------------------------------------------------

struct LasValue {
  std::string value;
  std::string unit;
  std::string description;

  bool operator==(const LasValue&) const = default;
};

struct LasCurve {
  std::string mnemonic;
  std::string unit;
  std::string description;

  bool operator==(const LasCurve&) const = default;
};

struct LasLog {
  std::map<std::string, LasValue> well_meta;  // ~W section, keyed by mnemonic
  std::vector<LasCurve> curves;                // ~C order; column 0 is the index (depth)
  double null_value = -999.25;
  std::vector<std::vector<std::optional<double>>> rows;

  std::optional<std::size_t> curve_index(std::string_view mnemonic) const;
  /// Numeric ~W entry, if present and parseable.
  std::optional<double> meta_number(std::string_view mnemonic) const;

  bool operator==(const LasLog&) const = default;
};

LasLog parse_las(std::string_view text);
std::string write_las(const LasLog& log);

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_text(const std::filesystem::path& path, std::string_view text);

}  // namespace seisreg
