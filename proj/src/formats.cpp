#include "seisreg/formats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "seisreg/error.hpp"

namespace seisreg {

namespace {

std::uint16_t read_be16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>((b[off] << 8) | b[off + 1]);
}

std::uint32_t read_be32(std::span<const std::uint8_t> b, std::size_t off) {
  return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) |
         (std::uint32_t{b[off + 2]} << 8) | std::uint32_t{b[off + 3]};
}

constexpr std::size_t kTextualHeader = 3200;
constexpr std::size_t kFileHeader = 3600;
constexpr std::size_t kTraceHeader = 240;

}  // namespace

double ibm_to_ieee(std::uint32_t word) {
  const std::uint32_t fraction = word & 0x00FFFFFFu;
  if (fraction == 0) return 0.0;
  const bool negative = (word & 0x80000000u) != 0;
  const int exponent = static_cast<int>((word >> 24) & 0x7Fu) - 64;
  // 16^e * f / 2^24 == f * 2^(4e - 24); ldexp is exact here.
  const double value = std::ldexp(static_cast<double>(fraction), 4 * exponent - 24);
  return negative ? -value : value;
}

SegyVolumeRaw parse_segy(std::span<const std::uint8_t> bytes, const SegyLayout& layout) {
  if (bytes.size() < kFileHeader) {
    throw Error(ErrorKind::TruncatedFile,
                "SEG-Y image has " + std::to_string(bytes.size()) + " bytes, need at least 3600");
  }
  for (int off : {layout.inline_byte, layout.xline_byte}) {
    if (off < 1 || off + 3 > static_cast<int>(kTraceHeader)) {
      throw Error(ErrorKind::InvalidParameter,
                  "trace-header byte offset " + std::to_string(off) + " outside 1..237");
    }
  }

  SegyVolumeRaw raw;
  std::copy_n(bytes.begin(), kTextualHeader, raw.textual_header.begin());
  // 1-based 3217, 3221, 3225 -> 0-based 3216, 3220, 3224
  raw.binary_header.sample_interval_us = read_be16(bytes, 3216);
  raw.binary_header.samples_per_trace = read_be16(bytes, 3220);
  raw.binary_header.format_code = static_cast<std::int16_t>(read_be16(bytes, 3224));

  const int fmt = raw.binary_header.format_code;
  if (fmt != 1 && fmt != 5) {
    throw Error(ErrorKind::UnsupportedFormatCode,
                "format code " + std::to_string(fmt) + " (supported: 1 IBM float, 5 IEEE float)");
  }

  const std::size_t ns = static_cast<std::size_t>(raw.binary_header.samples_per_trace);
  const std::size_t trace_bytes = kTraceHeader + 4 * ns;
  const std::size_t region = bytes.size() - kFileHeader;
  if (ns == 0 || region % trace_bytes != 0) {
    throw Error(ErrorKind::InconsistentTraceLength,
                "trace region of " + std::to_string(region) + " bytes is not a multiple of " +
                    std::to_string(trace_bytes) + " (240 + 4*" + std::to_string(ns) + ")");
  }

  const std::size_t n_traces = region / trace_bytes;
  raw.traces.resize(n_traces);
  for (std::size_t t = 0; t < n_traces; ++t) {
    const std::size_t base = kFileHeader + t * trace_bytes;
    SegyTrace& tr = raw.traces[t];
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(base), kTraceHeader,
                tr.header_bytes.begin());
    tr.inline_no = static_cast<std::int32_t>(
        read_be32(bytes, base + static_cast<std::size_t>(layout.inline_byte - 1)));
    tr.xline_no = static_cast<std::int32_t>(
        read_be32(bytes, base + static_cast<std::size_t>(layout.xline_byte - 1)));
    tr.delay_ms = static_cast<std::int16_t>(read_be16(bytes, base + 108));
    tr.samples.resize(ns);
    for (std::size_t s = 0; s < ns; ++s) {
      const std::uint32_t word = read_be32(bytes, base + kTraceHeader + 4 * s);
      tr.samples[s] = fmt == 1 ? ibm_to_ieee(word)
                               : static_cast<double>(std::bit_cast<float>(word));
    }
  }
  return raw;
}

std::optional<std::size_t> VolumeGeometry::inline_index(std::int32_t il) const {
  auto it = std::lower_bound(inlines.begin(), inlines.end(), il);
  if (it == inlines.end() || *it != il) return std::nullopt;
  return static_cast<std::size_t>(it - inlines.begin());
}

std::optional<std::size_t> VolumeGeometry::xline_index(std::int32_t xl) const {
  auto it = std::lower_bound(xlines.begin(), xlines.end(), xl);
  if (it == xlines.end() || *it != xl) return std::nullopt;
  return static_cast<std::size_t>(it - xlines.begin());
}

Volume::Volume(VolumeGeometry geom, std::string name)
    : geometry(std::move(geom)),
      attribute_name(std::move(name)),
      data(geometry.n_voxels(), 0.0),
      valid(geometry.n_voxels(), 0) {}

std::optional<TimeSeries> Volume::trace(std::size_t il, std::size_t xl) const {
  TimeSeries ts;
  ts.t0_ms = geometry.t0_ms;
  ts.dt_ms = geometry.dt_ms;
  ts.values.resize(geometry.n_samples);
  for (std::size_t s = 0; s < geometry.n_samples; ++s) {
    if (!is_valid(il, xl, s)) return std::nullopt;
    ts.values[s] = at(il, xl, s);
  }
  return ts;
}

SeismicVolume volume_from_traces(const SegyVolumeRaw& raw, std::string attribute_name) {
  if (raw.traces.empty()) throw Error(ErrorKind::EmptyVolume, "SEG-Y image holds no traces");

  std::set<std::int32_t> ils, xls;
  std::set<std::pair<std::int32_t, std::int32_t>> seen;
  for (const auto& tr : raw.traces) {
    if (!seen.emplace(tr.inline_no, tr.xline_no).second) {
      throw Error(ErrorKind::DuplicateTrace, "trace (" + std::to_string(tr.inline_no) + ", " +
                                                 std::to_string(tr.xline_no) + ") appears twice");
    }
    ils.insert(tr.inline_no);
    xls.insert(tr.xline_no);
  }

  VolumeGeometry geom;
  geom.inlines.assign(ils.begin(), ils.end());
  geom.xlines.assign(xls.begin(), xls.end());
  geom.t0_ms = raw.traces.front().delay_ms;
  geom.dt_ms = raw.binary_header.sample_interval_us / 1000.0;
  geom.n_samples = static_cast<std::size_t>(raw.binary_header.samples_per_trace);
  if (!(geom.dt_ms > 0.0)) {
    throw Error(ErrorKind::MalformedVolume, "sample interval must be positive");
  }

  SeismicVolume vol(std::move(geom), std::move(attribute_name));
  for (const auto& tr : raw.traces) {
    const std::size_t il = *vol.geometry.inline_index(tr.inline_no);
    const std::size_t xl = *vol.geometry.xline_index(tr.xline_no);
    for (std::size_t s = 0; s < vol.geometry.n_samples; ++s) {
      const double v = tr.samples[s];
      if (std::isfinite(v)) {
        vol.at(il, xl, s) = v;
        vol.valid[vol.index(il, xl, s)] = 1;
      }
    }
  }
  return vol;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_file_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::IoError, "short write to " + path.string());
}

void write_file_text(const std::filesystem::path& path, std::string_view text) {
  write_file_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

}  // namespace seisreg
