#pragma once

// Independent oracles and fixture builders shared by the unit and acceptance tests.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "seisreg/error.hpp"
#include "seisreg/formats.hpp"
#include "seisreg/rng.hpp"

namespace testkit {

/// Kind of the seisreg::Error raised by f, or nothing if f returns normally.
template <typename F>
std::optional<seisreg::ErrorKind> kind_of(F&& f) {
  try {
    f();
  } catch (const seisreg::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

/// IBM hex float encoder by repeated scaling, written without reference to the decoder.
inline std::uint32_t ibm_encode(double v) {
  if (v == 0.0) return 0;
  std::uint32_t sign = v < 0 ? 0x80000000u : 0u;
  double a = std::abs(v);
  int exp = 64;
  while (a >= 1.0) {
    a /= 16.0;
    ++exp;
  }
  while (a < 1.0 / 16.0) {
    a *= 16.0;
    --exp;
  }
  auto frac = static_cast<std::uint32_t>(std::llround(a * 16777216.0));
  if (frac >= 0x1000000u) {
    frac >>= 4;
    ++exp;
  }
  return sign | (static_cast<std::uint32_t>(exp) << 24) | frac;
}

inline void put_be16(std::vector<std::uint8_t>& b, std::size_t off, std::uint16_t v) {
  b[off] = static_cast<std::uint8_t>(v >> 8);
  b[off + 1] = static_cast<std::uint8_t>(v);
}

inline void put_be32(std::vector<std::uint8_t>& b, std::size_t off, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b[off + i] = static_cast<std::uint8_t>(v >> (24 - 8 * i));
}

struct FixtureTrace {
  std::int32_t il = 0;
  std::int32_t xl = 0;
  std::vector<double> samples;
};

/// Minimal rev-1 SEG-Y image: 3200-byte text, 400-byte binary header, traces.
inline std::vector<std::uint8_t> build_segy(const std::vector<FixtureTrace>& traces, int format,
                                            int dt_us, std::int16_t delay_ms = 0,
                                            int il_byte = 189, int xl_byte = 193) {
  const std::size_t ns = traces.empty() ? 0 : traces.front().samples.size();
  std::vector<std::uint8_t> b(3600 + traces.size() * (240 + 4 * ns), 0);
  std::memset(b.data(), 0x40, 3200);  // EBCDIC blanks
  put_be16(b, 3216, static_cast<std::uint16_t>(dt_us));
  put_be16(b, 3220, static_cast<std::uint16_t>(ns));
  put_be16(b, 3224, static_cast<std::uint16_t>(format));
  std::size_t off = 3600;
  for (const auto& t : traces) {
    put_be32(b, off + il_byte - 1, static_cast<std::uint32_t>(t.il));
    put_be32(b, off + xl_byte - 1, static_cast<std::uint32_t>(t.xl));
    put_be16(b, off + 108, static_cast<std::uint16_t>(delay_ms));
    for (std::size_t s = 0; s < ns; ++s) {
      const std::uint32_t word = format == 1 ? ibm_encode(t.samples[s])
                                             : std::bit_cast<std::uint32_t>(static_cast<float>(t.samples[s]));
      put_be32(b, off + 240 + 4 * s, word);
    }
    off += 240 + 4 * ns;
  }
  return b;
}

/// O(N^2) DFT straight from the definition.
inline std::vector<std::complex<double>> direct_dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> X(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    X[k] = acc;
  }
  return X;
}

inline std::vector<double> random_signal(std::size_t n, std::uint64_t seed, double lo = -1.0,
                                         double hi = 1.0) {
  seisreg::Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double rms_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("seisreg_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

/// Small LAS 2.0 log with one null sample.
inline const char* kLas =
    "~VERSION INFORMATION\n"
    " VERS.   2.0 : CWLS LOG ASCII STANDARD - VERSION 2.0\n"
    " WRAP.   NO  : ONE LINE PER DEPTH STEP\n"
    "~WELL INFORMATION\n"
    " STRT.M  1000.0 : START\n"
    " STOP.M  1001.0 : STOP\n"
    " NULL.   -999.25 : NULL VALUE\n"
    " WELL.   A-1 : WELL NAME\n"
    "~CURVE INFORMATION\n"
    " DEPT.M   : DEPTH\n"
    " SF.V/V   : SAND FRACTION\n"
    "~ASCII\n"
    " 1000.0  0.25\n"
    " 1000.5  -999.25\n"
    " 1001.0  0.75\n";

/// Cube whose voxels are 1..n in row-major order, all valid.
inline seisreg::Volume ramp_cube(std::size_t ni, std::size_t nx, std::size_t ns) {
  seisreg::VolumeGeometry g;
  for (std::size_t i = 0; i < ni; ++i) g.inlines.push_back(static_cast<std::int32_t>(100 + i));
  for (std::size_t i = 0; i < nx; ++i) g.xlines.push_back(static_cast<std::int32_t>(200 + i));
  g.t0_ms = 1000.0;
  g.dt_ms = 2.0;
  g.n_samples = ns;
  seisreg::Volume v(g, "ramp");
  for (std::size_t i = 0; i < v.data.size(); ++i) {
    v.data[i] = static_cast<double>(i + 1);
    v.valid[i] = 1;
  }
  return v;
}

}  // namespace testkit
