// DFT via FFTW. Planning is serialized; execution on private buffers is reentrant.

#include "seisreg/spectrum.hpp"

#include <fftw3.h>

#include <mutex>

#include "seisreg/error.hpp"

namespace seisreg {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<std::complex<double>> transform(std::span<const std::complex<double>> in, int sign) {
  const std::size_t n = in.size();
  if (n == 0) throw Error(ErrorKind::TooShort, "DFT of an empty sequence");
  std::vector<std::complex<double>> out(n);
  std::vector<std::complex<double>> buf(in.begin(), in.end());
  auto* ip = reinterpret_cast<fftw_complex*>(buf.data());
  auto* op = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), ip, op, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

double Spectrum::bin_frequency(std::size_t k) const {
  const auto n = static_cast<double>(coeffs.size());
  const auto kk = static_cast<double>(k);
  return (2 * k <= coeffs.size() ? kk : kk - n) * fs_hz / n;
}

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x) {
  return transform(x, FFTW_FORWARD);
}

std::vector<std::complex<double>> idft(std::span<const std::complex<double>> X) {
  auto out = transform(X, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(X.size());
  for (auto& v : out) v *= scale;
  return out;
}

Spectrum dft(const TimeSeries& series) {
  std::vector<std::complex<double>> x(series.values.begin(), series.values.end());
  return Spectrum{dft(x), series.fs_hz()};
}

std::vector<std::complex<double>> idft(const Spectrum& spectrum) { return idft(spectrum.coeffs); }

}  // namespace seisreg
