#include "seisreg/ftreg.hpp"

#include <cmath>

#include "seisreg/error.hpp"
#include "seisreg/metrics.hpp"

namespace seisreg {

GateVerdict entropy_gate(const TimeSeries& original, const TimeSeries& regularized,
                         const TimeSeries& predictor, double tol_bits) {
  GateVerdict v;
  v.original_entropy = series_entropy(original);
  v.regularized_entropy = series_entropy(regularized);
  v.predictor_entropy = series_entropy(predictor);
  v.tolerance = tol_bits;
  v.pass = v.regularized_entropy <= v.predictor_entropy + tol_bits &&
           v.regularized_entropy < v.original_entropy;
  return v;
}

FtRegResult regularize_ft(const TimeSeries& target, const FtRegParams& params,
                          const TimeSeries* predictor) {
  if (target.size() < 8) throw Error(ErrorKind::TooShort, "FT regularization needs >= 8 samples");
  const double nyquist = target.fs_hz() / 2.0;
  if (!(params.zeta_max_hz > 0.0) || !(params.zeta_max_hz < nyquist)) {
    throw Error(ErrorKind::InvalidParameter, "zeta_max must lie in (0, fs/2) = (0, " +
                                                 std::to_string(nyquist) + ") Hz");
  }

  Spectrum spec = dft(target);
  const double df = spec.fs_hz / static_cast<double>(spec.size());
  std::size_t retained = 0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    // closed band: |f| == zeta_max survives, up to rounding of the bin grid
    if (std::abs(spec.bin_frequency(k)) <= params.zeta_max_hz + 1e-9 * df) {
      ++retained;
    } else {
      spec.coeffs[k] = 0.0;
    }
  }
  if (retained < 3) {
    throw Error(ErrorKind::BandTooNarrow,
                "only " + std::to_string(retained) + " bin(s) inside zeta_max; need 3");
  }

  const auto back = idft(spec);
  FtRegResult res;
  res.series.t0_ms = target.t0_ms;
  res.series.dt_ms = target.dt_ms;
  res.series.values.resize(back.size());
  double imag_sq = 0.0;
  for (std::size_t i = 0; i < back.size(); ++i) {
    res.series.values[i] = back[i].real();
    imag_sq += back[i].imag() * back[i].imag();
  }
  res.report.imag_rms = std::sqrt(imag_sq / static_cast<double>(back.size()));
  res.report.zeta_max_hz = params.zeta_max_hz;
  res.report.retained_bins = retained;
  res.report.entropy_before = series_entropy(target);
  res.report.entropy_after = series_entropy(res.series);
  if (predictor) {
    res.report.gate = entropy_gate(target, res.series, *predictor, params.entropy_tolerance);
  }
  return res;
}

double default_zeta_max(const TimeSeries& predictor, double fraction, double widen) {
  const Psd p = psd(predictor);
  double total = 0.0;
  for (double v : p.power) total += v;
  if (!(total > 0.0)) throw Error(ErrorKind::ZeroPower, "predictor has no spectral power");
  double acc = 0.0;
  double edge = p.freqs_hz.back();
  for (std::size_t k = 0; k < p.power.size(); ++k) {
    acc += p.power[k];
    if (acc >= fraction * total) {
      edge = p.freqs_hz[k];
      break;
    }
  }
  const double nyquist = predictor.fs_hz() / 2.0;
  return std::min(edge * widen, 0.999 * nyquist);
}

}  // namespace seisreg
