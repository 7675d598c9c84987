#include "seisreg/synthbench.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "seisreg/error.hpp"
#include "seisreg/exec.hpp"
#include "seisreg/rng.hpp"
#include "seisreg/spectrum.hpp"

namespace seisreg {

namespace {

constexpr double kPi = std::numbers::pi;

struct WellSite {
  const char* name;
  std::size_t il;
  std::size_t xl;
};

constexpr WellSite kWellSites[] = {{"W1", 4, 5}, {"W2", 10, 16}, {"W3", 16, 10}, {"W4", 20, 20}};

struct LayerStack {
  std::vector<double> tops;    // tops[l] for l >= 1; tops[0] unused
  std::vector<double> values;
  std::vector<double> drift_kx, drift_ky, drift_phase;  // lateral value drift
  std::vector<double> wobble_phase;                     // per-boundary relief
};

// Beds are grouped into packages: a slowly varying net-to-gross trend sets
// each bed's mean sand fraction, its contrast with the neighbouring beds and
// its thickness (sand-rich packages are thin-bedded and strongly interbedded).
LayerStack make_layers(const SynthFieldParams& p, Rng& rng, double model_top) {
  LayerStack s;
  const auto n = static_cast<std::size_t>(p.layer_count);
  s.tops.resize(n);
  s.values.resize(n);
  s.drift_kx.resize(n);
  s.drift_ky.resize(n);
  s.drift_phase.resize(n);
  s.wobble_phase.resize(n);

  constexpr int kTrendTerms = 4;
  double period[kTrendTerms], phase[kTrendTerms];
  for (int k = 0; k < kTrendTerms; ++k) {
    period[k] = rng.uniform(40.0, 200.0);
    phase[k] = rng.uniform(0.0, 2.0 * kPi);
  }
  auto trend = [&](double t) {
    double v = 0.5;
    for (int k = 0; k < kTrendTerms; ++k) v += 0.16 * std::sin(2.0 * kPi * t / period[k] + phase[k]);
    return std::clamp(v, 0.05, 0.95);
  };

  double t = model_top;
  for (std::size_t l = 0; l < n; ++l) {
    const double ntg = trend(t);
    if (l > 0) s.tops[l] = t;
    const double contrast = (0.02 + 0.4 * ntg) * rng.uniform(0.7, 1.0);
    s.values[l] = std::clamp(ntg + (l % 2 ? contrast : -contrast), 0.0, 1.0);
    t += p.mean_thickness_ms * (1.8 - 1.4 * ntg) * rng.uniform(0.6, 1.4);
    s.drift_kx[l] = rng.uniform(0.2, 1.0);
    s.drift_ky[l] = rng.uniform(0.2, 1.0);
    s.drift_phase[l] = rng.uniform(0.0, 2.0 * kPi);
    s.wobble_phase[l] = rng.uniform(0.0, 2.0 * kPi);
  }
  return s;
}

/// Layer boundaries and values at one trace location.
struct TraceModel {
  std::vector<double> tops;  // boundary l sits on top of layer l (l >= 1)
  std::vector<double> values;

  double sf_at(double t) const {
    const auto it = std::upper_bound(tops.begin() + 1, tops.end(), t);
    return values[static_cast<std::size_t>(it - tops.begin()) - 1];
  }

  /// SF convolved with a unit-area Gaussian of width sigma, in closed form.
  double smoothed_at(double t, double sigma) const {
    double v = values[0];
    for (std::size_t l = 1; l < tops.size(); ++l) {
      const double x = (t - tops[l]) / sigma;
      if (x < -8.0) break;
      const double step = x > 8.0 ? 1.0 : 0.5 * std::erfc(-x / std::numbers::sqrt2);
      v += (values[l] - values[l - 1]) * step;
    }
    return v;
  }
};

TraceModel trace_model(const LayerStack& s, const SynthFieldParams& p, double u, double w) {
  TraceModel m;
  const std::size_t n = s.values.size();
  m.tops.resize(n);
  m.values.resize(n);
  // gentle structure shared by every boundary, plus a small per-boundary relief
  // that never exceeds half the thinnest possible layer
  const double structure = 6.0 * std::sin(2.0 * kPi * (0.6 * u + 0.3 * w) + 0.5);
  const double relief = 0.1 * p.mean_thickness_ms;
  const double drift = 2.0 * p.noise;
  for (std::size_t l = 0; l < n; ++l) {
    if (l > 0) {
      m.tops[l] = s.tops[l] + structure +
                  relief * std::sin(2.0 * kPi * (u + 0.7 * w) + s.wobble_phase[l]);
    }
    const double v = s.values[l] + drift * std::sin(2.0 * kPi * (s.drift_kx[l] * u +
                                                                s.drift_ky[l] * w) +
                                                    s.drift_phase[l]);
    m.values[l] = std::clamp(v, 0.0, 1.0);
  }
  return m;
}

std::vector<double> gaussian_kernel(double sigma_samples) {
  const auto r = static_cast<std::ptrdiff_t>(std::ceil(4.0 * sigma_samples));
  std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
  double sum = 0.0;
  for (std::ptrdiff_t i = -r; i <= r; ++i) {
    const double x = static_cast<double>(i) / sigma_samples;
    k[static_cast<std::size_t>(i + r)] = std::exp(-0.5 * x * x);
    sum += k[static_cast<std::size_t>(i + r)];
  }
  for (double& v : k) v /= sum;
  return k;
}

/// Same-length convolution with a centered odd kernel, zero outside.
std::vector<double> convolve_same(const std::vector<double>& x, const std::vector<double>& k) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const auto r = static_cast<std::ptrdiff_t>(k.size() / 2);
  std::vector<double> y(x.size(), 0.0);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::ptrdiff_t j = -r; j <= r; ++j) {
      const std::ptrdiff_t src = i - j;
      if (src >= 0 && src < n) acc += k[static_cast<std::size_t>(j + r)] * x[static_cast<std::size_t>(src)];
    }
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

/// Envelope-weighted instantaneous frequency (Hz) of a real trace.
std::vector<double> instantaneous_frequency(const std::vector<double>& x, double dt_s,
                                            double smooth_samples, double fallback_hz) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> cx(x.begin(), x.end());
  auto X = dft(cx);
  for (std::size_t k = 1; k < n; ++k) {
    if (2 * k < n) {
      X[k] *= 2.0;
    } else if (2 * k > n) {
      X[k] = 0.0;
    }
  }
  const auto z = idft(X);

  std::vector<double> weight(n, 0.0), weighted(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double phase_step = std::arg(z[i + 1] * std::conj(z[i - 1]));
    const double f = std::clamp(phase_step / (2.0 * kPi * 2.0 * dt_s), 0.0, 0.5 / dt_s);
    weight[i] = std::norm(z[i]);
    weighted[i] = weight[i] * f;
  }
  const auto k = gaussian_kernel(smooth_samples);
  const auto num = convolve_same(weighted, k);
  const auto den = convolve_same(weight, k);
  std::vector<double> f(n);
  constexpr double eps = 1e-12;
  for (std::size_t i = 0; i < n; ++i) f[i] = (num[i] + eps * fallback_hz) / (den[i] + eps);
  return f;
}

VelocityProfile make_velocity(Rng& rng) {
  std::vector<VelocityProfile::Knot> knots;
  const double phase = rng.uniform(0.0, 2.0 * kPi);
  double z = 2500.0;
  double t = 1690.0 + rng.uniform(-2.5, 2.5);
  knots.push_back({z, t});
  for (int k = 0; k < 50; ++k) {
    const double v = 3000.0 + 250.0 * std::sin(0.35 * k + phase) + rng.uniform(-40.0, 40.0);
    z += 25.0;
    t += 2000.0 * 25.0 / v;
    knots.push_back({z, t});
  }
  return VelocityProfile(std::move(knots));
}

double depth_at_time(const VelocityProfile& vp, double t_ms) {
  const auto& k = vp.knots();
  auto it = std::upper_bound(k.begin(), k.end(), t_ms,
                             [](double t, const VelocityProfile::Knot& kn) { return t < kn.time_ms; });
  if (it == k.begin() || it == k.end()) {
    throw Error(ErrorKind::DepthOutOfRange, "log window falls outside the velocity profile");
  }
  const auto& b = *it;
  const auto& a = *(it - 1);
  return a.depth_m + (t_ms - a.time_ms) * (b.depth_m - a.depth_m) / (b.time_ms - a.time_ms);
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

}  // namespace

void SynthFieldParams::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::InvalidParameter, what); };
  if (n_inlines == 0 || n_xlines == 0 || n_samples < 2) bad("grid dimensions must be positive");
  if (!(dt_ms > 0.0)) bad("dt_ms must be positive");
  if (layer_count < 1) bad("layer_count must be >= 1");
  if (!(mean_thickness_ms > 0.0)) bad("mean_thickness_ms must be positive");
  if (!(wavelet_hz > 0.0 && wavelet_hz < 250.0 / dt_ms)) bad("wavelet_hz must lie below Nyquist");
  if (!(smoothing_ms > 0.0)) bad("smoothing_ms must be positive");
  if (!(noise >= 0.0)) bad("noise must be >= 0");
  const double t_end = t0_ms + dt_ms * static_cast<double>(n_samples - 1);
  if (!(log_top_ms >= t0_ms && log_base_ms <= t_end && log_base_ms > log_top_ms)) {
    bad("log window must lie inside the seismic window");
  }
  if (!(log_depth_step_m > 0.0)) bad("log_depth_step_m must be positive");
}

double ricker(double t_s, double peak_hz) {
  const double a = kPi * peak_hz * t_s;
  return (1.0 - 2.0 * a * a) * std::exp(-a * a);
}

SynthField generate_field(const SynthFieldParams& p) {
  p.validate();
  SynthField field;
  field.params = p;

  VolumeGeometry g;
  for (std::size_t i = 0; i < p.n_inlines; ++i) g.inlines.push_back(p.first_inline + static_cast<std::int32_t>(i));
  for (std::size_t i = 0; i < p.n_xlines; ++i) g.xlines.push_back(p.first_xline + static_cast<std::int32_t>(i));
  g.t0_ms = p.t0_ms;
  g.dt_ms = p.dt_ms;
  g.n_samples = p.n_samples;

  field.sand_fraction = Volume(g, "sf");
  field.impedance = Volume(g, "imp");
  field.amplitude = Volume(g, "amp");
  field.frequency = Volume(g, "freq");

  // Working grid: 4x finer than the seismic grid, padded so that filter edges
  // stay outside the output window.
  constexpr std::size_t kFine = 4;
  const double fine_dt = p.dt_ms / kFine;
  const double pad_ms = 80.0;
  const auto pad = static_cast<std::size_t>(std::round(pad_ms / fine_dt));
  const std::size_t n_fine = 2 * pad + (p.n_samples - 1) * kFine + 1;
  const double fine_t0 = p.t0_ms - static_cast<double>(pad) * fine_dt;

  Rng master(p.seed);
  const LayerStack layers = make_layers(p, master, fine_t0 - 4.0 * p.mean_thickness_ms);

  std::vector<double> wavelet;
  {
    const auto r = static_cast<std::ptrdiff_t>(std::ceil(1.5 / p.wavelet_hz / (fine_dt * 1e-3)));
    for (std::ptrdiff_t i = -r; i <= r; ++i) {
      wavelet.push_back(ricker(static_cast<double>(i) * fine_dt * 1e-3, p.wavelet_hz));
    }
  }
  const auto noise_kernel = gaussian_kernel(p.smoothing_ms / fine_dt);
  double noise_gain = 0.0;
  for (double k : noise_kernel) noise_gain += k * k;
  noise_gain = 1.0 / std::sqrt(noise_gain);

  const std::uint64_t noise_seed = master.next();
  const std::size_t n_traces = p.n_inlines * p.n_xlines;
  auto coord = [&](std::size_t i, std::size_t n) {
    return n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
  };

  for_each_index(Exec::parallel, static_cast<std::ptrdiff_t>(n_traces), [&](std::ptrdiff_t t) {
    const std::size_t il = static_cast<std::size_t>(t) / p.n_xlines;
    const std::size_t xl = static_cast<std::size_t>(t) % p.n_xlines;
    const TraceModel m = trace_model(layers, p, coord(il, p.n_inlines), coord(xl, p.n_xlines));

    Rng rng(noise_seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(t + 1)));
    std::vector<double> white(n_fine);
    for (double& v : white) v = rng.normal();
    const auto colored = convolve_same(white, noise_kernel);

    std::vector<double> z(n_fine);
    for (std::size_t i = 0; i < n_fine; ++i) {
      const double ti = fine_t0 + fine_dt * static_cast<double>(i);
      z[i] = 7000.0 - 3000.0 * m.smoothed_at(ti, p.smoothing_ms) +
             3000.0 * p.noise * noise_gain * colored[i];
    }
    std::vector<double> refl(n_fine, 0.0);
    for (std::size_t i = 0; i + 1 < n_fine; ++i) refl[i] = (z[i + 1] - z[i]) / (z[i + 1] + z[i]);
    auto amp = convolve_same(refl, wavelet);
    for (double& v : amp) v *= 1000.0;
    const auto freq = instantaneous_frequency(amp, fine_dt * 1e-3, 10.0 / fine_dt, p.wavelet_hz);

    for (std::size_t s = 0; s < p.n_samples; ++s) {
      const std::size_t i = pad + s * kFine;
      const std::size_t idx = field.impedance.index(il, xl, s);
      field.sand_fraction.data[idx] = m.sf_at(g.t0_ms + g.dt_ms * static_cast<double>(s));
      field.impedance.data[idx] = z[i];
      field.amplitude.data[idx] = amp[i];
      field.frequency.data[idx] = freq[i];
    }
  });
  for (Volume* v : {&field.sand_fraction, &field.impedance, &field.amplitude, &field.frequency}) {
    std::fill(v->valid.begin(), v->valid.end(), std::uint8_t{1});
  }

  for (const WellSite& site : kWellSites) {
    if (site.il >= p.n_inlines || site.xl >= p.n_xlines) continue;
    SynthWell w{site.name, g.inlines[site.il], g.xlines[site.xl], {}, make_velocity(master)};
    const TraceModel m = trace_model(layers, p, coord(site.il, p.n_inlines), coord(site.xl, p.n_xlines));

    const double z_top = depth_at_time(w.velocity, p.log_top_ms);
    const double z_base = depth_at_time(w.velocity, p.log_base_ms);
    const auto k0 = static_cast<long long>(std::ceil(z_top / p.log_depth_step_m - 1e-9));
    const auto k1 = static_cast<long long>(std::floor(z_base / p.log_depth_step_m + 1e-9));

    LasLog& las = w.las;
    las.curves = {{"DEPT", "M", "Measured depth"}, {"SF", "V/V", "Sand fraction"}};
    las.well_meta["WELL"] = {w.name, "", "Well name"};
    las.well_meta["INLINE"] = {std::to_string(w.inline_no), "", "Inline number"};
    las.well_meta["XLINE"] = {std::to_string(w.xline_no), "", "Crossline number"};
    las.well_meta["STRT"] = {fmt(static_cast<double>(k0) * p.log_depth_step_m), "M", "Start depth"};
    las.well_meta["STOP"] = {fmt(static_cast<double>(k1) * p.log_depth_step_m), "M", "Stop depth"};
    las.well_meta["STEP"] = {fmt(p.log_depth_step_m), "M", "Step"};
    las.well_meta["NULL"] = {"-999.25", "", "Null value"};
    for (long long k = k0; k <= k1; ++k) {
      const double depth = std::round(static_cast<double>(k) * p.log_depth_step_m * 1e6) / 1e6;
      las.rows.push_back({depth, m.sf_at(w.velocity.time_at(depth))});
    }
    field.wells.push_back(std::move(w));
  }
  return field;
}

void write_field(const SynthField& field, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_svol(dir / "impedance.svol", field.impedance);
  write_svol(dir / "amplitude.svol", field.amplitude);
  write_svol(dir / "frequency.svol", field.frequency);
  write_svol(dir / "sf_truth.svol", field.sand_fraction);

  std::string logs, vels;
  for (const auto& w : field.wells) {
    write_file_text(dir / (w.name + ".las"), write_las(w.las));
    write_file_text(dir / (w.name + "_velocity.csv"), write_velocity_csv(w.velocity));
    logs += (logs.empty() ? "" : ",") + w.name + ".las";
    vels += (vels.empty() ? "" : ",") + w.name + "_velocity.csv";
  }
  std::ostringstream cfg;
  cfg << "# synthetic field, seed " << field.params.seed << "\n"
      << "volumes = impedance.svol,amplitude.svol,frequency.svol\n"
      << "logs = " << logs << "\n"
      << "velocities = " << vels << "\n"
      << "target_curve = SF\n";
  write_file_text(dir / "field.cfg", cfg.str());
}

}  // namespace seisreg
