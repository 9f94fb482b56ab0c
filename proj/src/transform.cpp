#include "kotwav/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace kotwav {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex fftw_mutex;

void dft_in_place(std::vector<std::complex<double>>& buf, int sign) {
  fftw_complex* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    plan = fftw_plan_dft_1d(static_cast<int>(buf.size()), p, p, sign, FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("fftw plan failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fftw_destroy_plan(plan);
  }
}

bool is_centered(const TransformPlan& plan) {
  return plan.time.t_start == -0.5 * static_cast<double>(plan.time.n) * plan.time.dt;
}

// e^{-j (n/2) pi} for even n.
double half_parity(std::size_t n) { return (n / 2) % 2 == 0 ? 1.0 : -1.0; }

void check_series(const RealSeries& s, const TransformPlan& plan) {
  if (!(s.grid == plan.time)) throw std::invalid_argument("series grid does not match plan");
  if (s.samples.size() != plan.time.n) throw std::invalid_argument("series size does not match grid");
}

void check_spectrum(const ComplexSpectrum& s, const TransformPlan& plan) {
  if (!(s.grid == plan.freq)) throw std::invalid_argument("spectrum grid does not match plan");
  if (s.samples.size() != plan.freq.n) throw std::invalid_argument("spectrum size does not match grid");
}

}  // namespace

TransformPlan TransformPlan::centered(double dt, std::size_t n) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("n must be even and >= 2");
  TransformPlan p;
  const double dn = static_cast<double>(n);
  p.time = UniformTimeGrid{-0.5 * dn * dt, dt, n};
  const double dw = 2.0 * pi / (dn * dt);
  p.freq = UniformFreqGrid{-0.5 * dn * dw, dw, n};
  return p;
}

TransformPlan TransformPlan::for_grid(const UniformTimeGrid& grid) {
  TransformPlan p = centered(grid.dt, grid.n);
  p.time.t_start = grid.t_start;
  return p;
}

ComplexSpectrum analyze(const RealSeries& series, const TransformPlan& plan) {
  check_series(series, plan);
  const std::size_t n = plan.time.n;
  const double dt = plan.time.dt;
  std::vector<std::complex<double>> buf(n);

  if (is_centered(plan)) {
    // w_0 dt = -pi exactly, dw t_0 = -pi exactly: phase ramps are alternating
    // signs, kept exact instead of round-tripping through sin/cos.
    for (std::size_t k = 0; k < n; ++k)
      buf[k] = (k % 2 == 0) ? series.samples[k] : -series.samples[k];
    dft_in_place(buf, FFTW_FORWARD);
    const double s0 = dt * half_parity(n);
    for (std::size_t m = 0; m < n; ++m) buf[m] *= (m % 2 == 0) ? s0 : -s0;
  } else {
    const double w0 = plan.freq.w_start;
    const double t0 = plan.time.t_start;
    for (std::size_t k = 0; k < n; ++k)
      buf[k] = series.samples[k] * std::polar(1.0, -w0 * dt * static_cast<double>(k));
    dft_in_place(buf, FFTW_FORWARD);
    for (std::size_t m = 0; m < n; ++m)
      buf[m] *= std::polar(dt, -(w0 + static_cast<double>(m) * plan.freq.dw) * t0);
  }
  return ComplexSpectrum{plan.freq, std::move(buf)};
}

RealSeries synthesize(const ComplexSpectrum& spectrum, const TransformPlan& plan) {
  check_spectrum(spectrum, plan);
  const std::size_t n = plan.freq.n;
  const double scale = 1.0 / (static_cast<double>(n) * plan.time.dt);
  std::vector<std::complex<double>> buf(n);

  if (is_centered(plan)) {
    const double s0 = half_parity(n);
    for (std::size_t m = 0; m < n; ++m)
      buf[m] = spectrum.samples[m] * ((m % 2 == 0) ? s0 : -s0);
    dft_in_place(buf, FFTW_BACKWARD);
    for (std::size_t k = 0; k < n; ++k) buf[k] *= (k % 2 == 0) ? scale : -scale;
  } else {
    const double w0 = plan.freq.w_start;
    const double t0 = plan.time.t_start;
    for (std::size_t m = 0; m < n; ++m)
      buf[m] = spectrum.samples[m] *
               std::polar(1.0, (w0 + static_cast<double>(m) * plan.freq.dw) * t0);
    dft_in_place(buf, FFTW_BACKWARD);
    for (std::size_t k = 0; k < n; ++k)
      buf[k] *= std::polar(scale, w0 * plan.time.dt * static_cast<double>(k));
  }

  double peak = 0.0, imag_peak = 0.0;
  for (const auto& z : buf) {
    peak = std::max(peak, std::abs(z));
    imag_peak = std::max(imag_peak, std::abs(z.imag()));
  }
  if (imag_peak > 1e-9 * peak) throw std::runtime_error("non-Hermitian spectrum");

  RealSeries out{plan.time, std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) out.samples[k] = buf[k].real();
  return out;
}

RealSeries synthesize(const SpectrumFn& fn, const TransformPlan& plan,
                      const std::vector<double>& jumps) {
  const std::size_t n = plan.freq.n;
  ComplexSpectrum spec{plan.freq, std::vector<std::complex<double>>(n)};
  for (std::size_t m = 0; m < n; ++m) {
    const double w = plan.freq.w(m);
    std::complex<double> v;
    bool on_jump = false;
    for (double s : jumps) {
      for (double sj : {s, -s}) {
        if (std::abs(w - sj) <= 1e-9 * std::max(1.0, std::abs(sj))) {
          // A bin on a discontinuity carries the midpoint value: that is the
          // Fourier coefficient the periodised signal has there.
          const double d = 1e-6 * std::max(1.0, std::abs(sj));
          v = 0.5 * (fn(sj - d) + fn(sj + d));
          on_jump = true;
          break;
        }
      }
      if (on_jump) break;
    }
    spec.samples[m] = on_jump ? v : fn(w);
  }
  return synthesize(spec, plan);
}

double inner_product(const RealSeries& a, const RealSeries& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("series grids differ");
  if (a.samples.size() != b.samples.size()) throw std::invalid_argument("series sizes differ");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.samples.size(); ++k) acc += a.samples[k] * b.samples[k];
  return acc * a.grid.dt;
}

std::complex<double> spectral_inner_product(const ComplexSpectrum& a, const ComplexSpectrum& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("spectrum grids differ");
  if (a.samples.size() != b.samples.size()) throw std::invalid_argument("spectrum sizes differ");
  std::complex<double> acc = 0.0;
  for (std::size_t m = 0; m < a.samples.size(); ++m)
    acc += a.samples[m] * std::conj(b.samples[m]);
  return acc * (a.grid.dw / (2.0 * pi));
}

double spectral_energy(const ComplexSpectrum& a) {
  double acc = 0.0;
  for (const auto& z : a.samples) acc += std::norm(z);
  return acc * (a.grid.dw / (2.0 * pi));
}

}  // namespace kotwav
