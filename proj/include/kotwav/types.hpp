#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace kotwav {

inline constexpr double pi = std::numbers::pi;

// Sample k lives at t_start + k*dt. dt > 0, n >= 2.
struct UniformTimeGrid {
  double t_start = 0.0;
  double dt = 0.0;
  std::size_t n = 0;

  double t(std::size_t k) const { return t_start + static_cast<double>(k) * dt; }
  double duration() const { return static_cast<double>(n) * dt; }
  double nyquist_w() const { return pi / dt; }

  bool operator==(const UniformTimeGrid&) const = default;
};

// Fourier dual of a time grid: dw = 2*pi/(n*dt), bins at w_start + m*dw.
// Contains w = 0 (even n puts it at index n/2).
struct UniformFreqGrid {
  double w_start = 0.0;
  double dw = 0.0;
  std::size_t n = 0;

  double w(std::size_t m) const { return w_start + static_cast<double>(m) * dw; }

  bool operator==(const UniformFreqGrid&) const = default;
};

struct RealSeries {
  UniformTimeGrid grid;
  std::vector<double> samples;
};

struct ComplexSpectrum {
  UniformFreqGrid grid;
  std::vector<std::complex<double>> samples;
};

// Real-valued function of frequency (magnitude spectra and the like).
struct RealSpectrum {
  UniformFreqGrid grid;
  std::vector<double> samples;
};

// Positive-frequency band [w_m, w_M] in rad/s, 0 <= w_m < w_M.
struct BandSupport {
  double w_m = 0.0;
  double w_M = 0.0;

  double bandwidth_hz() const { return (w_M - w_m) / (2.0 * pi); }
  double midpoint() const { return 0.5 * (w_m + w_M); }
  // Ideal low-pass cutoff for the baseband processes: pi*B rad/s with B in Hz,
  // i.e. half the band's width in rad/s.
  double cutoff_w() const { return 0.5 * (w_M - w_m); }
};

// In-phase / quadrature baseband pair. s_c and s_s share one grid;
// cutoff_w is the low-pass cutoff the pair was produced with.
struct BasebandPair {
  RealSeries s_c;
  RealSeries s_s;
  double carrier_w = 0.0;
  double cutoff_w = 0.0;
};

// envelope >= 0 everywhere; phase wrapped to (-pi, pi], forced to 0 where the
// envelope falls below eps_env = 1e-9 * max envelope.
struct EnvelopePhase {
  RealSeries envelope;
  RealSeries phase;
};

// Smallest positive-frequency interval holding >= energy_fraction of the
// positive-frequency energy of |spectrum|^2. Two-pointer scan over bins,
// minimal width, ties broken toward lower w_m; the winning bin window is
// padded by dw/2 per side (each bin carries dw of mass). Throws
// std::runtime_error("no spectral content") on an all-zero spectrum.
BandSupport band_from_spectrum(const ComplexSpectrum& spectrum, double energy_fraction);

}  // namespace kotwav
