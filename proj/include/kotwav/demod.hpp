#pragma once

#include <string>
#include <utility>

#include "kotwav/transform.hpp"
#include "kotwav/types.hpp"

namespace kotwav {

// Gate X to |w| <= band.cutoff_w() after shifting by +-carrier: S_c/S_s are
// the spectra of the in-phase and quadrature processes (gain 2 applied after
// the low-pass). The cutoff bin itself is kept.
std::pair<ComplexSpectrum, ComplexSpectrum> baseband_spectra(const ComplexSpectrum& x,
                                                             const BandSupport& band,
                                                             double carrier_w);

struct DemodResult {
  BasebandPair pair;
  // Fraction of input energy outside [w_m, w_M] (positive side).
  double out_of_band_fraction = 0.0;
  std::vector<std::string> warnings;
};

// I/Q demodulation of a real bandpass signal: mix with cos/sin at carrier_w,
// ideal low-pass at band.cutoff_w(), gain 2. carrier_w must lie in
// (0, nyquist) or std::range_error is thrown; out-of-band energy above 1e-3
// of the total attaches a warning rather than failing.
DemodResult demodulate(const RealSeries& psi, const BandSupport& band, double carrier_w);

// Phi(w) = sqrt(|S_c(w)|^2 + |S_s(w)|^2), pointwise on the common grid.
RealSpectrum envelope_spectrum(const ComplexSpectrum& s_c, const ComplexSpectrum& s_s);

// e = sqrt(s_c^2 + s_s^2), theta = atan2(-s_s, s_c) wrapped to (-pi, pi]
// (exact -pi maps to pi). Where e < 1e-9 * max(e), theta is forced to 0.
EnvelopePhase envelope_phase(const BasebandPair& pair);

// psi(t) = s_c(t) cos(w_c t) + s_s(t) sin(w_c t).
RealSeries reconstruct(const BasebandPair& pair);

struct BandlimitReport {
  double cutoff_w = 0.0;
  double s_c_fraction = 0.0;  // energy fraction above cutoff
  double s_s_fraction = 0.0;
};

// Measures how much of each component's energy sits above pair.cutoff_w.
// Both fractions are exactly 0 for a pair produced by demodulate.
BandlimitReport verify_bandlimit(const BasebandPair& pair);

}  // namespace kotwav
