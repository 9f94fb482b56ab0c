#pragma once

#include <optional>
#include <string>

#include "kotwav/transform.hpp"
#include "kotwav/types.hpp"

namespace kotwav {

// Meyer taper ramp: 0 for x <= 0, x in between, 1 for x >= 1. Monotone, and
// nu(x) + nu(1-x) = 1, which is what the orthogonality proofs need.
double nu_ramp(double x);

// cas(x) = cos(x) + sin(x) = sqrt(2) cos(x - pi/4).
double cas(double x);

// Unit-height gates on pi <= |w| <= 2*pi (endpoints included), zero phase.
std::complex<double> shannon_spectrum(double w);

// Meyer wavelet spectrum: amplitude (1/sqrt(2pi)) sin((pi/2) nu(3|w|/(2pi)-1))
// on 2pi/3 <= |w| <= 4pi/3, (1/sqrt(2pi)) cos((pi/2) nu(3|w|/(4pi)-1)) on
// 4pi/3 < |w| <= 8pi/3, zero elsewhere; linear phase e^{-jw/2}. Continuous.
std::complex<double> meyer_spectrum(double w);

// Real Morlet: exp(-t^2) cos(w0 t) with w0 = pi*sqrt(2/ln 2) ~ 5.336, leaving
// only ~1.6e-3 relative amplitude at DC (effectively admissible).
double morlet_time(double t);
double morlet_w0();

// cas-phase variant sharing the Meyer magnitude on 4pi/3 <= |w| <= 8pi/3:
// (1/sqrt(2pi)) cas(w/2) cos((pi/2) nu(3|w|/(4pi)-1)) inside, zero outside.
std::complex<double> meyer_equivalent_spectrum(double w);

// Flat-top raised-cosine band wavelet, 0 <= alpha <= 1/3:
//   |w| < pi(1+alpha)                 -> 0
//   pi(1+alpha) <= |w| <= 2pi(1-alpha)-> 2/sqrt(2pi)
//   2pi(1-alpha) < |w| <= 2pi(1+alpha)-> (2/sqrt(2pi)) cos((|w|-2pi(1-alpha))/(8 alpha))
//   else 0
// alpha = 0 collapses to a brick wall on pi <= |w| <= 2pi.
std::complex<double> deoliveira_equivalent_spectrum(double w, double alpha);

// --- Daubechies cascade -----------------------------------------------------

// One real tap per line, '#' comments and blank lines ignored.
std::vector<double> load_taps(const std::string& path);

// Orthonormal low-pass taps: sum h = sqrt(2) and even-shift orthonormality,
// both within 1e-10. Throws std::invalid_argument otherwise.
void validate_taps(const std::vector<double>& h);

struct CascadeResult {
  RealSeries scaling;  // phi on [0, N-1], step 2^-levels
  RealSeries wavelet;  // psi on the same grid
};

// Exact integer-point values from the eigenvector of the refinement transfer
// matrix, then levels rounds of dyadic refinement. levels >= 6 recommended
// for plotting; unit norms hold to ~1e-6 by levels = 10.
CascadeResult daubechies_cascade(const std::vector<double>& h, int levels);

// --- Family registry ---------------------------------------------------------

enum class FamilyKind { spectral, temporal, cascade };

// One wavelet family, whichever way it is naturally defined. spectrum is set
// for spectral kinds, time_form for temporal, taps for cascade.
struct WaveletFamily {
  std::string name;
  FamilyKind kind = FamilyKind::spectral;
  SpectrumFn spectrum;
  std::function<double(double)> time_form;
  std::vector<double> taps;
  double alpha = 0.0;

  // Positive-side discontinuities of the spectrum (mirrored to -w).
  std::vector<double> spectrum_jumps;
  // Positive-side piecewise boundaries, for quadrature that must not
  // straddle a corner.
  std::vector<double> spectrum_breakpoints;

  // Exact band when the spectrum is compactly supported; otherwise the band
  // must be measured via band_from_spectrum.
  std::optional<BandSupport> band;
  double default_energy_fraction = 1.0;
};

WaveletFamily shannon_family();
WaveletFamily meyer_family();
WaveletFamily morlet_family();
WaveletFamily meyer_equivalent_family();
WaveletFamily deoliveira_equivalent_family(double alpha);
WaveletFamily daubechies_family(std::vector<double> taps);

// Family by CLI name: shannon, meyer, morlet, meyer_equivalent,
// deoliveira_equivalent, daubechies. Throws std::invalid_argument on unknown
// names or a missing taps path for daubechies.
WaveletFamily make_family(const std::string& name, double alpha = 0.0,
                          const std::string& taps_path = {});

// Time-domain samples of the family on the plan's grid. Spectral families
// are synthesized through the inverse transform, temporal ones evaluated
// directly, cascade ones run through daubechies_cascade and land on the grid
// (grid step must subdivide the cascade step; support starts at t = 0).
RealSeries realize(const WaveletFamily& family, const TransformPlan& plan);

// The family's band: exact when known, else measured at fraction
// (<= 0 means the family default).
BandSupport family_band(const WaveletFamily& family, const TransformPlan& plan,
                        double energy_fraction = 0.0);

}  // namespace kotwav
