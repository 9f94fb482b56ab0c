#pragma once

#include <limits>
#include <optional>
#include <string>

#include "kotwav/types.hpp"
#include "kotwav/wavelets.hpp"

namespace kotwav {

// Octave-doubling test: channels [2^j w_m, 2^j w_M] have disjoint interiors
// iff w_M <= 2 w_m; this evaluates the looser bound w_M <= 3 w_m, with a
// 1e-12 relative tolerance so exact boundaries pass.
bool prop1_orthogonality(const BandSupport& band);

// Companion interval to prop1_orthogonality: empty when the verdict is true,
// otherwise (w_m, (w_M - w_m)/2).
std::optional<BandSupport> overlap_interval(const BandSupport& band);

// Actual spectral overlap of channel j and channel j+1 within one bank:
// empty when w_M <= 2 w_m, else [2 w_m, w_M] (scale by 2^j for level j).
std::optional<BandSupport> adjacent_channel_overlap(const BandSupport& band);

struct BankChannel {
  int level = 0;  // channel j covers [2^j w_m, 2^j w_M]
  BandSupport support;
  double q_factor = 0.0;  // midpoint / width, identical across levels
};

// Dyadic bank over `levels` octaves starting at the base band. A channel
// whose upper edge exceeds nyquist_w raises std::range_error naming the
// offending level.
std::vector<BankChannel> build_bank(const BandSupport& base, int levels,
                                    double nyquist_w = std::numeric_limits<double>::infinity());

// Frequency-division version: level j keeps only [2^j max(w_m, w_M/2), 2^j w_M],
// so consecutive bands tile without gaps or overlap.
std::vector<BandSupport> fdm_bank(const BandSupport& base, int levels,
                                  double nyquist_w = std::numeric_limits<double>::infinity());

// --- Gram matrix --------------------------------------------------------------

struct GramIndex {
  int scale = 0;  // a = 2^-scale, so supports climb one octave per scale step
  int shift = 0;  // b = shift * a
};

struct GramMatrix {
  std::vector<GramIndex> index;
  std::vector<double> entries;  // row-major, size() x size()

  std::size_t size() const { return index.size(); }
  double at(std::size_t i, std::size_t j) const { return entries[i * size() + j]; }
  double max_off_diagonal() const;
};

// <psi_{a,b}, psi_{a',b'}> for atoms (1/sqrt(a)) psi((t-b)/a), a = 2^-scale,
// b = shift * a, with the mother normalised to unit energy. Computed in
// frequency with piecewise Gauss-Legendre panels split at every breakpoint of
// either scaled spectrum, so brick-wall edges stay exact. Spectral families
// only; a scaled support beyond the plan's Nyquist raises std::range_error.
GramMatrix gram_matrix(const WaveletFamily& family, const std::vector<int>& scales,
                       const std::vector<int>& shifts, const TransformPlan& plan);

// --- Band tables ---------------------------------------------------------------

// Exact multiple (num/den) * pi, kept in lowest terms.
struct PiRational {
  long long num = 0;
  long long den = 1;

  double value() const;
  std::string text() const;  // "4pi/3", "2pi", "pi"

  PiRational operator*(long long k) const;
  PiRational operator-(const PiRational& o) const;
  bool operator==(const PiRational&) const = default;
};

// Dyadic Meyer-style band table: per level j the reference frequency
// 2^j * w_mid-of-support, the full support, its width, and the FDM slice.
struct MeyerTableRow {
  int level = 0;
  PiRational ref_freq;
  PiRational support_lo, support_hi;
  PiRational bandwidth;
  PiRational fdm_lo, fdm_hi;
  PiRational fdm_bandwidth;
};

std::vector<MeyerTableRow> meyer_band_table(int levels);

// m * pi * (1 + s * alpha), symbolic in alpha.
struct AlphaPi {
  long long mult = 0;
  int alpha_coef = 0;

  double value(double alpha) const;
  std::string range_text() const;      // "2pi(1+a)", "pi(1-a)"
  std::string bandwidth_text() const;  // "(1+2a)2pi"

  bool operator==(const AlphaPi&) const = default;
};

// Overlapping and FDM rows for the flat-top family, bandwidths both as the
// table prints them ((1+2a)*2^j*pi) and as the endpoints actually give
// ((1+3a)*2^j*pi).
struct DeOliveiraTableRow {
  int level = 0;
  AlphaPi support_lo, support_hi;
  AlphaPi printed_bandwidth;
  AlphaPi derived_bandwidth;
  AlphaPi fdm_lo, fdm_hi;
  AlphaPi fdm_bandwidth;
};

std::vector<DeOliveiraTableRow> deoliveira_band_table(int levels);

}  // namespace kotwav
