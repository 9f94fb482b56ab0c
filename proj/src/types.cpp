#include "kotwav/types.hpp"

#include <stdexcept>

namespace kotwav {

BandSupport band_from_spectrum(const ComplexSpectrum& spectrum, double energy_fraction) {
  if (!(energy_fraction > 0.0) || energy_fraction > 1.0)
    throw std::invalid_argument("energy_fraction must lie in (0, 1]");
  const UniformFreqGrid& g = spectrum.grid;
  if (spectrum.samples.size() != g.n) throw std::invalid_argument("spectrum size does not match grid");

  std::vector<double> w;
  std::vector<double> mass;
  w.reserve(g.n / 2);
  mass.reserve(g.n / 2);
  double total = 0.0;
  for (std::size_t m = 0; m < g.n; ++m) {
    const double wm = g.w(m);
    if (wm <= 0.0) continue;
    const double e = std::norm(spectrum.samples[m]) * g.dw;
    w.push_back(wm);
    mass.push_back(e);
    total += e;
  }
  if (!(total > 0.0)) throw std::runtime_error("no spectral content");

  std::vector<double> prefix(mass.size() + 1, 0.0);
  for (std::size_t i = 0; i < mass.size(); ++i) prefix[i + 1] = prefix[i] + mass[i];

  // Tiny slack keeps fraction 1.0 reachable despite summation order.
  const double need = energy_fraction * total - 1e-13 * total;

  // Two-pointer minimal window; scanning hi upward with a monotone lo means
  // the first minimal-width window found has the lowest w_m, which is the
  // tie-break we want.
  bool found = false;
  std::size_t best_lo = 0, best_hi = mass.size() - 1;
  double best_width = 0.0;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < mass.size(); ++hi) {
    while (lo < hi && prefix[hi + 1] - prefix[lo + 1] >= need) ++lo;
    if (prefix[hi + 1] - prefix[lo] >= need) {
      const double width = w[hi] - w[lo];
      if (!found || width < best_width) {
        found = true;
        best_width = width;
        best_lo = lo;
        best_hi = hi;
      }
    }
  }
  if (!found) {  // cannot happen with the slack above; defensive
    best_lo = 0;
    best_hi = mass.size() - 1;
  }

  // Each bin represents dw of spectrum; pad half a bin per side so a
  // single-bin band still has positive width.
  return BandSupport{w[best_lo] - 0.5 * g.dw, w[best_hi] + 0.5 * g.dw};
}

}  // namespace kotwav
