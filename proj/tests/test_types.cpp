#include <stdexcept>

#include "doctest.h"
#include "kotwav/transform.hpp"
#include "kotwav/types.hpp"
#include "kotwav/wavelets.hpp"
#include "test_util.hpp"

using namespace kotwav;

namespace {

// Independent O(n^2) reference: scan every bin window, keep the narrowest one
// meeting the energy requirement, ties to the lower edge. Mirrors the
// contract, not the implementation.
BandSupport brute_force_band(const ComplexSpectrum& spec, double fraction) {
  std::vector<double> w, mass;
  double total = 0.0;
  for (std::size_t m = 0; m < spec.grid.n; ++m) {
    const double wm = spec.grid.w(m);
    if (wm <= 0.0) continue;
    w.push_back(wm);
    mass.push_back(std::norm(spec.samples[m]) * spec.grid.dw);
    total += mass.back();
  }
  const double need = fraction * total - 1e-13 * total;
  double best_width = 1e300;
  std::size_t blo = 0, bhi = w.size() - 1;
  for (std::size_t lo = 0; lo < w.size(); ++lo) {
    double acc = 0.0;
    for (std::size_t hi = lo; hi < w.size(); ++hi) {
      acc += mass[hi];
      if (acc >= need) {
        if (w[hi] - w[lo] < best_width) {
          best_width = w[hi] - w[lo];
          blo = lo;
          bhi = hi;
        }
        break;  // widening hi only grows the window
      }
    }
  }
  return BandSupport{w[blo] - 0.5 * spec.grid.dw, w[bhi] + 0.5 * spec.grid.dw};
}

double band_energy_fraction(const ComplexSpectrum& spec, const BandSupport& band) {
  double total = 0.0, inside = 0.0;
  for (std::size_t m = 0; m < spec.grid.n; ++m) {
    const double wm = spec.grid.w(m);
    if (wm <= 0.0) continue;
    const double e = std::norm(spec.samples[m]);
    total += e;
    if (wm >= band.w_m && wm <= band.w_M) inside += e;
  }
  return inside / total;
}

}  // namespace

TEST_CASE("grid accessors and derived band quantities") {
  const UniformTimeGrid g{-32.0, 1.0 / 16.0, 1024};
  CHECK(g.t(0) == -32.0);
  CHECK(g.t(512) == 0.0);
  CHECK(g.duration() == 64.0);
  CHECK(g.nyquist_w() == doctest::Approx(16.0 * pi));

  const BandSupport band{pi, 2.0 * pi};
  CHECK(band.bandwidth_hz() == doctest::Approx(0.5));
  CHECK(band.midpoint() == doctest::Approx(1.5 * pi));
  CHECK(band.cutoff_w() == doctest::Approx(0.5 * pi));
}

TEST_CASE("band_from_spectrum recovers an explicitly placed support") {
  const TransformPlan plan = TransformPlan::centered(1.0 / 16.0, 1024);
  ComplexSpectrum spec{plan.freq, std::vector<std::complex<double>>(1024, 0.0)};
  double lo_w = 1e300, hi_w = -1e300;
  for (std::size_t m = 0; m < 1024; ++m) {
    const double w = plan.freq.w(m);
    if (std::abs(w) >= 2.0 && std::abs(w) <= 3.0) {
      spec.samples[m] = 1.0;
      if (w > 0.0) {
        lo_w = std::min(lo_w, w);
        hi_w = std::max(hi_w, w);
      }
    }
  }
  const BandSupport band = band_from_spectrum(spec, 1.0);
  CHECK(band.w_m == doctest::Approx(lo_w - 0.5 * plan.freq.dw));
  CHECK(band.w_M == doctest::Approx(hi_w + 0.5 * plan.freq.dw));
}

TEST_CASE("band_from_spectrum picks the minimal window and breaks ties low") {
  const TransformPlan plan = TransformPlan::centered(1.0 / 16.0, 1024);
  const double dw = plan.freq.dw;
  ComplexSpectrum spec{plan.freq, std::vector<std::complex<double>>(1024, 0.0)};
  const std::size_t b1 = 512 + 16, b2 = 512 + 32, b3 = 512 + 160;
  // masses 0.5 / 0.3 / 0.2 at increasing frequencies
  spec.samples[b1] = std::sqrt(0.5 / dw);
  spec.samples[b2] = std::sqrt(0.3 / dw);
  spec.samples[b3] = std::sqrt(0.2 / dw);

  SUBCASE("0.8 needs the two leftmost spikes") {
    const BandSupport band = band_from_spectrum(spec, 0.8);
    CHECK(band.w_m == doctest::Approx(plan.freq.w(b1) - 0.5 * dw));
    CHECK(band.w_M == doctest::Approx(plan.freq.w(b2) + 0.5 * dw));
  }
  SUBCASE("0.5 is met by the single heaviest spike") {
    const BandSupport band = band_from_spectrum(spec, 0.5);
    CHECK(band.w_m == doctest::Approx(plan.freq.w(b1) - 0.5 * dw));
    CHECK(band.w_M == doctest::Approx(plan.freq.w(b1) + 0.5 * dw));
  }
  SUBCASE("equal-width candidates resolve to the lower edge") {
    ComplexSpectrum two{plan.freq, std::vector<std::complex<double>>(1024, 0.0)};
    two.samples[b1] = std::sqrt(0.5 / dw);
    two.samples[b3] = std::sqrt(0.5 / dw);
    const BandSupport band = band_from_spectrum(two, 0.5);
    CHECK(band.w_m == doctest::Approx(plan.freq.w(b1) - 0.5 * dw));
    CHECK(band.w_M == doctest::Approx(plan.freq.w(b1) + 0.5 * dw));
  }
}

TEST_CASE("band_from_spectrum matches a brute-force reference on smooth spectra") {
  const TransformPlan plan = TransformPlan::centered(1.0 / 16.0, 1024);
  const RealSeries psi = realize(morlet_family(), plan);
  const ComplexSpectrum spec = analyze(psi, plan);
  for (double frac : {0.9, 0.99, 0.999}) {
    const BandSupport got = band_from_spectrum(spec, frac);
    const BandSupport want = brute_force_band(spec, frac);
    CHECK(got.w_m == doctest::Approx(want.w_m));
    CHECK(got.w_M == doctest::Approx(want.w_M));
    CHECK(band_energy_fraction(spec, got) >= frac - 1e-12);
  }
}

TEST_CASE("band_from_spectrum is monotone in the energy fraction") {
  const TransformPlan plan = TransformPlan::centered(1.0 / 16.0, 1024);
  const ComplexSpectrum spec = analyze(realize(morlet_family(), plan), plan);
  BandSupport prev = band_from_spectrum(spec, 0.5);
  for (double frac : {0.8, 0.9, 0.99, 0.999, 1.0}) {
    const BandSupport cur = band_from_spectrum(spec, frac);
    CHECK(cur.w_m <= prev.w_m + 1e-12);
    CHECK(cur.w_M >= prev.w_M - 1e-12);
    prev = cur;
  }
}

TEST_CASE("band_from_spectrum on the compact families at fraction 1") {
  const TransformPlan plan = TransformPlan::centered(1.0 / 16.0, 1024);
  const double dw = plan.freq.dw;

  SUBCASE("unit gates give [pi, 2pi] within one grid step") {
    ComplexSpectrum spec{plan.freq, std::vector<std::complex<double>>(1024)};
    for (std::size_t m = 0; m < 1024; ++m) spec.samples[m] = shannon_spectrum(plan.freq.w(m));
    const BandSupport band = band_from_spectrum(spec, 1.0);
    CHECK(std::abs(band.w_m - pi) <= dw);
    CHECK(std::abs(band.w_M - 2.0 * pi) <= dw);
  }
  SUBCASE("tapered band gives [2pi/3, 8pi/3] within one grid step") {
    ComplexSpectrum spec{plan.freq, std::vector<std::complex<double>>(1024)};
    for (std::size_t m = 0; m < 1024; ++m) spec.samples[m] = meyer_spectrum(plan.freq.w(m));
    const BandSupport band = band_from_spectrum(spec, 1.0);
    CHECK(std::abs(band.w_m - 2.0 * pi / 3.0) <= dw);
    CHECK(std::abs(band.w_M - 8.0 * pi / 3.0) <= dw);
  }
}

TEST_CASE("band_from_spectrum centers the Morlet band near its carrier") {
  const TransformPlan plan = TransformPlan::centered(1.0 / 16.0, 1024);
  const ComplexSpectrum spec = analyze(realize(morlet_family(), plan), plan);
  const BandSupport band = band_from_spectrum(spec, 0.999);
  const double w0 = morlet_w0();
  CHECK(band.w_m < w0);
  CHECK(band.w_M > w0);
  // The Gaussian falls symmetrically about w0; the discrete window can be off
  // by a couple of bins.
  CHECK(std::abs((band.w_M - w0) - (w0 - band.w_m)) <= 3.0 * plan.freq.dw);
}

TEST_CASE("band_from_spectrum error paths") {
  const TransformPlan plan = TransformPlan::centered(1.0 / 16.0, 64);
  ComplexSpectrum zero{plan.freq, std::vector<std::complex<double>>(64, 0.0)};
  CHECK_THROWS_WITH_AS(band_from_spectrum(zero, 0.999), "no spectral content",
                       std::runtime_error);
  ComplexSpectrum ok{plan.freq, std::vector<std::complex<double>>(64, 1.0)};
  CHECK_THROWS_AS(band_from_spectrum(ok, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(band_from_spectrum(ok, 1.5), std::invalid_argument);
}
