#include "kotwav/demod.hpp"

#include <cmath>
#include <stdexcept>

namespace kotwav {

namespace {

// Gate a spectrum to |w| <= cutoff. The cutoff bin itself is kept (relative
// 1e-12 slack), so a band edge landing exactly on a bin is deterministic.
void gate_in_place(ComplexSpectrum& s, double cutoff_w) {
  const double lim = cutoff_w * (1.0 + 1e-12);
  for (std::size_t m = 0; m < s.grid.n; ++m)
    if (std::abs(s.grid.w(m)) > lim) s.samples[m] = 0.0;
}

// The DFT of a real series is Hermitian only to rounding; when a component
// vanishes identically (quadrature of a symmetric band, say) that noise is all
// that is left and the inverse's reality check would reject it. Projecting
// onto exact symmetry costs nothing real inputs did not already have.
void make_hermitian(ComplexSpectrum& s) {
  const std::size_t n = s.grid.n;
  s.samples[0] = s.samples[0].real();  // unpaired -Nyquist bin
  for (std::size_t m = 1; m < n - m; ++m) {
    const std::complex<double> avg = 0.5 * (s.samples[m] + std::conj(s.samples[n - m]));
    s.samples[m] = avg;
    s.samples[n - m] = std::conj(avg);
  }
  s.samples[n / 2] = s.samples[n / 2].real();  // w = 0
}

// Spectra of 2x(t)cos(w_c t) and 2x(t)sin(w_c t), low-pass gated: exactly the
// shifted-and-summed baseband spectra including the gain of 2.
std::pair<ComplexSpectrum, ComplexSpectrum> mixed_gated(const RealSeries& x,
                                                        const TransformPlan& plan,
                                                        const BandSupport& band,
                                                        double carrier_w) {
  RealSeries mc{x.grid, std::vector<double>(x.grid.n)};
  RealSeries ms{x.grid, std::vector<double>(x.grid.n)};
  for (std::size_t k = 0; k < x.grid.n; ++k) {
    const double t = x.grid.t(k);
    mc.samples[k] = 2.0 * x.samples[k] * std::cos(carrier_w * t);
    ms.samples[k] = 2.0 * x.samples[k] * std::sin(carrier_w * t);
  }
  ComplexSpectrum sc = analyze(mc, plan);
  ComplexSpectrum ss = analyze(ms, plan);
  gate_in_place(sc, band.cutoff_w());
  gate_in_place(ss, band.cutoff_w());
  make_hermitian(sc);
  make_hermitian(ss);
  return {std::move(sc), std::move(ss)};
}

double out_of_band_fraction(const ComplexSpectrum& spec, const BandSupport& band) {
  double total = 0.0, outside = 0.0;
  for (std::size_t m = 0; m < spec.grid.n; ++m) {
    const double a = std::abs(spec.grid.w(m));
    const double e = std::norm(spec.samples[m]);
    total += e;
    const double slack = 1e-12 * band.w_M;
    if (a < band.w_m - slack || a > band.w_M + slack) outside += e;
  }
  return total > 0.0 ? outside / total : 0.0;
}

}  // namespace

std::pair<ComplexSpectrum, ComplexSpectrum> baseband_spectra(const ComplexSpectrum& x,
                                                             const BandSupport& band,
                                                             double carrier_w) {
  if (!(carrier_w > 0.0)) throw std::range_error("carrier must be positive");
  const std::size_t n = x.grid.n;
  const double dt = 2.0 * pi / (static_cast<double>(n) * x.grid.dw);
  TransformPlan plan = TransformPlan::centered(dt, n);
  plan.freq = x.grid;  // same dual grid up to rounding of w_start
  const RealSeries xt = synthesize(x, plan);
  return mixed_gated(xt, plan, band, carrier_w);
}

DemodResult demodulate(const RealSeries& psi, const BandSupport& band, double carrier_w) {
  const TransformPlan plan = TransformPlan::for_grid(psi.grid);
  const double nyq = psi.grid.nyquist_w();
  if (!(carrier_w > 0.0) || !(carrier_w < nyq))
    throw std::range_error("carrier must lie in (0, Nyquist)");

  DemodResult res;
  res.out_of_band_fraction = out_of_band_fraction(analyze(psi, plan), band);
  if (res.out_of_band_fraction >= 1e-3)
    res.warnings.push_back("out-of-band energy fraction " +
                           std::to_string(res.out_of_band_fraction) +
                           " exceeds 1e-3; band limit assumption is violated");

  auto [sc, ss] = mixed_gated(psi, plan, band, carrier_w);
  res.pair.s_c = synthesize(sc, plan);
  res.pair.s_s = synthesize(ss, plan);
  res.pair.carrier_w = carrier_w;
  res.pair.cutoff_w = band.cutoff_w();
  return res;
}

RealSpectrum envelope_spectrum(const ComplexSpectrum& s_c, const ComplexSpectrum& s_s) {
  if (!(s_c.grid == s_s.grid)) throw std::invalid_argument("spectrum grids differ");
  RealSpectrum out{s_c.grid, std::vector<double>(s_c.grid.n)};
  for (std::size_t m = 0; m < s_c.grid.n; ++m)
    out.samples[m] = std::hypot(std::abs(s_c.samples[m]), std::abs(s_s.samples[m]));
  return out;
}

EnvelopePhase envelope_phase(const BasebandPair& pair) {
  if (!(pair.s_c.grid == pair.s_s.grid)) throw std::invalid_argument("series grids differ");
  const std::size_t n = pair.s_c.grid.n;
  EnvelopePhase out{RealSeries{pair.s_c.grid, std::vector<double>(n)},
                    RealSeries{pair.s_c.grid, std::vector<double>(n)}};
  double peak = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    out.envelope.samples[k] = std::hypot(pair.s_c.samples[k], pair.s_s.samples[k]);
    peak = std::max(peak, out.envelope.samples[k]);
  }
  const double eps_env = 1e-9 * peak;
  for (std::size_t k = 0; k < n; ++k) {
    if (out.envelope.samples[k] < eps_env) {
      out.phase.samples[k] = 0.0;
      continue;
    }
    double th = std::atan2(-pair.s_s.samples[k], pair.s_c.samples[k]);
    if (th == -pi) th = pi;  // wrap to (-pi, pi]
    out.phase.samples[k] = th;
  }
  return out;
}

RealSeries reconstruct(const BasebandPair& pair) {
  if (!(pair.s_c.grid == pair.s_s.grid)) throw std::invalid_argument("series grids differ");
  const std::size_t n = pair.s_c.grid.n;
  RealSeries out{pair.s_c.grid, std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const double t = pair.s_c.grid.t(k);
    out.samples[k] = pair.s_c.samples[k] * std::cos(pair.carrier_w * t) +
                     pair.s_s.samples[k] * std::sin(pair.carrier_w * t);
  }
  return out;
}

namespace {

double fraction_above(const ComplexSpectrum& s, double cutoff_w) {
  const double lim = cutoff_w * (1.0 + 1e-12);
  double total = 0.0, above = 0.0;
  for (std::size_t m = 0; m < s.grid.n; ++m) {
    const double e = std::norm(s.samples[m]);
    total += e;
    if (std::abs(s.grid.w(m)) > lim) above += e;
  }
  return total > 0.0 ? above / total : 0.0;
}

}  // namespace

BandlimitReport verify_bandlimit(const BasebandPair& pair) {
  const TransformPlan plan = TransformPlan::for_grid(pair.s_c.grid);
  BandlimitReport rep;
  rep.cutoff_w = pair.cutoff_w;
  rep.s_c_fraction = fraction_above(analyze(pair.s_c, plan), pair.cutoff_w);
  rep.s_s_fraction = fraction_above(analyze(pair.s_s, plan), pair.cutoff_w);
  return rep;
}

}  // namespace kotwav
