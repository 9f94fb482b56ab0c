#include "kotwav/wavelets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kotwav {

double nu_ramp(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x;
}

double cas(double x) { return std::cos(x) + std::sin(x); }

std::complex<double> shannon_spectrum(double w) {
  const double a = std::abs(w);
  return (a >= pi && a <= 2.0 * pi) ? std::complex<double>(1.0, 0.0)
                                    : std::complex<double>(0.0, 0.0);
}

std::complex<double> meyer_spectrum(double w) {
  const double a = std::abs(w);
  const double amp = 1.0 / std::sqrt(2.0 * pi);
  double mag;
  if (a >= 2.0 * pi / 3.0 && a <= 4.0 * pi / 3.0)
    mag = amp * std::sin(0.5 * pi * nu_ramp(3.0 * a / (2.0 * pi) - 1.0));
  else if (a > 4.0 * pi / 3.0 && a <= 8.0 * pi / 3.0)
    mag = amp * std::cos(0.5 * pi * nu_ramp(3.0 * a / (4.0 * pi) - 1.0));
  else
    return 0.0;
  return mag * std::polar(1.0, -0.5 * w);
}

double morlet_w0() { return pi * std::sqrt(2.0 / std::log(2.0)); }

double morlet_time(double t) { return std::exp(-t * t) * std::cos(morlet_w0() * t); }

std::complex<double> meyer_equivalent_spectrum(double w) {
  const double a = std::abs(w);
  if (a < 4.0 * pi / 3.0 || a > 8.0 * pi / 3.0) return 0.0;
  const double amp = 1.0 / std::sqrt(2.0 * pi);
  const double mag = amp * std::cos(0.5 * pi * nu_ramp(3.0 * a / (4.0 * pi) - 1.0));
  // cas phase on |w|: the one-sided description extends evenly so the
  // full-line spectrum stays Hermitian (the time wavelet is real).
  return mag * cas(0.5 * a);
}

std::complex<double> deoliveira_equivalent_spectrum(double w, double alpha) {
  if (!(alpha >= 0.0) || alpha > 1.0 / 3.0)
    throw std::invalid_argument("alpha must lie in [0, 1/3]");
  const double a = std::abs(w);
  const double amp = 2.0 / std::sqrt(2.0 * pi);
  if (alpha == 0.0) return (a >= pi && a <= 2.0 * pi) ? amp : 0.0;
  if (a < pi * (1.0 + alpha)) return 0.0;
  if (a <= 2.0 * pi * (1.0 - alpha)) return amp;
  if (a <= 2.0 * pi * (1.0 + alpha))
    return amp * std::cos((a - 2.0 * pi * (1.0 - alpha)) / (8.0 * alpha));
  return 0.0;
}

// --- Daubechies cascade -------------------------------------------------------

std::vector<double> load_taps(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open taps file: " + path);
  std::vector<double> taps;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double v;
    if (ss >> v) {
      std::string rest;
      if (ss >> rest)
        throw std::invalid_argument("taps file line " + std::to_string(lineno) +
                                    ": expected one value per line");
      taps.push_back(v);
    } else {
      ss.clear();
      std::string rest;
      if (ss >> rest)
        throw std::invalid_argument("taps file line " + std::to_string(lineno) +
                                    ": not a number");
    }
  }
  return taps;
}

void validate_taps(const std::vector<double>& h) {
  const std::size_t n = h.size();
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("tap count must be even and >= 2");
  double sum = 0.0;
  for (double v : h) sum += v;
  if (std::abs(sum - std::sqrt(2.0)) > 1e-10)
    throw std::invalid_argument("taps do not sum to sqrt(2)");
  for (std::size_t l = 0; 2 * l < n; ++l) {
    double acc = 0.0;
    for (std::size_t k = 2 * l; k < n; ++k) acc += h[k] * h[k - 2 * l];
    const double want = (l == 0) ? 1.0 : 0.0;
    if (std::abs(acc - want) > 1e-10)
      throw std::invalid_argument("taps are not even-shift orthonormal");
  }
}

namespace {

// Solve A x = b by Gaussian elimination with partial pivoting; A is tiny
// (tap count - 1 square).
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    if (a[col][col] == 0.0) throw std::runtime_error("singular refinement system");
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t ri = n; ri-- > 0;) {
    double acc = b[ri];
    for (std::size_t c = ri + 1; c < n; ++c) acc -= a[ri][c] * x[c];
    x[ri] = acc / a[ri][ri];
  }
  return x;
}

}  // namespace

CascadeResult daubechies_cascade(const std::vector<double>& h, int levels) {
  validate_taps(h);
  if (levels < 1 || levels > 24) throw std::invalid_argument("levels must lie in [1, 24]");
  const int taps = static_cast<int>(h.size());
  const double root2 = std::sqrt(2.0);

  // phi at the integers: the refinement fixed point phi(i) = sqrt(2) * sum_k
  // h_k phi(2i - k), i = 0..taps-2 (phi(taps-1) = 0), pinned by sum phi = 1.
  const int ni = taps - 1;
  std::vector<std::vector<double>> a(ni, std::vector<double>(ni, 0.0));
  std::vector<double> b(ni, 0.0);
  for (int i = 0; i < ni; ++i) {
    for (int k = 0; k < ni; ++k) {
      const int tap = 2 * i - k;
      double t = (tap >= 0 && tap < taps) ? root2 * h[tap] : 0.0;
      if (i == k) t -= 1.0;
      a[i][k] = t;
    }
  }
  // Replace the last equation with the normalisation row; the dropped row is
  // linearly dependent on the rest at the lambda = 1 eigenvalue.
  for (int k = 0; k < ni; ++k) a[ni - 1][k] = 1.0;
  b[ni - 1] = 1.0;
  const std::vector<double> phi0 = solve_dense(std::move(a), std::move(b));

  // Dyadic refinement: values at m * 2^-j from values at 2^-(j-1).
  std::vector<double> phi(phi0.begin(), phi0.end());
  phi.push_back(0.0);  // phi(taps - 1)
  for (int j = 1; j <= levels; ++j) {
    const long stride = 1L << (j - 1);
    const long m_max = static_cast<long>(taps - 1) << j;
    std::vector<double> next(m_max + 1, 0.0);
    for (long m = 0; m <= m_max; ++m) {
      double acc = 0.0;
      for (int k = 0; k < taps; ++k) {
        const long idx = m - k * stride;
        if (idx >= 0 && idx <= (static_cast<long>(taps - 1) << (j - 1)))
          acc += h[k] * phi[idx];
      }
      next[m] = root2 * acc;
    }
    phi = std::move(next);
  }

  // psi(t) = sqrt(2) * sum_k g_k phi(2t - k), g_k = (-1)^k h_{taps-1-k}.
  const long m_max = static_cast<long>(taps - 1) << levels;
  std::vector<double> psi(m_max + 1, 0.0);
  for (long m = 0; m <= m_max; ++m) {
    double acc = 0.0;
    for (int k = 0; k < taps; ++k) {
      const double g = ((k % 2 == 0) ? 1.0 : -1.0) * h[taps - 1 - k];
      const long idx = 2 * m - (static_cast<long>(k) << levels);
      if (idx >= 0 && idx <= m_max) acc += g * phi[idx];
    }
    psi[m] = root2 * acc;
  }

  const double dx = std::ldexp(1.0, -levels);
  UniformTimeGrid grid{0.0, dx, static_cast<std::size_t>(m_max + 1)};
  return CascadeResult{RealSeries{grid, std::move(phi)}, RealSeries{grid, std::move(psi)}};
}

// --- Families ------------------------------------------------------------------

WaveletFamily shannon_family() {
  WaveletFamily f;
  f.name = "shannon";
  f.kind = FamilyKind::spectral;
  f.spectrum = [](double w) { return shannon_spectrum(w); };
  f.spectrum_jumps = {pi, 2.0 * pi};
  f.spectrum_breakpoints = {pi, 2.0 * pi};
  f.band = BandSupport{pi, 2.0 * pi};
  return f;
}

WaveletFamily meyer_family() {
  WaveletFamily f;
  f.name = "meyer";
  f.kind = FamilyKind::spectral;
  f.spectrum = [](double w) { return meyer_spectrum(w); };
  f.spectrum_breakpoints = {2.0 * pi / 3.0, 4.0 * pi / 3.0, 8.0 * pi / 3.0};
  f.band = BandSupport{2.0 * pi / 3.0, 8.0 * pi / 3.0};
  return f;
}

WaveletFamily morlet_family() {
  WaveletFamily f;
  f.name = "morlet";
  f.kind = FamilyKind::temporal;
  f.time_form = [](double t) { return morlet_time(t); };
  f.default_energy_fraction = 0.999;
  return f;
}

WaveletFamily meyer_equivalent_family() {
  WaveletFamily f;
  f.name = "meyer_equivalent";
  f.kind = FamilyKind::spectral;
  f.spectrum = [](double w) { return meyer_equivalent_spectrum(w); };
  f.spectrum_jumps = {4.0 * pi / 3.0};
  f.spectrum_breakpoints = {4.0 * pi / 3.0, 8.0 * pi / 3.0};
  f.band = BandSupport{4.0 * pi / 3.0, 8.0 * pi / 3.0};
  return f;
}

WaveletFamily deoliveira_equivalent_family(double alpha) {
  if (!(alpha >= 0.0) || alpha > 1.0 / 3.0)
    throw std::invalid_argument("alpha must lie in [0, 1/3]");
  WaveletFamily f;
  f.name = "deoliveira_equivalent";
  f.kind = FamilyKind::spectral;
  f.alpha = alpha;
  f.spectrum = [alpha](double w) { return deoliveira_equivalent_spectrum(w, alpha); };
  if (alpha == 0.0) {
    f.spectrum_jumps = {pi, 2.0 * pi};
    f.spectrum_breakpoints = {pi, 2.0 * pi};
    f.band = BandSupport{pi, 2.0 * pi};
  } else {
    f.spectrum_jumps = {pi * (1.0 + alpha)};
    f.spectrum_breakpoints = {pi * (1.0 + alpha), 2.0 * pi * (1.0 - alpha),
                              2.0 * pi * (1.0 + alpha)};
    f.band = BandSupport{pi * (1.0 + alpha), 2.0 * pi * (1.0 + alpha)};
  }
  return f;
}

WaveletFamily daubechies_family(std::vector<double> taps) {
  validate_taps(taps);
  WaveletFamily f;
  f.name = "daubechies";
  f.kind = FamilyKind::cascade;
  f.taps = std::move(taps);
  f.default_energy_fraction = 0.999;
  return f;
}

WaveletFamily make_family(const std::string& name, double alpha, const std::string& taps_path) {
  if (name == "shannon") return shannon_family();
  if (name == "meyer") return meyer_family();
  if (name == "morlet") return morlet_family();
  if (name == "meyer_equivalent" || name == "meyer_equiv") return meyer_equivalent_family();
  if (name == "deoliveira_equivalent" || name == "deoliveira_equiv")
    return deoliveira_equivalent_family(alpha);
  if (name == "daubechies") {
    if (taps_path.empty()) throw std::invalid_argument("daubechies requires a taps file");
    return daubechies_family(load_taps(taps_path));
  }
  throw std::invalid_argument("unknown family: " + name);
}

namespace {

constexpr int cascade_levels = 10;

RealSeries realize_cascade(const WaveletFamily& family, const TransformPlan& plan) {
  const CascadeResult cas = daubechies_cascade(family.taps, cascade_levels);
  const double dx = cas.wavelet.grid.dt;
  const double ratio = plan.time.dt / dx;
  const double r = std::round(ratio);
  if (!(r >= 1.0) || ratio != r)
    throw std::invalid_argument("grid step must be a multiple of the cascade step 2^-10");
  const double t_hi = cas.wavelet.grid.t(cas.wavelet.grid.n - 1);

  RealSeries out{plan.time, std::vector<double>(plan.time.n, 0.0)};
  for (std::size_t k = 0; k < plan.time.n; ++k) {
    const double t = plan.time.t(k);
    if (t < 0.0 || t > t_hi) continue;
    const long m = std::lround(t / dx);
    out.samples[k] = cas.wavelet.samples[m];
  }
  return out;
}

}  // namespace

RealSeries realize(const WaveletFamily& family, const TransformPlan& plan) {
  switch (family.kind) {
    case FamilyKind::spectral:
      return synthesize(family.spectrum, plan, family.spectrum_jumps);
    case FamilyKind::temporal: {
      RealSeries out{plan.time, std::vector<double>(plan.time.n)};
      for (std::size_t k = 0; k < plan.time.n; ++k) out.samples[k] = family.time_form(plan.time.t(k));
      return out;
    }
    case FamilyKind::cascade:
      return realize_cascade(family, plan);
  }
  throw std::logic_error("unreachable family kind");
}

BandSupport family_band(const WaveletFamily& family, const TransformPlan& plan,
                        double energy_fraction) {
  if (family.band && energy_fraction <= 0.0) return *family.band;
  const double frac = energy_fraction > 0.0 ? energy_fraction : family.default_energy_fraction;
  if (family.band && frac >= 1.0) return *family.band;
  const RealSeries psi = realize(family, plan);
  const ComplexSpectrum spec = analyze(psi, plan);
  return band_from_spectrum(spec, frac);
}

}  // namespace kotwav
