#include "kotwav/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kotwav {

namespace {

void check_band(const BandSupport& band) {
  if (!(band.w_m >= 0.0) || !(band.w_m < band.w_M))
    throw std::invalid_argument("band requires 0 <= w_m < w_M");
}

}  // namespace

bool prop1_orthogonality(const BandSupport& band) {
  check_band(band);
  return band.w_M <= 3.0 * band.w_m * (1.0 + 1e-12);
}

std::optional<BandSupport> overlap_interval(const BandSupport& band) {
  if (prop1_orthogonality(band)) return std::nullopt;
  return BandSupport{band.w_m, 0.5 * (band.w_M - band.w_m)};
}

std::optional<BandSupport> adjacent_channel_overlap(const BandSupport& band) {
  check_band(band);
  if (band.w_M <= 2.0 * band.w_m * (1.0 + 1e-12)) return std::nullopt;
  return BandSupport{2.0 * band.w_m, band.w_M};
}

std::vector<BankChannel> build_bank(const BandSupport& base, int levels, double nyquist_w) {
  check_band(base);
  if (levels < 1) throw std::invalid_argument("levels must be >= 1");
  std::vector<BankChannel> bank;
  bank.reserve(levels);
  for (int j = 0; j < levels; ++j) {
    // ldexp keeps dyadic scaling exact, which is what makes Q constant to the
    // last bit and FDM edges shared exactly.
    const double lo = std::ldexp(base.w_m, j);
    const double hi = std::ldexp(base.w_M, j);
    if (hi > nyquist_w * (1.0 + 1e-12))
      throw std::range_error("bank level " + std::to_string(j) + " exceeds Nyquist");
    BankChannel ch;
    ch.level = j;
    ch.support = BandSupport{lo, hi};
    ch.q_factor = (0.5 * (lo + hi)) / (hi - lo);
    bank.push_back(ch);
  }
  return bank;
}

std::vector<BandSupport> fdm_bank(const BandSupport& base, int levels, double nyquist_w) {
  check_band(base);
  if (levels < 1) throw std::invalid_argument("levels must be >= 1");
  const double lo0 = std::max(base.w_m, 0.5 * base.w_M);
  std::vector<BandSupport> bands;
  bands.reserve(levels);
  for (int j = 0; j < levels; ++j) {
    const double hi = std::ldexp(base.w_M, j);
    if (hi > nyquist_w * (1.0 + 1e-12))
      throw std::range_error("bank level " + std::to_string(j) + " exceeds Nyquist");
    bands.push_back(BandSupport{std::ldexp(lo0, j), hi});
  }
  return bands;
}

// --- Gram matrix ----------------------------------------------------------------

double GramMatrix::max_off_diagonal() const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (i != j) m = std::max(m, std::abs(at(i, j)));
  return m;
}

namespace {

// 16-point Gauss-Legendre nodes (positive half) and weights on [-1, 1].
constexpr double gl_x[8] = {
    0.0950125098376374401853,  0.2816035507792589132304,
    0.4580167776572273863424,  0.6178762444026437484467,
    0.7554044083550030338951,  0.8656312023878317438805,
    0.9445750230732325760780,  0.9894009349916499325962};
constexpr double gl_w[8] = {
    0.1894506104550684962854,  0.1826034150449235888667,
    0.1691565193950025381893,  0.1495959888165767320815,
    0.1246289712555338720524,  0.0951585116824927848099,
    0.0622535239386478928628,  0.0271524594117540948518};

// integral over [lo, hi] of f, one 16-point panel.
template <typename F>
std::complex<double> gl_panel(const F& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  std::complex<double> acc = 0.0;
  for (int i = 0; i < 8; ++i) {
    acc += gl_w[i] * (f(c - h * gl_x[i]) + f(c + h * gl_x[i]));
  }
  return h * acc;
}

// Piecewise integration between sorted breakpoints, each piece subdivided
// enough for the e^{-jw db} oscillation.
template <typename F>
std::complex<double> integrate_pieces(const F& f, const std::vector<double>& edges,
                                      double osc_rate) {
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    if (!(hi > lo)) continue;
    const int panels = std::max(4, static_cast<int>(std::ceil((hi - lo) * (1.0 + osc_rate) * 2.0)));
    const double step = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) acc += gl_panel(f, lo + p * step, lo + (p + 1) * step);
  }
  return acc;
}

std::vector<double> scaled_edges(const WaveletFamily& family, double scale_up) {
  // Positive-side support edges and interior breakpoints of Psi(w / scale_up).
  std::vector<double> e;
  for (double bp : family.spectrum_breakpoints) e.push_back(bp * scale_up);
  return e;
}

}  // namespace

GramMatrix gram_matrix(const WaveletFamily& family, const std::vector<int>& scales,
                       const std::vector<int>& shifts, const TransformPlan& plan) {
  if (family.kind != FamilyKind::spectral)
    throw std::invalid_argument("gram_matrix requires a spectral family");
  if (!family.band) throw std::invalid_argument("gram_matrix requires a compact band");

  GramMatrix g;
  for (int s : scales)
    for (int k : shifts) g.index.push_back(GramIndex{s, k});
  const std::size_t n = g.index.size();
  g.entries.assign(n * n, 0.0);

  const double nyq = plan.time.nyquist_w();
  for (int s : scales) {
    if (std::ldexp(family.band->w_M, s) > nyq * (1.0 + 1e-12))
      throw std::range_error("gram scale " + std::to_string(s) + " exceeds Nyquist");
  }

  // Mother norm^2 = (1/pi) * integral_0^inf |Psi|^2, used to normalise atoms.
  std::vector<double> mother_edges = scaled_edges(family, 1.0);
  const auto& fn = family.spectrum;
  const double norm2 =
      integrate_pieces([&](double w) -> std::complex<double> { return std::norm(fn(w)); },
                       mother_edges, 0.0)
          .real() /
      pi;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const GramIndex& gi = g.index[i];
      const GramIndex& gj = g.index[j];
      // a = 2^-scale; atom spectrum sqrt(a) Psi(a w) e^{-jwb}, b = shift * a.
      const double ai = std::ldexp(1.0, -gi.scale);
      const double aj = std::ldexp(1.0, -gj.scale);
      const double db = gi.shift * ai - gj.shift * aj;

      // Union of both atoms' breakpoints restricted to the common support.
      std::vector<double> edges = scaled_edges(family, 1.0 / ai);
      for (double e : scaled_edges(family, 1.0 / aj)) edges.push_back(e);
      std::sort(edges.begin(), edges.end());
      const double lo = std::max(family.band->w_m / ai, family.band->w_m / aj);
      const double hi = std::min(family.band->w_M / ai, family.band->w_M / aj);
      std::vector<double> clipped{lo};
      for (double e : edges)
        if (e > lo && e < hi) clipped.push_back(e);
      clipped.push_back(hi);

      double entry = 0.0;
      if (hi > lo) {
        const auto integrand = [&](double w) -> std::complex<double> {
          return fn(ai * w) * std::conj(fn(aj * w)) * std::polar(1.0, -w * db);
        };
        // <f, g> = 2 Re (1/2pi) int_0^inf F conj(G), for real f, g.
        const std::complex<double> ip = integrate_pieces(integrand, clipped, std::abs(db));
        entry = std::sqrt(ai * aj) * ip.real() / pi / norm2;
      }
      g.entries[i * n + j] = entry;
      g.entries[j * n + i] = entry;
    }
  }
  return g;
}

// --- Band tables -------------------------------------------------------------------

namespace {

void normalize(long long& num, long long& den) {
  if (den < 0) {
    den = -den;
    num = -num;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

}  // namespace

double PiRational::value() const { return static_cast<double>(num) * pi / static_cast<double>(den); }

std::string PiRational::text() const {
  if (num == 0) return "0";
  std::string s;
  if (num == 1)
    s = "pi";
  else if (num == -1)
    s = "-pi";
  else
    s = std::to_string(num) + "pi";
  if (den != 1) s += "/" + std::to_string(den);
  return s;
}

PiRational PiRational::operator*(long long k) const {
  long long n2 = num * k, d2 = den;
  normalize(n2, d2);
  return PiRational{n2, d2};
}

PiRational PiRational::operator-(const PiRational& o) const {
  long long n2 = num * o.den - o.num * den, d2 = den * o.den;
  normalize(n2, d2);
  return PiRational{n2, d2};
}

std::vector<MeyerTableRow> meyer_band_table(int levels) {
  if (levels < 1) throw std::invalid_argument("levels must be >= 1");
  const PiRational lo{2, 3}, hi{8, 3};
  std::vector<MeyerTableRow> rows;
  rows.reserve(levels);
  for (int j = 0; j < levels; ++j) {
    const long long p = 1LL << j;
    MeyerTableRow r;
    r.level = j;
    r.support_lo = lo * p;
    r.support_hi = hi * p;
    r.bandwidth = r.support_hi - r.support_lo;
    r.ref_freq = PiRational{4, 3} * p;  // spectral peak, also the lower FDM edge
    r.fdm_lo = PiRational{4, 3} * p;
    r.fdm_hi = hi * p;
    r.fdm_bandwidth = r.fdm_hi - r.fdm_lo;
    rows.push_back(r);
  }
  return rows;
}

double AlphaPi::value(double alpha) const {
  return static_cast<double>(mult) * pi * (1.0 + alpha_coef * alpha);
}

namespace {

std::string alpha_paren(int coef) {
  if (coef == 0) return "";
  if (coef == 1) return "(1+a)";
  if (coef == -1) return "(1-a)";
  if (coef > 0) return "(1+" + std::to_string(coef) + "a)";
  return "(1-" + std::to_string(-coef) + "a)";
}

std::string pi_mult_text(long long mult) {
  if (mult == 1) return "pi";
  return std::to_string(mult) + "pi";
}

}  // namespace

std::string AlphaPi::range_text() const { return pi_mult_text(mult) + alpha_paren(alpha_coef); }

std::string AlphaPi::bandwidth_text() const { return alpha_paren(alpha_coef) + pi_mult_text(mult); }

std::vector<DeOliveiraTableRow> deoliveira_band_table(int levels) {
  if (levels < 1) throw std::invalid_argument("levels must be >= 1");
  std::vector<DeOliveiraTableRow> rows;
  rows.reserve(levels);
  for (int j = 0; j < levels; ++j) {
    const long long p = 1LL << j;
    DeOliveiraTableRow r;
    r.level = j;
    r.support_lo = AlphaPi{p, -1};
    r.support_hi = AlphaPi{2 * p, +1};
    r.printed_bandwidth = AlphaPi{p, +2};   // as the table states it
    r.derived_bandwidth = AlphaPi{p, +3};   // support_hi - support_lo
    r.fdm_lo = AlphaPi{p, +1};
    r.fdm_hi = AlphaPi{2 * p, +1};
    r.fdm_bandwidth = AlphaPi{p, +1};
    rows.push_back(r);
  }
  return rows;
}

}  // namespace kotwav
