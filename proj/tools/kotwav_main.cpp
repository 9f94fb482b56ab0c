#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kotwav/demod.hpp"
#include "kotwav/filterbank.hpp"
#include "kotwav/transform.hpp"
#include "kotwav/types.hpp"
#include "kotwav/wavelets.hpp"

namespace {

using namespace kotwav;

// All floats go through one formatter so identical runs emit identical bytes.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_band(const BandSupport& b) {
  return "[" + fmt(b.w_m) + ", " + fmt(b.w_M) + "]";
}

struct Opts {
  std::string family = "shannon";
  double alpha = 0.0;
  std::string taps;
  int levels = 4;
  double fs = 16.0;
  std::size_t n = 1024;
  std::string carrier = "auto";
  std::string band;
  double energy_fraction = 0.0;  // <= 0 means the family default
  std::string in;
  std::string out;
  std::string format = "csv";
  std::vector<int> scales{0, 1};
  std::vector<int> shifts{-2, -1, 0, 1, 2};
  bool grid_explicit = false;  // user pinned --fs or --n
  std::string cmdline;
};

void add_common(CLI::App* sub, Opts& o) {
  sub->add_option("--family", o.family, "wavelet family name");
  sub->add_option("--alpha", o.alpha, "roll-off factor for the flat-top family");
  sub->add_option("--taps", o.taps, "scaling filter taps file (daubechies)");
  sub->add_option("--levels", o.levels, "number of dyadic levels");
  sub->add_option("--fs", o.fs, "sample rate, samples/second")->check(CLI::PositiveNumber);
  sub->add_option("--n", o.n, "sample count (even)");
  sub->add_option("--carrier", o.carrier, "auto | midpoint | peak | <rad/s>");
  sub->add_option("--band", o.band, "explicit band lo:hi in rad/s");
  sub->add_option("--energy-fraction", o.energy_fraction, "band measurement fraction");
  sub->add_option("--in", o.in, "input CSV of (t, value) rows");
  sub->add_option("--out", o.out, "output path ('-' = stdout)");
  sub->add_option("--format", o.format, "csv | structured")
      ->check(CLI::IsMember({"csv", "structured"}));
  sub->add_option("--scales", o.scales, "gram scale indices")->delimiter(',');
  sub->add_option("--shifts", o.shifts, "gram shift indices")->delimiter(',');
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw std::invalid_argument("cannot open output: " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void provenance(std::ostream& os, const Opts& o, const TransformPlan* plan) {
  os << "# command: " << o.cmdline << "\n";
  if (plan) {
    os << "# grid: n = " << plan->time.n << ", dt = " << fmt(plan->time.dt)
       << ", t_start = " << fmt(plan->time.t_start) << ", dw = " << fmt(plan->freq.dw)
       << ", w_start = " << fmt(plan->freq.w_start) << "\n";
  } else {
    os << "# grid: symbolic (no Nyquist bound applied)\n";
  }
  os << "# convention: x(t) = (1/2pi) int X(w) e^{jwt} dw; floats %.12g\n";
}

bool parse_double_strict(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

BandSupport parse_band(const std::string& s) {
  const std::size_t colon = s.find(':');
  double lo = 0.0, hi = 0.0;
  if (colon == std::string::npos || !parse_double_strict(s.substr(0, colon), lo) ||
      !parse_double_strict(s.substr(colon + 1), hi) || !(lo >= 0.0) || !(lo < hi))
    throw std::invalid_argument("--band expects lo:hi with 0 <= lo < hi");
  return BandSupport{lo, hi};
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

RealSeries read_series_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open input: " + path);
  std::vector<double> ts, xs;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> cells = split_csv_row(line);
    if (cells.size() < 2) throw std::invalid_argument("input rows need t,value columns");
    double t = 0.0, x = 0.0;
    if (!parse_double_strict(cells[0], t) || !parse_double_strict(cells[1], x)) {
      if (ts.empty()) continue;  // header row
      throw std::invalid_argument("non-numeric cell in input row: " + line);
    }
    ts.push_back(t);
    xs.push_back(x);
  }
  if (ts.size() < 2) throw std::invalid_argument("input needs at least two samples");
  if (ts.size() % 2 != 0) throw std::invalid_argument("input sample count must be even");
  const double dt = ts[1] - ts[0];
  if (!(dt > 0.0)) throw std::invalid_argument("input time column must increase");
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double want = ts[0] + static_cast<double>(k) * dt;
    if (std::abs(ts[k] - want) > 1e-9 * std::max(1.0, std::abs(want)))
      throw std::invalid_argument("input time column is not uniform");
  }
  return RealSeries{UniformTimeGrid{ts[0], dt, ts.size()}, std::move(xs)};
}

WaveletFamily family_from(const Opts& o) { return make_family(o.family, o.alpha, o.taps); }

TransformPlan plan_from(const Opts& o) { return TransformPlan::centered(1.0 / o.fs, o.n); }

double peak_frequency(const ComplexSpectrum& spec) {
  double best = 0.0, w_at = 0.0;
  for (std::size_t m = 0; m < spec.grid.n; ++m) {
    const double w = spec.grid.w(m);
    if (w <= 0.0) continue;
    const double a = std::abs(spec.samples[m]);
    if (a > best) {
      best = a;
      w_at = w;
    }
  }
  if (best == 0.0) throw std::runtime_error("no spectral content");
  return w_at;
}

double pick_carrier(const Opts& o, const BandSupport& band, const ComplexSpectrum& spec,
                    std::string& mode_out) {
  if (o.carrier == "auto" || o.carrier == "midpoint") {
    mode_out = o.carrier;
    return band.midpoint();
  }
  if (o.carrier == "peak") {
    mode_out = "peak";
    return peak_frequency(spec);
  }
  double w = 0.0;
  if (!parse_double_strict(o.carrier, w))
    throw std::invalid_argument("--carrier expects auto, midpoint, peak, or a number");
  mode_out = "explicit";
  return w;
}

// --- subcommands ---------------------------------------------------------------

int cmd_synth(const Opts& o) {
  const WaveletFamily fam = family_from(o);
  const TransformPlan plan = plan_from(o);
  const RealSeries psi = realize(fam, plan);

  Output out(o.out);
  provenance(out.os(), o, &plan);
  out.os() << "t,psi\n";
  for (std::size_t k = 0; k < plan.time.n; ++k)
    out.os() << fmt(plan.time.t(k)) << "," << fmt(psi.samples[k]) << "\n";
  return 0;
}

int cmd_demod(const Opts& o) {
  TransformPlan plan{};
  RealSeries psi;
  std::string source;
  WaveletFamily fam;
  bool have_family = false;
  if (!o.in.empty()) {
    psi = read_series_csv(o.in);
    plan = TransformPlan::for_grid(psi.grid);
    source = "input = " + o.in;
  } else {
    fam = family_from(o);
    have_family = true;
    plan = plan_from(o);
    psi = realize(fam, plan);
    source = "family = " + fam.name;
  }

  const ComplexSpectrum spec = analyze(psi, plan);
  BandSupport band;
  if (!o.band.empty()) {
    band = parse_band(o.band);
  } else if (have_family) {
    band = family_band(fam, plan, o.energy_fraction);
  } else {
    band = band_from_spectrum(spec, o.energy_fraction > 0.0 ? o.energy_fraction : 0.999);
  }

  std::string carrier_mode;
  const double carrier_w = pick_carrier(o, band, spec, carrier_mode);

  const DemodResult res = demodulate(psi, band, carrier_w);
  const EnvelopePhase ep = envelope_phase(res.pair);
  const BandlimitReport rep = verify_bandlimit(res.pair);

  if (o.out.empty() || o.out == "-")
    throw std::invalid_argument("demod requires --out (a sidecar report is written next to it)");
  Output out(o.out);
  provenance(out.os(), o, &plan);
  out.os() << "t,s_c,s_s,envelope,phase\n";
  for (std::size_t k = 0; k < plan.time.n; ++k)
    out.os() << fmt(plan.time.t(k)) << "," << fmt(res.pair.s_c.samples[k]) << ","
             << fmt(res.pair.s_s.samples[k]) << "," << fmt(ep.envelope.samples[k]) << ","
             << fmt(ep.phase.samples[k]) << "\n";

  Output report(o.out + ".report");
  provenance(report.os(), o, &plan);
  report.os() << source << "\n"
              << "n = " << plan.time.n << "\n"
              << "dt = " << fmt(plan.time.dt) << "\n"
              << "band = " << fmt_band(band) << "\n"
              << "carrier_mode = " << carrier_mode << "\n"
              << "carrier_w = " << fmt(carrier_w) << "\n"
              << "cutoff_w = " << fmt(res.pair.cutoff_w) << "\n"
              << "out_of_band_fraction = " << fmt(res.out_of_band_fraction) << "\n"
              << "s_c_out_of_band = " << fmt(rep.s_c_fraction) << "\n"
              << "s_s_out_of_band = " << fmt(rep.s_s_fraction) << "\n";
  report.os() << "warnings = [";
  for (std::size_t i = 0; i < res.warnings.size(); ++i)
    report.os() << (i ? ", " : "") << res.warnings[i];
  report.os() << "]\n";
  return 0;
}

// The dyadic table is symbolic; the grid's Nyquist bound is applied only when
// the caller pins the grid explicitly.
int cmd_bank(const Opts& o) {
  const double nyq =
      o.grid_explicit ? pi * o.fs : std::numeric_limits<double>::infinity();

  Output out(o.out);
  std::ostream& os = out.os();
  const bool structured = o.format == "structured";

  if (o.family == "meyer") {
    const auto rows = meyer_band_table(o.levels);
    if (o.grid_explicit)
      (void)build_bank(BandSupport{rows[0].support_lo.value(), rows[0].support_hi.value()},
                       o.levels, nyq);
    provenance(os, o, nullptr);
    if (structured) {
      os << "family = meyer\nlevels = " << o.levels << "\n";
      for (const auto& r : rows) {
        const std::string p = "row" + std::to_string(r.level) + ".";
        os << p << "ref_freq = " << r.ref_freq.text() << " = " << fmt(r.ref_freq.value()) << "\n"
           << p << "support = [" << r.support_lo.text() << ", " << r.support_hi.text()
           << "] = " << fmt_band(BandSupport{r.support_lo.value(), r.support_hi.value()}) << "\n"
           << p << "bandwidth = " << r.bandwidth.text() << " = " << fmt(r.bandwidth.value())
           << "\n"
           << p << "fdm = [" << r.fdm_lo.text() << ", " << r.fdm_hi.text() << "] = "
           << fmt_band(BandSupport{r.fdm_lo.value(), r.fdm_hi.value()}) << "\n"
           << p << "fdm_bandwidth = " << r.fdm_bandwidth.text() << " = "
           << fmt(r.fdm_bandwidth.value()) << "\n";
      }
      return 0;
    }
    os << "level,ref_freq,support_lo,support_hi,bandwidth,fdm_lo,fdm_hi,fdm_bandwidth,"
          "ref_text,support_lo_text,support_hi_text,bandwidth_text,fdm_lo_text,fdm_hi_text,"
          "fdm_bandwidth_text\n";
    for (const auto& r : rows)
      os << r.level << "," << fmt(r.ref_freq.value()) << "," << fmt(r.support_lo.value()) << ","
         << fmt(r.support_hi.value()) << "," << fmt(r.bandwidth.value()) << ","
         << fmt(r.fdm_lo.value()) << "," << fmt(r.fdm_hi.value()) << ","
         << fmt(r.fdm_bandwidth.value()) << "," << r.ref_freq.text() << ","
         << r.support_lo.text() << "," << r.support_hi.text() << "," << r.bandwidth.text() << ","
         << r.fdm_lo.text() << "," << r.fdm_hi.text() << "," << r.fdm_bandwidth.text() << "\n";
    return 0;
  }

  if (o.family == "deoliveira_equivalent" || o.family == "deoliveira_equiv") {
    (void)deoliveira_equivalent_spectrum(0.0, o.alpha);  // validate alpha range
    const auto rows = deoliveira_band_table(o.levels);
    if (o.grid_explicit)
      (void)build_bank(BandSupport{rows[0].support_lo.value(o.alpha),
                                   rows[0].support_hi.value(o.alpha)},
                       o.levels, nyq);
    provenance(os, o, nullptr);
    if (structured) {
      os << "family = deoliveira_equivalent\nalpha = " << fmt(o.alpha)
         << "\nlevels = " << o.levels << "\n";
      for (const auto& r : rows) {
        const std::string p = "row" + std::to_string(r.level) + ".";
        os << p << "support = [" << r.support_lo.range_text() << ", "
           << r.support_hi.range_text() << "] = "
           << fmt_band(BandSupport{r.support_lo.value(o.alpha), r.support_hi.value(o.alpha)})
           << "\n"
           << p << "printed_bandwidth = " << r.printed_bandwidth.bandwidth_text() << " = "
           << fmt(r.printed_bandwidth.value(o.alpha)) << "\n"
           << p << "derived_bandwidth = " << r.derived_bandwidth.bandwidth_text() << " = "
           << fmt(r.derived_bandwidth.value(o.alpha)) << "\n"
           << p << "fdm = [" << r.fdm_lo.range_text() << ", " << r.fdm_hi.range_text() << "] = "
           << fmt_band(BandSupport{r.fdm_lo.value(o.alpha), r.fdm_hi.value(o.alpha)}) << "\n"
           << p << "fdm_bandwidth = " << r.fdm_bandwidth.bandwidth_text() << " = "
           << fmt(r.fdm_bandwidth.value(o.alpha)) << "\n";
      }
      return 0;
    }
    os << "level,support_lo,support_hi,printed_bandwidth,derived_bandwidth,fdm_lo,fdm_hi,"
          "fdm_bandwidth,support_lo_text,support_hi_text,printed_bandwidth_text,"
          "derived_bandwidth_text,fdm_lo_text,fdm_hi_text,fdm_bandwidth_text\n";
    for (const auto& r : rows)
      os << r.level << "," << fmt(r.support_lo.value(o.alpha)) << ","
         << fmt(r.support_hi.value(o.alpha)) << "," << fmt(r.printed_bandwidth.value(o.alpha))
         << "," << fmt(r.derived_bandwidth.value(o.alpha)) << "," << fmt(r.fdm_lo.value(o.alpha))
         << "," << fmt(r.fdm_hi.value(o.alpha)) << "," << fmt(r.fdm_bandwidth.value(o.alpha))
         << "," << r.support_lo.range_text() << "," << r.support_hi.range_text() << ","
         << r.printed_bandwidth.bandwidth_text() << "," << r.derived_bandwidth.bandwidth_text()
         << "," << r.fdm_lo.range_text() << "," << r.fdm_hi.range_text() << ","
         << r.fdm_bandwidth.bandwidth_text() << "\n";
    return 0;
  }

  // generic numeric bank from the family's band
  const WaveletFamily fam = family_from(o);
  const TransformPlan plan = plan_from(o);
  const BandSupport base = family_band(fam, plan, o.energy_fraction);
  const auto bank = build_bank(base, o.levels, nyq);
  const auto fdm = fdm_bank(base, o.levels, nyq);
  provenance(os, o, nullptr);
  if (structured) {
    os << "family = " << fam.name << "\nlevels = " << o.levels << "\n";
    for (int j = 0; j < o.levels; ++j) {
      const std::string p = "row" + std::to_string(j) + ".";
      os << p << "support = " << fmt_band(bank[j].support) << "\n"
         << p << "q_factor = " << fmt(bank[j].q_factor) << "\n"
         << p << "fdm = " << fmt_band(fdm[j]) << "\n";
    }
    return 0;
  }
  os << "level,support_lo,support_hi,bandwidth,q_factor,fdm_lo,fdm_hi,fdm_bandwidth\n";
  for (int j = 0; j < o.levels; ++j)
    os << j << "," << fmt(bank[j].support.w_m) << "," << fmt(bank[j].support.w_M) << ","
       << fmt(bank[j].support.w_M - bank[j].support.w_m) << "," << fmt(bank[j].q_factor) << ","
       << fmt(fdm[j].w_m) << "," << fmt(fdm[j].w_M) << "," << fmt(fdm[j].w_M - fdm[j].w_m)
       << "\n";
  return 0;
}

int cmd_check(const Opts& o) {
  const WaveletFamily fam = family_from(o);
  const TransformPlan plan = plan_from(o);
  const BandSupport band = !o.band.empty() ? parse_band(o.band)
                                           : family_band(fam, plan, o.energy_fraction);

  const bool prop1 = prop1_orthogonality(band);
  const auto ov = overlap_interval(band);
  const auto adj = adjacent_channel_overlap(band);

  Output out(o.out);
  std::ostream& os = out.os();
  provenance(os, o, &plan);
  const bool csv = o.format == "csv";
  const char* sep = csv ? "," : " = ";
  if (csv) os << "key,value\n";
  os << "family" << sep << fam.name << "\n";
  os << "band" << sep << fmt_band(band) << "\n";
  os << "prop1_orthogonality" << sep << (prop1 ? "true" : "false") << "\n";
  os << "overlap_interval" << sep << (ov ? fmt_band(*ov) : "none") << "\n";
  os << "adjacent_channel_overlap" << sep << (adj ? fmt_band(*adj) : "none") << "\n";
  if (fam.kind == FamilyKind::spectral) {
    const GramMatrix g = gram_matrix(fam, o.scales, o.shifts, plan);
    os << "gram_scales" << sep << "[";
    for (std::size_t i = 0; i < o.scales.size(); ++i) os << (i ? ", " : "") << o.scales[i];
    os << "]\n";
    os << "gram_shifts" << sep << "[";
    for (std::size_t i = 0; i < o.shifts.size(); ++i) os << (i ? ", " : "") << o.shifts[i];
    os << "]\n";
    os << "gram_max_off_diagonal" << sep << fmt(g.max_off_diagonal()) << "\n";
  } else {
    os << "gram_max_off_diagonal" << sep << "skipped (spectral families only)" << "\n";
  }
  return 0;
}

int cmd_equiv(const Opts& o) {
  const WaveletFamily fam = family_from(o);
  if (fam.name != "meyer_equivalent" && fam.name != "deoliveira_equivalent")
    throw std::invalid_argument("equiv requires an equivalent-spectrum family");
  const TransformPlan plan = plan_from(o);

  Output out(o.out);
  provenance(out.os(), o, &plan);
  out.os() << "w,re,im,abs\n";
  for (std::size_t m = 0; m < plan.freq.n; ++m) {
    const double w = plan.freq.w(m);
    const std::complex<double> v = fam.spectrum(w);
    out.os() << fmt(w) << "," << fmt(v.real()) << "," << fmt(v.imag()) << ","
             << fmt(std::abs(v)) << "\n";
  }
  return 0;
}

int cmd_gram(const Opts& o) {
  const WaveletFamily fam = family_from(o);
  const TransformPlan plan = plan_from(o);
  const GramMatrix g = gram_matrix(fam, o.scales, o.shifts, plan);

  Output out(o.out);
  std::ostream& os = out.os();
  provenance(os, o, &plan);
  if (o.format == "structured") {
    os << "family = " << fam.name << "\nsize = " << g.size() << "\n";
    os << "atoms = [";
    for (std::size_t i = 0; i < g.size(); ++i)
      os << (i ? ", " : "") << "(" << g.index[i].scale << ":" << g.index[i].shift << ")";
    os << "]\n";
    os << "max_off_diagonal = " << fmt(g.max_off_diagonal()) << "\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
      os << "row" << i << " = [";
      for (std::size_t j = 0; j < g.size(); ++j) os << (j ? ", " : "") << fmt(g.at(i, j));
      os << "]\n";
    }
    return 0;
  }
  os << "# max_off_diagonal = " << fmt(g.max_off_diagonal()) << "\n";
  os << "i,j,scale_i,shift_i,scale_j,shift_j,value\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      os << i << "," << j << "," << g.index[i].scale << "," << g.index[i].shift << ","
         << g.index[j].scale << "," << g.index[j].shift << "," << fmt(g.at(i, j)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Opts o;
  o.cmdline = "kotwav";
  for (int i = 1; i < argc; ++i) o.cmdline += std::string(" ") + argv[i];

  CLI::App app{"Wavelet baseband analysis toolkit"};
  app.require_subcommand(1);
  CLI::App* synth = app.add_subcommand("synth", "sample a wavelet on a time grid");
  CLI::App* demod = app.add_subcommand("demod", "I/Q demodulation, envelope and phase");
  CLI::App* bank = app.add_subcommand("bank", "dyadic band table");
  CLI::App* check = app.add_subcommand("check", "orthogonality and overlap report");
  CLI::App* equiv = app.add_subcommand("equiv", "equivalent-spectrum samples");
  CLI::App* gram = app.add_subcommand("gram", "inner-product matrix of scaled translates");
  for (CLI::App* sub : {synth, demod, bank, check, equiv, gram}) add_common(sub, o);

  try {
    app.parse(argc, argv);
    CLI::App* sub = app.get_subcommands().front();
    o.grid_explicit = sub->count("--fs") > 0 || sub->count("--n") > 0;
    if (sub == synth) return cmd_synth(o);
    if (sub == demod) return cmd_demod(o);
    if (sub == bank) return cmd_bank(o);
    if (sub == check) return cmd_check(o);
    if (sub == equiv) return cmd_equiv(o);
    return cmd_gram(o);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::range_error& e) {  // before runtime_error: it derives from it
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
