#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "kotwav/filterbank.hpp"
#include "kotwav/transform.hpp"
#include "kotwav/types.hpp"
#include "kotwav/wavelets.hpp"
#include "test_util.hpp"

using namespace kotwav;

namespace {

const BandSupport kGateBand{pi, 2.0 * pi};
const BandSupport kTaperBand{2.0 * pi / 3.0, 8.0 * pi / 3.0};

}  // namespace

TEST_CASE("octave-orthogonality bound w_M <= 3 w_m") {
  CHECK(prop1_orthogonality(kGateBand));
  CHECK_FALSE(prop1_orthogonality(kTaperBand));
  CHECK(prop1_orthogonality(BandSupport{1.0, 3.0}));  // boundary counts as holding
  CHECK_FALSE(prop1_orthogonality(BandSupport{1.0, 3.0 + 1e-6}));

  SUBCASE("verdict is scale invariant") {
    for (double c : {0.5, 2.0, 10.0}) {
      CHECK(prop1_orthogonality(BandSupport{c * kGateBand.w_m, c * kGateBand.w_M}) ==
            prop1_orthogonality(kGateBand));
      CHECK(prop1_orthogonality(BandSupport{c * kTaperBand.w_m, c * kTaperBand.w_M}) ==
            prop1_orthogonality(kTaperBand));
    }
  }
  SUBCASE("degenerate bands are rejected") {
    CHECK_THROWS_AS(prop1_orthogonality(BandSupport{2.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(prop1_orthogonality(BandSupport{-1.0, 1.0}), std::invalid_argument);
  }
}

TEST_CASE("overlap interval appears exactly when the bound fails") {
  CHECK_FALSE(overlap_interval(kGateBand).has_value());
  const auto ov = overlap_interval(kTaperBand);
  REQUIRE(ov.has_value());
  CHECK(ov->w_m == doctest::Approx(2.0 * pi / 3.0).epsilon(1e-15));
  CHECK(ov->w_M == doctest::Approx(pi).epsilon(1e-15));
  CHECK_FALSE(overlap_interval(BandSupport{1.0, 3.0}).has_value());
}

TEST_CASE("adjacent channel overlap is [2 w_m, w_M] when it exists") {
  CHECK_FALSE(adjacent_channel_overlap(kGateBand).has_value());

  const auto ov = adjacent_channel_overlap(kTaperBand);
  REQUIRE(ov.has_value());
  CHECK(ov->w_m == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-15));
  CHECK(ov->w_M == doctest::Approx(8.0 * pi / 3.0).epsilon(1e-15));

  // a band can satisfy the printed bound yet still overlap its octave copy
  const BandSupport mid{1.0, 2.5};
  CHECK(prop1_orthogonality(mid));
  const auto mov = adjacent_channel_overlap(mid);
  REQUIRE(mov.has_value());
  CHECK(mov->w_m == 2.0);
  CHECK(mov->w_M == 2.5);
}

TEST_CASE("dyadic bank doubles supports and keeps Q constant to the bit") {
  const auto bank = build_bank(kTaperBand, 4);
  REQUIRE(bank.size() == 4);
  for (int j = 0; j < 4; ++j) {
    CHECK(bank[j].level == j);
    CHECK(bank[j].support.w_m == std::ldexp(kTaperBand.w_m, j));
    CHECK(bank[j].support.w_M == std::ldexp(kTaperBand.w_M, j));
    CHECK(bank[j].q_factor == bank[0].q_factor);  // exact dyadic scaling cancels
  }
  CHECK(bank[0].q_factor == doctest::Approx(5.0 / 6.0).epsilon(1e-15));

  const auto gates = build_bank(kGateBand, 1);
  CHECK(gates[0].q_factor == doctest::Approx(1.5).epsilon(1e-15));

  SUBCASE("a channel crossing Nyquist names its level") {
    CHECK_THROWS_WITH_AS(build_bank(kGateBand, 10, 16.0 * pi),
                         "bank level 4 exceeds Nyquist", std::range_error);
    CHECK_NOTHROW(build_bank(kGateBand, 4, 16.0 * pi));  // 16pi lands exactly on the limit
  }
  SUBCASE("bad arguments are rejected") {
    CHECK_THROWS_AS(build_bank(kGateBand, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_bank(BandSupport{3.0, 2.0}, 2), std::invalid_argument);
  }
}

TEST_CASE("frequency-division bank tiles the axis without gap or overlap") {
  const auto fdm = fdm_bank(kTaperBand, 4);
  REQUIRE(fdm.size() == 4);
  for (int j = 0; j < 4; ++j) {
    CHECK(fdm[j].w_m == std::ldexp(0.5 * kTaperBand.w_M, j));
    CHECK(fdm[j].w_M == std::ldexp(kTaperBand.w_M, j));
  }
  for (int j = 0; j + 1 < 4; ++j) CHECK(fdm[j].w_M == fdm[j + 1].w_m);  // bitwise shared edges

  SUBCASE("bands already no wider than an octave pass through unchanged") {
    const auto bank = build_bank(kGateBand, 3);
    const auto slices = fdm_bank(kGateBand, 3);
    for (int j = 0; j < 3; ++j) {
      CHECK(slices[j].w_m == bank[j].support.w_m);
      CHECK(slices[j].w_M == bank[j].support.w_M);
    }

    const WaveletFamily deo = deoliveira_equivalent_family(0.1);
    const auto dbank = build_bank(*deo.band, 3);
    const auto dslices = fdm_bank(*deo.band, 3);
    for (int j = 0; j < 3; ++j) {
      CHECK(dslices[j].w_m == dbank[j].support.w_m);
      CHECK(dslices[j].w_M == dbank[j].support.w_M);
    }
  }
  SUBCASE("Nyquist check matches the dyadic bank") {
    CHECK_THROWS_WITH_AS(fdm_bank(kGateBand, 5, 16.0 * pi),
                         "bank level 4 exceeds Nyquist", std::range_error);
  }
}

TEST_CASE("gram matrix of the gate family is the identity") {
  const TransformPlan plan = TransformPlan::centered(1.0 / 16.0, 1024);
  const GramMatrix g = gram_matrix(shannon_family(), {0, 1}, {-1, 0, 1}, plan);
  REQUIRE(g.size() == 6);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(g.at(i, i) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.max_off_diagonal() < 1e-9);
}

TEST_CASE("gram matrix of the taper family is the identity across two octaves") {
  const TransformPlan plan = TransformPlan::centered(1.0 / 16.0, 1024);
  const std::vector<int> shifts{-2, -1, 0, 1, 2};
  const GramMatrix g = gram_matrix(meyer_family(), {0, 1}, shifts, plan);
  REQUIRE(g.size() == 10);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g.at(i, i) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(g.at(i, j) == g.at(j, i));
  }
  CHECK(g.max_off_diagonal() < 1e-6);
}

TEST_CASE("gram entries agree with an independent quadrature and with atoms") {
  // The flat-top family with alpha > 0 is not shift-orthogonal, so the entry
  // is a real nonzero number independent computations must agree on.
  const TransformPlan plan = TransformPlan::centered(1.0 / 16.0, 16384);
  const double alpha = 0.1;
  const WaveletFamily deo = deoliveira_equivalent_family(alpha);
  const GramMatrix g = gram_matrix(deo, {0}, {0, 1}, plan);
  REQUIRE(g.size() == 2);

  // <psi, psi(.-1)> = Re (1/pi) int |Psi|^2 e^{jw} dw / norm2, by Simpson on
  // each smooth piece of the spectrum
  const double amp = 2.0 / std::sqrt(2.0 * pi);
  const double lo = pi * (1.0 + alpha), knee = 2.0 * pi * (1.0 - alpha),
               hi = 2.0 * pi * (1.0 + alpha);
  auto mag2 = [&](double w) {
    if (w <= knee) return amp * amp;
    const double c = std::cos((w - knee) / (8.0 * alpha));
    return amp * amp * c * c;
  };
  auto piecewise = [&](auto f) {
    return oracle::simpson(f, lo, knee, 4000) + oracle::simpson(f, knee, hi, 4000);
  };
  const double norm2 = piecewise(mag2) / pi;
  const double want = piecewise([&](double w) { return mag2(w) * std::cos(w); }) / pi / norm2;
  CHECK(std::abs(want) > 0.01);  // genuinely non-orthogonal pair
  CHECK(g.at(0, 1) == doctest::Approx(want).epsilon(1e-9));

  // atoms realized through the transform carry ~5e-4 of wrap-around alias
  // (1/t tails from the spectral jump), so they only corroborate coarsely
  auto atom = [&](double b) {
    RealSeries s = synthesize(
        [&](double w) { return deo.spectrum(w) * std::polar(1.0, -w * b); },
        plan, deo.spectrum_jumps);
    const double nrm = std::sqrt(inner_product(s, s));
    for (double& v : s.samples) v /= nrm;
    return s;
  };
  CHECK(inner_product(atom(0.0), atom(1.0)) == doctest::Approx(want).epsilon(2e-2));

  SUBCASE("touching octave supports give an exactly zero entry") {
    const WaveletFamily brick = deoliveira_equivalent_family(0.0);
    const GramMatrix z = gram_matrix(brick, {0, 1}, {0}, plan);
    CHECK(z.at(0, 1) == 0.0);
  }
}

TEST_CASE("gram matrix rejects unusable inputs") {
  const TransformPlan plan = TransformPlan::centered(1.0 / 16.0, 1024);
  CHECK_THROWS_WITH_AS(gram_matrix(meyer_family(), {0, 3}, {0}, plan),
                       "gram scale 3 exceeds Nyquist", std::range_error);
  CHECK_NOTHROW(gram_matrix(meyer_family(), {2}, {0}, plan));
  CHECK_THROWS_AS(gram_matrix(morlet_family(), {0}, {0}, plan), std::invalid_argument);
}

TEST_CASE("pi rationals print and combine exactly") {
  CHECK(PiRational{4, 3}.text() == "4pi/3");
  CHECK(PiRational{2, 1}.text() == "2pi");
  CHECK(PiRational{1, 1}.text() == "pi");
  CHECK(PiRational{16, 3}.text() == "16pi/3");
  CHECK(PiRational{8, 1}.text() == "8pi");
  CHECK(PiRational{0, 1}.text() == "0");
  CHECK((PiRational{8, 3} - PiRational{2, 3}) == PiRational{2, 1});
  CHECK((PiRational{2, 3} * 4) == PiRational{8, 3});
  CHECK(PiRational{4, 3}.value() == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-15));
}

TEST_CASE("taper band table carries the exact dyadic rationals") {
  const auto rows = meyer_band_table(4);
  REQUIRE(rows.size() == 4);
  for (int j = 0; j < 4; ++j) {
    const long long p = 1LL << j;
    CHECK(rows[j].level == j);
    CHECK(rows[j].support_lo == (PiRational{2, 3} * p));
    CHECK(rows[j].support_hi == (PiRational{8, 3} * p));
    CHECK(rows[j].bandwidth == (PiRational{2, 1} * p));
    CHECK(rows[j].ref_freq == (PiRational{4, 3} * p));
    CHECK(rows[j].fdm_lo == (PiRational{4, 3} * p));
    CHECK(rows[j].fdm_hi == (PiRational{8, 3} * p));
    CHECK(rows[j].fdm_bandwidth == (PiRational{4, 3} * p));
  }
  // row 2 spelled out, text included
  CHECK(rows[2].support_lo.text() == "8pi/3");
  CHECK(rows[2].support_hi.text() == "32pi/3");
  CHECK(rows[2].bandwidth.text() == "8pi");
  CHECK(rows[2].ref_freq.text() == "16pi/3");
  CHECK(rows[2].fdm_lo.text() == "16pi/3");
  CHECK(rows[2].fdm_bandwidth.text() == "16pi/3");
  CHECK_THROWS_AS(meyer_band_table(0), std::invalid_argument);
}

TEST_CASE("alpha-parametrised table keeps both bandwidth readings") {
  const auto rows = deoliveira_band_table(3);
  REQUIRE(rows.size() == 3);
  for (int j = 0; j < 3; ++j) {
    const long long p = 1LL << j;
    CHECK(rows[j].support_lo == (AlphaPi{p, -1}));
    CHECK(rows[j].support_hi == (AlphaPi{2 * p, +1}));
    CHECK(rows[j].printed_bandwidth == (AlphaPi{p, +2}));
    CHECK(rows[j].derived_bandwidth == (AlphaPi{p, +3}));
    CHECK(rows[j].fdm_lo == (AlphaPi{p, +1}));
    CHECK(rows[j].fdm_hi == (AlphaPi{2 * p, +1}));
    CHECK(rows[j].fdm_bandwidth == (AlphaPi{p, +1}));
  }

  CHECK(rows[0].support_lo.range_text() == "pi(1-a)");
  CHECK(rows[0].support_hi.range_text() == "2pi(1+a)");
  CHECK(rows[1].support_hi.range_text() == "4pi(1+a)");
  CHECK(rows[0].printed_bandwidth.bandwidth_text() == "(1+2a)pi");
  CHECK(rows[0].derived_bandwidth.bandwidth_text() == "(1+3a)pi");
  CHECK(rows[1].printed_bandwidth.bandwidth_text() == "(1+2a)2pi");

  // the two readings disagree for alpha > 0 and collapse together at zero
  CHECK(rows[0].printed_bandwidth.value(0.1) == doctest::Approx(1.2 * pi).epsilon(1e-15));
  CHECK(rows[0].derived_bandwidth.value(0.1) == doctest::Approx(1.3 * pi).epsilon(1e-15));
  CHECK(rows[0].printed_bandwidth.value(0.0) == rows[0].derived_bandwidth.value(0.0));
  CHECK(rows[0].support_lo.value(0.0) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(rows[0].support_hi.value(0.0) == doctest::Approx(2.0 * pi).epsilon(1e-15));
  CHECK_THROWS_AS(deoliveira_band_table(0), std::invalid_argument);
}
