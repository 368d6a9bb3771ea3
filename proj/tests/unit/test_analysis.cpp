#include <cmath>
#include <vector>

#include "doctest.h"
#include "paper_setup.hpp"
#include "rydnoise/analysis/measurement.hpp"
#include "rydnoise/analysis/peaks.hpp"
#include "rydnoise/error.hpp"
#include "rydnoise/rydberg/quantum_defects.hpp"
#include "rydnoise/rydberg/state.hpp"
#include "rydnoise/rydberg/structure.hpp"

using namespace rydnoise;
using namespace rydnoise::analysis;
using constants::two_pi;

namespace {

double lorentzian(double x, double x0, double width) {
  const double d = (x - x0) / width;
  return 1.0 / (1.0 + d * d);
}

struct Sampled {
  std::vector<double> x, y;
};

Sampled sample(double lo, double hi, double step, auto fn) {
  Sampled s;
  for (double x = lo; x <= hi + 1e-9; x += step) {
    s.x.push_back(x);
    s.y.push_back(fn(x));
  }
  return s;
}

noise::NoiseCouplings filter_couplings(const std::vector<double>& centers_hz, double dbm, double atten_db) {
  static const rydberg::RydbergStructure structure(rydberg::QuantumDefectTable::rubidium85());
  const auto spectrum = testing::filter_rectangles(centers_hz, dbm).with_gain_db(atten_db);
  const noise::SpectralIntensity intensity(spectrum, noise::FieldGeometry{});
  return noise::compute_couplings(structure, rydberg::parse_state("57S1/2"), rydberg::parse_state("57P1/2"),
                                  intensity);
}

}  // namespace

TEST_CASE("peak finding on constructed spectra") {
  const auto one = sample(-50e6, 50e6, 1e6, [](double x) { return lorentzian(x, 12.5e6, 3e6); });
  const auto p1 = find_peaks(one.x, one.y, 0.01);
  REQUIRE(p1.size() == 1);
  CHECK(p1.peaks[0].position_hz == doctest::Approx(12.5e6).epsilon(0.1e6 / 12.5e6));

  const auto two = sample(-100e6, 100e6, 1e6,
                          [](double x) { return lorentzian(x, -50e6, 4e6) + lorentzian(x, 50e6, 4e6); });
  const auto p2 = find_peaks(two.x, two.y, 0.01);
  REQUIRE(p2.size() == 2);
  CHECK(p2.peaks[0].position_hz < p2.peaks[1].position_hz);
  CHECK(*at_splitting(p2) == doctest::Approx(100e6).epsilon(0.2e6 / 100e6));

  const std::vector<double> x{0, 1, 2, 3, 4, 5}, flat(6, 0.3);
  CHECK(find_peaks(x, flat, 0.0).empty());
  CHECK_THROWS_AS(find_peaks(std::vector<double>{0, 1, 2}, std::vector<double>{0, 1, 0}, 0.0), ConfigError);
}

TEST_CASE("sub-grid accuracy on Lorentzian pairs") {
  const double step = 1e6;
  for (double centre : {-31.37e6, 7.81e6, 22.5e6}) {
    const auto s = sample(-80e6, 80e6, step, [&](double x) {
      return 0.4 + 0.1 * lorentzian(x, centre, 5e6) + 0.1 * lorentzian(x, centre + 40e6, 5e6);
    });
    const auto peaks = find_peaks(s.x, s.y, 0.005);
    REQUIRE(peaks.size() == 2);
    // Each peak is pulled slightly by its neighbour's tail; the grid error is what is bounded.
    CHECK(std::fabs(peaks.peaks[0].position_hz - centre) <= step / 10 + 0.2e6);
    CHECK(std::fabs(*at_splitting(peaks) - 40e6) <= step / 10 + 0.4e6);
  }
}

TEST_CASE("splitting uses the two most prominent peaks") {
  const auto s = sample(-120e6, 120e6, 0.5e6, [](double x) {
    return lorentzian(x, -83.1e6, 5e6) + lorentzian(x, 83.1e6, 5e6) + 0.2 * lorentzian(x, 10e6, 3e6);
  });
  const auto peaks = find_peaks(s.x, s.y, 0.01);
  REQUIRE(peaks.size() == 3);
  CHECK(*at_splitting(peaks) == doctest::Approx(166.2e6).epsilon(1e-3));
  PeakSet single;
  single.peaks.push_back({0.0, 1.0, 1.0});
  CHECK_FALSE(at_splitting(single).has_value());
  // Prominence threshold drops the small middle peak.
  CHECK(find_peaks(s.x, s.y, 0.5).size() == 2);
}

TEST_CASE("field inversion") {
  CHECK(infer_efield(0.0, 1120.0) == 0.0);
  const double e1 = infer_efield(100e6, 1120.0);
  CHECK(infer_efield(100e6, 2240.0) == doctest::Approx(e1 / 2).epsilon(1e-15));
  const auto est = estimate_field(123e6, 1120.0, 1.5);
  CHECK(est.efield_v_m == infer_efield(est.splitting_hz, est.dipole_ea0, est.d_factor));
  // Omega = p E / hbar and Omega = 2 pi df close exactly.
  const double e = 11.6;
  CHECK(infer_efield(rf_rabi(e, 1120.0) / two_pi, 1120.0) == doctest::Approx(e).epsilon(1e-14));
  CHECK(d_factor(spectroscopy::ScanAxis::probe, 780.241e-9, 479.9285e-9) ==
        doctest::Approx(780.241 / 479.9285));
  CHECK(d_factor(spectroscopy::ScanAxis::coupling, 780.241e-9, 479.9285e-9) == 1.0);
  CHECK_THROWS_AS(infer_efield(1e6, 0.0), ConfigError);
}

TEST_CASE("splitting at the maximum horn power maps back to the far field") {
  // Without Doppler averaging the windows are ~Omega_c^2 / Gamma_2 wide, so the
  // coupling is raised to keep them resolved on a 0.25 MHz grid.
  auto m = testing::paper_model(1, 130, 1041);
  m.system.velocity.doppler = false;
  m.system.drives.probe_rabi = two_pi * 0.1e6;
  m.system.drives.coupling_rabi = two_pi * 5e6;
  const auto s = model_spectrum(m, 2.4e-3, {}, 1e-9);
  const auto split = at_splitting(s.peaks);
  REQUIRE(split.has_value());
  CHECK(infer_efield(*split, 1120.0) == doctest::Approx(11.6).epsilon(0.03));
  CHECK(infer_efield(*split, 1120.0) == doctest::Approx(s.efield_v_m).epsilon(0.03));
}

TEST_CASE("zero-RF offsets") {
  const auto m = testing::paper_model(1601, 150, 301);
  const double thr = suppression_threshold(m);
  CHECK(thr > 0.0);
  const auto clean = zero_rf_offset(m, {}, thr);
  REQUIRE(clean.offset_hz.has_value());
  CHECK(std::fabs(*clean.offset_hz) <= 1e6);

  const auto f1 = zero_rf_offset(m, filter_couplings({20.7e9}, 5.4, 0.0), thr);
  REQUIRE(f1.offset_hz.has_value());
  CHECK(*f1.offset_hz > 62e6 / 2);
  CHECK(*f1.offset_hz < 62e6 * 2);

  const auto f3 = zero_rf_offset(m, filter_couplings({18.7e9}, 6.6, 0.0), thr);
  REQUIRE(f3.offset_hz.has_value());
  CHECK(*f3.offset_hz < -16e6 / 2);
  CHECK(*f3.offset_hz > -16e6 * 2);

  // A threshold above every peak reports suppression instead of a position.
  const auto gone = zero_rf_offset(m, {}, 10.0);
  CHECK_FALSE(gone.offset_hz.has_value());
  CHECK(gone.peaks.empty());
}

TEST_CASE("offset direction and monotonicity") {
  const auto m = testing::paper_model(801, 60, 241);
  const double thr = suppression_threshold(m);
  double prev_blue = 0.0, prev_red = 0.0;
  for (double att : {-18.0, -12.0, -6.0}) {
    const auto blue = zero_rf_offset(m, filter_couplings({20.7e9}, 5.4, att), thr);
    const auto red = zero_rf_offset(m, filter_couplings({18.7e9}, 6.6, att), thr);
    REQUIRE(blue.offset_hz.has_value());
    REQUIRE(red.offset_hz.has_value());
    CHECK(*blue.offset_hz > prev_blue);
    CHECK(*red.offset_hz < prev_red);
    prev_blue = *blue.offset_hz;
    prev_red = *red.offset_hz;
  }
}

TEST_CASE("CSNR analysis") {
  const auto m = testing::paper_model(801, 160, 321);
  const double thr = suppression_threshold(m);
  const auto spectrum = testing::filter_rectangles({18.7e9}, 6.6);
  const double pn = spectrum.integrated_power();
  const std::vector<double> powers{pn, 0.2 * pn};

  const auto red = csnr_analysis(m, powers, filter_couplings({18.7e9}, 6.6, 0.0), pn, thr);
  REQUIRE(red.size() == 2);
  CHECK(red[0].csnr == 1.0);
  CHECK(red[1].csnr == doctest::Approx(0.2));
  for (const auto& p : red) {
    REQUIRE(p.percent_difference.has_value());
    CHECK(std::fabs(*p.percent_difference) < 10.0);
  }

  // Vanishing noise leaves the inferred field unchanged.
  const auto faint = csnr_analysis(m, powers, filter_couplings({18.7e9}, 6.6, -80.0), pn * 1e-8, thr);
  for (const auto& p : faint) {
    REQUIRE(p.percent_difference.has_value());
    CHECK(std::fabs(*p.percent_difference) < 1e-3);
  }
  CHECK_THROWS_AS(csnr_analysis(m, powers, {}, 0.0, thr), ConfigError);
}
