#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rydnoise/constants.hpp"
#include "rydnoise/error.hpp"
#include "rydnoise/noise/couplings.hpp"

using namespace rydnoise;
using namespace rydnoise::noise;
using rydberg::parse_state;
using rydberg::Perturber;

namespace {

// Closed-form antiderivative of 1 / (nu^2 (nu^2 - a^2)), in long double.
long double antiderivative(long double nu, long double a) {
  return (1.0L / (a * a)) * (std::log(std::fabs((nu - a) / (nu + a))) / (2.0L * a) + 1.0L / nu);
}

FieldGeometry flat_gain_geometry() {
  FieldGeometry g;
  g.gain.slope_db_per_ghz = 0.0;
  return g;
}

// Constant physical intensity produced by a flat psd under a flat gain.
double flat_intensity(double psd, const FieldGeometry& g) {
  const double gain = std::pow(10.0, g.gain.reference_gain_db / 10.0);
  return g.enhancement * g.enhancement * gain * psd / (4.0 * constants::pi * g.distance_m * g.distance_m);
}

}  // namespace

TEST_CASE("rectangular spectra") {
  const auto s = make_rect_spectrum(19.7e9, 1e9, 3.981e-3);
  CHECK(s.psd(19.7e9) == doctest::Approx(3.981e-12).epsilon(1e-12));
  CHECK(s.psd(19.19e9) == 0.0);
  CHECK(s.psd(20.21e9) == 0.0);
  CHECK(std::fabs(s.integrated_power() - 3.981e-3) <= 1e-12 * 3.981e-3);
  const auto z = make_rect_spectrum(19.7e9, 1e9, 0.0);
  CHECK(z.is_zero());
  CHECK(z.psd(19.7e9) == 0.0);
  CHECK_THROWS_AS(make_rect_spectrum(19.7e9, 0.0, 1e-3), std::invalid_argument);
  CHECK(s.with_gain_db(-6.0).integrated_power() ==
        doctest::Approx(3.981e-3 * std::pow(10.0, -0.6)).epsilon(1e-14));
  CHECK(dbm_to_watts(6.0) == doctest::Approx(3.981e-3).epsilon(1e-4));
}

TEST_CASE("psd file loading") {
  const auto s = parse_noise_psd("# units: Hz,W_per_Hz\n1e9, 1e-12\n2e9, 3e-12\n3e9, 1e-12\n");
  CHECK(s.integrated_power() == doctest::Approx(4e-3).epsilon(1e-14));
  CHECK(s.psd(1.5e9) == doctest::Approx(2e-12));

  const auto g = parse_noise_psd("# measured\n# units: GHz, dBm_per_Hz\n19.0, 0\n20.0, 0\n");
  CHECK(g.psd(19.5e9) == doctest::Approx(1e-3));
  CHECK(g.min_frequency() == 19e9);

  const auto r = parse_noise_psd("# units: GHz,dBm_per_Hz\n20.2,-90\n20.7,-85\n21.2,-92\n", "x", dbm_to_watts(5.4));
  CHECK(std::fabs(r.integrated_power() - 3.467e-3) / 3.467e-3 < 1e-3);
  CHECK(std::fabs(r.integrated_power() - dbm_to_watts(5.4)) / dbm_to_watts(5.4) < 1e-9);

  auto line_of = [](const char* text) {
    try {
      parse_noise_psd(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("1e9, 1e-12\n2e9, 1e-12\n") == 1);
  CHECK(line_of("# units: Hz,W_per_Hz\n1e9, 1e-12\n1e9, 1e-12\n") == 3);
  CHECK(line_of("# units: Hz,W_per_Hz\n1e9, 1e-12\n2e9, -1e-12\n") == 3);
  CHECK(line_of("# units: Hz,W_per_Hz\n1e9, 1e-12\n2e9 1e-12\n") == 3);
  CHECK(line_of("# units: MHz,W\n") == 1);
}

TEST_CASE("horn gain and far field") {
  const GainModel gm;
  CHECK(horn_gain_linear(18e9, gm) == doctest::Approx(std::pow(10.0, 1.5)).epsilon(1e-14));
  CHECK(horn_gain_db(19.78e9, gm) == doctest::Approx(15.628).epsilon(1e-4));
  GainModel flat = gm;
  flat.slope_db_per_ghz = 0.0;
  CHECK(horn_gain_db(30e9, flat) == 15.0);

  const FieldGeometry geo;
  CHECK(farfield_efield(2.4e-3, 19.7825e9, geo) == doctest::Approx(11.6).epsilon(0.1 / 11.6));
  CHECK(farfield_efield(0.0, 19.7825e9, geo) == 0.0);
  CHECK(farfield_efield(4 * 1e-3, 19.7825e9, geo) ==
        doctest::Approx(2 * farfield_efield(1e-3, 19.7825e9, geo)).epsilon(1e-14));
}

TEST_CASE("spectral intensity at the atoms") {
  const FieldGeometry geo;
  const SpectralIntensity in(make_rect_spectrum(19.7e9, 1e9, dbm_to_watts(6.0)), geo);
  // Hand composition: (A/x)^2 * c mu0 / 2pi * G_L(19.7 GHz) * psd.
  const double hand = std::pow(1.73 / 0.342, 2) * (299792458.0 * 1.25663706212e-6 / (2 * M_PI)) *
                      std::pow(10.0, (15.0 + 3.0 * 1.7 / 8.5) / 10.0) * dbm_to_watts(6.0) / 1e9;
  CHECK(in.field_spectral_density(19.7e9) == doctest::Approx(hand).epsilon(1e-12));
  CHECK(in.field_spectral_density(19.7e9) == doctest::Approx(2.23e-7).epsilon(0.01));
  const double cf = constants::c * constants::epsilon0 / 2.0;
  CHECK(in(19.7e9) == doctest::Approx(cf * in.field_spectral_density(19.7e9)).epsilon(1e-12));
  CHECK(in(21e9) == 0.0);

  FieldGeometry doubled = geo;
  doubled.enhancement *= 2;
  const SpectralIntensity in2(in.spectrum(), doubled);
  CHECK(in2(19.9e9) == doctest::Approx(4 * in(19.9e9)).epsilon(1e-14));
  CHECK(SpectralIntensity()(19.7e9) == 0.0);
}

TEST_CASE("noise transition rates") {
  const SpectralIntensity in(make_rect_spectrum(19.7e9, 1e9, dbm_to_watts(6.0)), FieldGeometry{});
  const double nu = 19.7835e9;
  // e^2 / (2 eps0 hbar^2 c) |r|^2 I, with r = 1120 a0.
  const double e = 1.602176634e-19, eps0 = 8.8541878128e-12, hbar = 6.62607015e-34 / (2 * M_PI);
  const double r = 1120 * 5.29177210903e-11;
  const double expected = e * e / (2 * eps0 * hbar * hbar * 299792458.0) * r * r * in(nu);
  CHECK(noise_rate(nu, 1120, in) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(noise_rate(-nu, 1120, in) == noise_rate(nu, 1120, in));
  CHECK(noise_rate(25e9, 1120, in) == 0.0);
  CHECK(noise_rate(nu, 1120, SpectralIntensity()) == 0.0);
}

TEST_CASE("lumped rates") {
  const rydberg::RydbergStructure rb(rydberg::QuantumDefectTable::rubidium85());
  const auto s = parse_state("57S1/2");
  const auto p = parse_state("57P1/2");
  const auto pol = rydberg::Polarization::along_quantization_axis();
  const auto p3 = rb.enumerate_perturbers(s, 10, p, pol);
  const auto p4 = rb.enumerate_perturbers(p, 10, s, pol);
  const double nu34 = rb.transition_frequency(s, p);

  // A band far from every transition.
  const SpectralIntensity none(make_rect_spectrum(3.0e9, 0.1e9, 1e-3), FieldGeometry{});
  const auto z = lumped_rates(p3, p4, nu34, 1120, none);
  CHECK(z.r34 == 0.0);
  CHECK(z.rd3 == 0.0);
  CHECK(z.re4 == 0.0);

  // A narrow band around the driven line only.
  const SpectralIntensity narrow(make_rect_spectrum(nu34, 0.2e9, 1e-3), FieldGeometry{});
  const auto d = lumped_rates(p3, p4, nu34, 1120, narrow);
  CHECK(d.r34 > 0.0);
  CHECK(d.rd3 == 0.0);
  CHECK(d.re4 == 0.0);

  // Splitting a band into two touching halves of equal total power.
  const double psd = 3e-12;
  const SpectralIntensity whole(NoiseSpectrum({20.2e9, 21.2e9}, {psd, psd}), FieldGeometry{});
  const SpectralIntensity halves(NoiseSpectrum(std::vector<SpectrumSegment>{
                                     {{20.2e9, 20.7e9}, {psd, psd}}, {{20.7e9, 21.2e9}, {psd, psd}}}),
                                 FieldGeometry{});
  const auto a = lumped_rates(p3, p4, nu34, 1120, whole);
  const auto b = lumped_rates(p3, p4, nu34, 1120, halves);
  CHECK(a.rd3 > 0.0);
  CHECK(b.rd3 == doctest::Approx(a.rd3).epsilon(1e-12));
  CHECK(b.re4 == doctest::Approx(a.re4).epsilon(1e-12));
}

TEST_CASE("off-band shift integral matches the partial-fraction closed form") {
  const FieldGeometry geo = flat_gain_geometry();
  const double psd = 2e-12;
  const double a = 19.78e9;
  struct Band {
    double lo, hi;
  };
  for (const Band b : {Band{20.2e9, 21.2e9}, Band{18.2e9, 19.2e9}, Band{19.781e9, 20.5e9},
                       Band{5e9, 6e9}, Band{30e9, 45e9}}) {
    const SpectralIntensity in(NoiseSpectrum({b.lo, b.hi}, {psd, psd}), geo);
    const long double exact = static_cast<long double>(flat_intensity(psd, geo)) *
                              (antiderivative(b.hi, a) - antiderivative(b.lo, a));
    const double got = pole_integral(in, a);
    CHECK(std::fabs(got - static_cast<double>(exact)) <= 1e-10 * std::fabs(static_cast<double>(exact)));
  }
}

TEST_CASE("principal value inside the band") {
  const FieldGeometry geo = flat_gain_geometry();
  const double psd = 2e-12;
  const SpectralIntensity in(NoiseSpectrum({19.2e9, 20.2e9}, {psd, psd}), geo);
  const double a = 19.78e9;
  const long double exact = static_cast<long double>(flat_intensity(psd, geo)) *
                            (antiderivative(20.2e9, a) - antiderivative(19.2e9, a));
  PoleQuadrature q;
  const double v1 = pole_integral(in, a, q);
  CHECK(v1 == doctest::Approx(static_cast<double>(exact)).epsilon(1e-9));
  q.exclusion_half_width_hz /= 2;
  const double v2 = pole_integral(in, a, q);
  CHECK(std::fabs(v2 - v1) < 0.005 * std::fabs(v1));

  // Sloped gain and a non-flat measured-like psd: window halving and panel refinement.
  const SpectralIntensity shaped(
      NoiseSpectrum({19.2e9, 19.4e9, 19.7e9, 19.9e9, 20.2e9}, {1e-12, 3e-12, 2.5e-12, 2e-12, 0.5e-12}),
      FieldGeometry{});
  PoleQuadrature base;
  const double s1 = pole_integral(shaped, a, base);
  PoleQuadrature half_window = base;
  half_window.exclusion_half_width_hz /= 2;
  CHECK(std::fabs(pole_integral(shaped, a, half_window) - s1) < 0.005 * std::fabs(s1));
  PoleQuadrature fine = base;
  fine.max_log_panel_width /= 2;
  fine.inner_panels *= 2;
  CHECK(std::fabs(pole_integral(shaped, a, fine) - s1) < 0.001 * std::fabs(s1));
}

TEST_CASE("pole on the edge of the support is finite") {
  const SpectralIntensity in(NoiseSpectrum({19.78e9, 20.78e9}, {1e-12, 1e-12}), FieldGeometry{});
  const double v = pole_integral(in, 19.78e9);
  CHECK(std::isfinite(v));
  const SpectralIntensity in2(NoiseSpectrum({18.78e9, 19.78e9}, {1e-12, 1e-12}), FieldGeometry{});
  CHECK(std::isfinite(pole_integral(in2, 19.78e9)));
  PoleQuadrature narrow_bounds;
  narrow_bounds.nu_min_hz = 19.0e9;
  CHECK_THROWS_AS(pole_integral(in2, 19.78e9, narrow_bounds), ConfigError);
}

TEST_CASE("rates and shifts are linear in noise power") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const rydberg::RydbergStructure rb(rydberg::QuantumDefectTable::rubidium85());
  const auto s = parse_state("57S1/2");
  const auto p = parse_state("57P1/2");
  for (int trial = 0; trial < 10; ++trial) {
    double nu = 15e9 + 10e9 * u(rng);
    std::vector<double> f, v;
    for (int k = 0; k < 12; ++k) {
      nu += 1e8 * (0.5 + u(rng));
      f.push_back(nu);
      v.push_back(1e-12 * u(rng));
    }
    const NoiseSpectrum sp(f, v);
    const SpectralIntensity one(sp, FieldGeometry{});
    const SpectralIntensity two(sp.scaled(2.0), FieldGeometry{});
    CouplingOptions opt;
    opt.n_window = 3;
    const auto c1 = compute_couplings(rb, s, p, one, opt);
    const auto c2 = compute_couplings(rb, s, p, two, opt);
    CHECK(c2.rd3 == doctest::Approx(2 * c1.rd3).epsilon(1e-12));
    CHECK(c2.re4 == doctest::Approx(2 * c1.re4).epsilon(1e-12));
    CHECK(c2.r34 == doctest::Approx(2 * c1.r34).epsilon(1e-12));
    CHECK(c2.shift3_hz == doctest::Approx(2 * c1.shift3_hz).epsilon(1e-12));
    CHECK(c2.shift4_hz == doctest::Approx(2 * c1.shift4_hz).epsilon(1e-12));
  }
}

TEST_CASE("shift directions for blue and red bands on the driven pair") {
  const rydberg::RydbergStructure rb(rydberg::QuantumDefectTable::rubidium85());
  const auto s = parse_state("57S1/2");
  const auto p = parse_state("57P1/2");
  const SpectralIntensity blue(make_rect_spectrum(20.7e9, 1e9, dbm_to_watts(5.4)), FieldGeometry{});
  const SpectralIntensity red(make_rect_spectrum(18.7e9, 1e9, dbm_to_watts(6.6)), FieldGeometry{});
  const auto cb = compute_couplings(rb, s, p, blue);
  const auto cr = compute_couplings(rb, s, p, red);
  CHECK(cb.shift3_hz > 0.0);
  CHECK(cr.shift3_hz < 0.0);
  CHECK(cb.shift4_hz < 0.0);
  CHECK(cr.shift4_hz > 0.0);
  CHECK(cb.shift3_hz > 1e6);
  CHECK(cb.r34 == 0.0);

  CouplingOptions wide;
  wide.n_window = 15;
  const auto cw = compute_couplings(rb, s, p, blue, wide);
  CHECK(std::fabs(cw.shift3_hz - cb.shift3_hz) < 0.01 * std::fabs(cb.shift3_hz));
  CHECK(std::fabs(cw.shift4_hz - cb.shift4_hz) < 0.01 * std::fabs(cb.shift4_hz));
  CHECK(std::fabs(cw.rd3 - cb.rd3) <= 0.01 * cb.rd3);
  CHECK(std::fabs(cw.re4 - cb.re4) <= 0.01 * cb.re4);
}

TEST_CASE("AC shift of a single partner uses the signed transition frequency") {
  const SpectralIntensity in(NoiseSpectrum({20.2e9, 21.2e9}, {1e-12, 1e-12}), FieldGeometry{});
  const Perturber up{parse_state("57P1/2"), 19.78e9, 1120};
  const Perturber down{parse_state("57S1/2"), -19.78e9, 1120};
  const double s_up = ac_shift(std::span(&up, 1), in);
  const double s_down = ac_shift(std::span(&down, 1), in);
  CHECK(s_up > 0.0);
  CHECK(s_down == doctest::Approx(-s_up).epsilon(1e-14));
  CHECK(ac_shift(std::span(&up, 1), SpectralIntensity()) == 0.0);
}

TEST_CASE("coherent RF shift hook") {
  const rydberg::RydbergStructure rb(rydberg::QuantumDefectTable::rubidium85());
  const auto s = parse_state("57S1/2");
  const auto p = parse_state("57P1/2");
  const auto pol = rydberg::Polarization::along_quantization_axis();
  CHECK(coherent_rf_shift(rb, s, p, 19.78e9, 0.0, pol, 5) == 0.0);
  const double a = coherent_rf_shift(rb, s, p, 19.78e9, 5.0, pol, 5);
  const double b = coherent_rf_shift(rb, s, p, 19.78e9, 10.0, pol, 5);
  CHECK(std::isfinite(a));
  CHECK(b == doctest::Approx(4 * a).epsilon(1e-12));
}
