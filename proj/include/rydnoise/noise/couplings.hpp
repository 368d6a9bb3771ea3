#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rydnoise/noise/field.hpp"
#include "rydnoise/rydberg/structure.hpp"

namespace rydnoise::noise {

// Quadrature settings for the shift integrals.
//
// Away from the pole the integrand is integrated in t = ln|nu - a| with
// Gauss-Legendre panels no wider than max_log_panel_width, broken at every psd
// sample. Within exclusion_half_width_hz of a pole inside the support the
// symmetric combination (F(a + u) - F(a - u)) / u is integrated instead, which
// is regular, so the result is the Cauchy principal value and does not depend
// on the window size beyond quadrature error. If the pole sits exactly on the
// edge of the support the one-sided remainder is cut at the window and the
// value depends (logarithmically) on it.
struct PoleQuadrature {
  double exclusion_half_width_hz = 1e6;
  double max_log_panel_width = 0.5;
  int points_per_panel = 8;
  int inner_panels = 4;
  // Integration bounds; default to the spectrum support. When given they must
  // cover the support.
  std::optional<double> nu_min_hz;
  std::optional<double> nu_max_hz;
};

// Principal value of integral I(nu) / (nu^2 (nu^2 - a^2)) dnu over the noise
// support, a > 0. Units: W / (m^2 Hz^4).
double pole_integral(const SpectralIntensity& intensity, double a_hz, const PoleQuadrature& q = {});

// Incoherent transition rate (1/s) driven by the noise on a transition of
// frequency |nu_fi| with net dipole d (e a0): e^2 |r|^2 I(|nu_fi|) / (2 eps0 hbar^2 c).
// Symmetric in i and f; zero outside the noise support.
double noise_rate(double transition_hz, double dipole_ea0, const SpectralIntensity& intensity);

// Noise-induced shift (Hz) of one level from the listed partners
// (signed nu_fi = (E_f - E_i)/h, dipoles in e a0). Partner contributions are
// summed with compensated summation in list order.
double ac_shift(std::span<const rydberg::Perturber> partners, const SpectralIntensity& intensity,
                const PoleQuadrature& q = {});

// Noise parameters consumed by the master equation.
struct NoiseCouplings {
  double r34 = 0.0;        // 1/s, rate on the coherently driven pair
  double rd3 = 0.0;        // 1/s, |3> <-> fictive |d>
  double re4 = 0.0;        // 1/s, |4> <-> fictive |e>
  double shift3_hz = 0.0;  // level shift of |3>
  double shift4_hz = 0.0;  // level shift of |4>

  void validate() const;  // ConfigError on negative or non-finite rates
  bool operator==(const NoiseCouplings&) const = default;
};

// Sum of noise_rate over the perturber lists (which must not contain the
// driven pair) plus the driven-pair rate. Shifts are left zero.
NoiseCouplings lumped_rates(std::span<const rydberg::Perturber> perturbers3,
                            std::span<const rydberg::Perturber> perturbers4, double nu34_hz,
                            double dipole34_ea0, const SpectralIntensity& intensity);

struct CouplingOptions {
  int n_window = 10;
  rydberg::Polarization polarization = rydberg::Polarization::along_quantization_axis();
  PoleQuadrature quadrature;
  // Overrides the computed net dipole of the driven pair.
  std::optional<double> driven_dipole_ea0;
};

// Full noise coupling set for the driven pair (state3 lower, state4 upper).
// Shifts include the driven partner; lumped rates exclude it.
NoiseCouplings compute_couplings(const rydberg::RydbergStructure& structure,
                                 const rydberg::RydbergState& state3,
                                 const rydberg::RydbergState& state4,
                                 const SpectralIntensity& intensity,
                                 const CouplingOptions& options = {});

// Optional second-order shift (Hz) of `state` from a monochromatic RF field of
// amplitude efield_v_per_m at rf_hz through every dipole partner in the window
// except `resonant_partner`, which the master equation treats exactly:
// sum_f (Omega_f / 2pi)^2 / 4 * [1 / (nu_rf - nu_fi) - 1 / (nu_rf + nu_fi)].
double coherent_rf_shift(const rydberg::RydbergStructure& structure,
                         const rydberg::RydbergState& state,
                         const rydberg::RydbergState& resonant_partner, double rf_hz,
                         double efield_v_per_m, const rydberg::Polarization& polarization,
                         int n_window);

}  // namespace rydnoise::noise
