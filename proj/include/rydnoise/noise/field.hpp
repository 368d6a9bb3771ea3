#pragma once

#include "rydnoise/noise/spectrum.hpp"

namespace rydnoise::noise {

// Log-linear horn gain: G(nu) [dB] = reference_gain_db + slope * (nu_GHz - reference_GHz).
struct GainModel {
  double reference_gain_db = 15.0;
  double slope_db_per_ghz = 3.0 / 8.5;
  double reference_frequency_hz = 18e9;
};

// Horn-to-atoms geometry: distance, standing-wave enhancement of the field
// amplitude inside the cell, and the horn gain model.
struct FieldGeometry {
  double distance_m = 0.342;
  double enhancement = 1.73;
  GainModel gain;

  void validate() const;  // throws ConfigError
};

double horn_gain_db(double nu_hz, const GainModel& gain) noexcept;
double horn_gain_linear(double nu_hz, const GainModel& gain) noexcept;

// Far-field amplitude at the atoms for a CW source power p_w fed to the horn:
// |E| = (A / x) sqrt(c mu0 / 2 pi) sqrt(P G_L(nu)), V/m.
double farfield_efield(double p_w, double nu_hz, const FieldGeometry& geometry);

// Noise spectral intensity at the atoms.
//
// field_spectral_density() is the far-field amplitude law applied per unit
// bandwidth, (A^2 / x^2) (c mu0 / 2 pi) G_L dP/dnu, in V^2 / (m^2 Hz): the
// spectral density of |E|^2. operator() returns the corresponding optical
// intensity c eps0 |E|^2 / 2 per unit bandwidth, A^2 G_L dP/dnu / (4 pi x^2),
// in W / (m^2 Hz); this is the quantity the transition rates and shifts use.
class SpectralIntensity {
 public:
  SpectralIntensity() = default;  // zero everywhere
  SpectralIntensity(NoiseSpectrum spectrum, FieldGeometry geometry);

  double operator()(double nu_hz) const;
  double field_spectral_density(double nu_hz) const;

  const NoiseSpectrum& spectrum() const noexcept { return spectrum_; }
  const FieldGeometry& geometry() const noexcept { return geometry_; }
  bool is_zero() const noexcept { return spectrum_.is_zero(); }

 private:
  NoiseSpectrum spectrum_;
  FieldGeometry geometry_;
};

}  // namespace rydnoise::noise
