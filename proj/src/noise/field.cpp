#include "rydnoise/noise/field.hpp"

#include <cmath>

#include "rydnoise/constants.hpp"
#include "rydnoise/error.hpp"

namespace rydnoise::noise {

namespace c = constants;

void FieldGeometry::validate() const {
  if (!(distance_m > 0.0) || !std::isfinite(distance_m)) {
    throw ConfigError("horn distance must be positive");
  }
  if (!(enhancement > 0.0) || !std::isfinite(enhancement)) {
    throw ConfigError("field enhancement factor must be positive");
  }
  if (!std::isfinite(gain.reference_gain_db) || !std::isfinite(gain.slope_db_per_ghz) ||
      !(gain.reference_frequency_hz > 0.0)) {
    throw ConfigError("invalid horn gain model");
  }
}

double horn_gain_db(double nu_hz, const GainModel& gain) noexcept {
  return gain.reference_gain_db +
         gain.slope_db_per_ghz * (nu_hz - gain.reference_frequency_hz) * 1e-9;
}

double horn_gain_linear(double nu_hz, const GainModel& gain) noexcept {
  return std::pow(10.0, horn_gain_db(nu_hz, gain) / 10.0);
}

double farfield_efield(double p_w, double nu_hz, const FieldGeometry& g) {
  if (!(p_w >= 0.0)) throw std::invalid_argument("source power must be non-negative");
  return (g.enhancement / g.distance_m) * std::sqrt(c::c * c::mu0 / c::two_pi) *
         std::sqrt(p_w * horn_gain_linear(nu_hz, g.gain));
}

SpectralIntensity::SpectralIntensity(NoiseSpectrum spectrum, FieldGeometry geometry)
    : spectrum_(std::move(spectrum)), geometry_(geometry) {
  geometry_.validate();
}

double SpectralIntensity::field_spectral_density(double nu_hz) const {
  const double psd = spectrum_.psd(nu_hz);
  if (psd == 0.0) return 0.0;
  const double ax = geometry_.enhancement / geometry_.distance_m;
  return ax * ax * (c::c * c::mu0 / c::two_pi) * horn_gain_linear(nu_hz, geometry_.gain) * psd;
}

double SpectralIntensity::operator()(double nu_hz) const {
  const double psd = spectrum_.psd(nu_hz);
  if (psd == 0.0) return 0.0;
  const double a = geometry_.enhancement;
  const double x = geometry_.distance_m;
  return a * a * horn_gain_linear(nu_hz, geometry_.gain) * psd / (4.0 * c::pi * x * x);
}

}  // namespace rydnoise::noise
