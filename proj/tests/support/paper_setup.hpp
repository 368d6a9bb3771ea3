#pragma once

// Experiment-like settings shared by the spectroscopy and analysis tests.

#include <vector>

#include "rydnoise/analysis/measurement.hpp"
#include "rydnoise/noise/spectrum.hpp"
#include "rydnoise/spectroscopy/spectrum.hpp"

namespace rydnoise::testing {

inline constexpr double kCouplingDipoleEa0 = 0.00356;

inline spectroscopy::SystemConfig paper_system(int velocity_classes) {
  spectroscopy::SystemConfig cfg;
  cfg.drives.probe_rabi = spectroscopy::rabi_from_beam(cfg.cell.probe.power_w, cfg.cell.probe.fwhm_m, cfg.probe_dipole_ea0);
  cfg.drives.coupling_rabi =
      spectroscopy::rabi_from_beam(cfg.cell.coupling.power_w, cfg.cell.coupling.fwhm_m, kCouplingDipoleEa0);
  cfg.velocity.classes = velocity_classes;
  return cfg;
}

inline std::vector<double> mhz_grid(double lo_mhz, double hi_mhz, std::size_t points) {
  return spectroscopy::linear_grid(constants::two_pi * lo_mhz * 1e6, constants::two_pi * hi_mhz * 1e6, points);
}

inline analysis::ForwardModel paper_model(int velocity_classes, double half_span_mhz, std::size_t points) {
  analysis::ForwardModel m;
  m.system = paper_system(velocity_classes);
  m.scan_grid = mhz_grid(-half_span_mhz, half_span_mhz, points);
  return m;
}

// Idealized filter: one or more 1 GHz rectangles sharing `dbm` equally.
inline noise::NoiseSpectrum filter_rectangles(std::vector<double> centers_hz, double dbm) {
  std::vector<noise::SpectrumSegment> segs;
  const double share = noise::dbm_to_watts(dbm) / static_cast<double>(centers_hz.size());
  for (double nu : centers_hz) segs.push_back(noise::make_rect_spectrum(nu, 1e9, share).segments().front());
  return noise::NoiseSpectrum(std::move(segs));
}

}  // namespace rydnoise::testing
