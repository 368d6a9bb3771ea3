#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rydnoise/analysis/peaks.hpp"
#include "rydnoise/noise/couplings.hpp"
#include "rydnoise/noise/field.hpp"
#include "rydnoise/spectroscopy/spectrum.hpp"

namespace rydnoise::analysis {

// Forward model for one experiment: a laser scan at fixed probe and coupling
// beams, with the RF Rabi frequency set from a CW horn power and the noise
// couplings supplied per call.
struct ForwardModel {
  spectroscopy::SystemConfig system;  // drives.rf_rabi and decays.noise are overwritten
  std::vector<double> scan_grid;      // rad/s
  spectroscopy::ScanAxis axis = spectroscopy::ScanAxis::coupling;
  // When set, every spectrum is checked against a refined velocity grid.
  std::optional<double> velocity_tolerance;
  double rf_dipole_ea0 = 1120.0;
  double rf_frequency_hz = 19.7825e9;
  noise::FieldGeometry geometry;
  double prominence_fraction = 0.05;
};

// Omega = p E / hbar, rad/s.
double rf_rabi(double efield_v_m, double dipole_ea0);

struct ModelSpectrum {
  double cw_power_w = 0.0;
  double efield_v_m = 0.0;  // far-field CW amplitude at the atoms
  spectroscopy::TransmissionSpectrum spectrum;
  PeakSet peaks;
};

// Absolute prominence threshold: prominence_fraction times the prominence of
// the no-noise, no-RF EIT peak.
double suppression_threshold(const ForwardModel& model);

ModelSpectrum model_spectrum(const ForwardModel& model, double cw_power_w, const noise::NoiseCouplings& noise,
                             double threshold);

struct OffsetResult {
  std::optional<double> offset_hz;  // nullopt: EIT suppressed below threshold
  PeakSet peaks;
};

// Position of the most prominent peak of the Omega_RF = 0 scan.
OffsetResult zero_rf_offset(const ForwardModel& model, const noise::NoiseCouplings& noise, double threshold);

struct CsnrPoint {
  double cw_power_w = 0.0;
  double csnr = 0.0;  // CW power over integrated noise power, both at the horn input
  double farfield_v_m = 0.0;
  std::optional<double> clean_efield_v_m;  // inferred without noise
  std::optional<double> noisy_efield_v_m;  // inferred with noise
  std::optional<double> percent_difference;
};

// Runs the forward model with and without noise at each CW power and compares
// the fields inferred from the AT splitting (D from the scan axis). Missing
// splittings give empty optionals rather than errors.
std::vector<CsnrPoint> csnr_analysis(const ForwardModel& model, std::span<const double> cw_powers_w,
                                     const noise::NoiseCouplings& noise, double noise_power_w, double threshold);

}  // namespace rydnoise::analysis
